#include "solkin/field.hpp"

#include <cmath>

#include "solkin/common.hpp"

namespace solkin {

NodalField::NodalField(Species species, Grid1D x, Grid1D v, int k)
    : species_(species), x_(std::move(x)), v_(std::move(v)), k_(k) {
    require(k_ >= 0, "NodalField: degree must be >= 0");
    require(v_.nblocks() == 1, "NodalField: v grid must be a single uniform block");
    require(std::abs(v_.left() + v_.right()) <= 1e-12 * v_.extent(),
            "NodalField: v grid must be symmetric about 0");
    data_.assign(size_t(nx()) * nv() * (k_ + 1) * (k_ + 1), 0.0);
}

void NodalField::gather_v_line(int xc, int xn, std::span<double> out) const {
    const size_t stride = size_t(nx()) * (k_ + 1);
    const double* src = data_.data() + index(xc, xn, 0, 0);
    const size_t n = size_t(nv()) * (k_ + 1);
    for (size_t j = 0; j < n; ++j) out[j] = src[j * stride];
}

void NodalField::scatter_v_line(int xc, int xn, std::span<const double> in) {
    const size_t stride = size_t(nx()) * (k_ + 1);
    double* dst = data_.data() + index(xc, xn, 0, 0);
    const size_t n = size_t(nv()) * (k_ + 1);
    for (size_t j = 0; j < n; ++j) dst[j * stride] = in[j];
}

double NodalField::x_node(int xc, int xn) const {
    const auto& basis = ReferenceBasis::get(k_);
    return x_.cell_left(xc) + x_.cell_width(xc) * basis.nodes()[xn];
}

double NodalField::v_node(int vc, int vn) const {
    const auto& basis = ReferenceBasis::get(k_);
    return v_.cell_left(vc) + v_.cell_width(vc) * basis.nodes()[vn];
}

void NodalField::fill(const std::function<double(double, double)>& f) {
    const int p = k_ + 1;
    for (int vc = 0; vc < nv(); ++vc)
        for (int vn = 0; vn < p; ++vn) {
            double v = v_node(vc, vn);
            for (int xc = 0; xc < nx(); ++xc)
                for (int xn = 0; xn < p; ++xn) at(xc, xn, vc, vn) = f(x_node(xc, xn), v);
        }
}

double NodalField::mass() const {
    const auto& basis = ReferenceBasis::get(k_);
    const int p = k_ + 1;
    double acc = 0.0;
    for (int vc = 0; vc < nv(); ++vc) {
        double dv = v_.cell_width(vc);
        for (int vn = 0; vn < p; ++vn) {
            double wv = basis.weights()[vn] * dv;
            for (int xc = 0; xc < nx(); ++xc) {
                double dx = x_.cell_width(xc);
                for (int xn = 0; xn < p; ++xn)
                    acc += wv * basis.weights()[xn] * dx * at(xc, xn, vc, vn);
            }
        }
    }
    return acc;
}

double NodalField::l2_norm() const {
    const auto& basis = ReferenceBasis::get(k_);
    const int p = k_ + 1;
    double acc = 0.0;
    for (int vc = 0; vc < nv(); ++vc) {
        double dv = v_.cell_width(vc);
        for (int vn = 0; vn < p; ++vn) {
            double wv = basis.weights()[vn] * dv;
            for (int xc = 0; xc < nx(); ++xc) {
                double dx = x_.cell_width(xc);
                for (int xn = 0; xn < p; ++xn) {
                    double f = at(xc, xn, vc, vn);
                    acc += wv * basis.weights()[xn] * dx * f * f;
                }
            }
        }
    }
    return std::sqrt(acc);
}

bool NodalField::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

void NodalField::reset_v(Grid1D v_new, std::vector<double> data_new) {
    require(v_new.ncells() == nv(), "reset_v: cell count must be preserved");
    require(data_new.size() == data_.size(), "reset_v: payload size mismatch");
    v_ = std::move(v_new);
    data_ = std::move(data_new);
}

}  // namespace solkin

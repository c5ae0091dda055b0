#include "solkin/poisson.hpp"

#include <algorithm>
#include <cmath>

#include "solkin/basis.hpp"
#include "solkin/common.hpp"

extern "C" {
void dpbtrf_(const char* uplo, const int* n, const int* kd, double* ab, const int* ldab,
             int* info);
void dpbtrs_(const char* uplo, const int* n, const int* kd, const int* nrhs, const double* ab,
             const int* ldab, double* b, const int* ldb, int* info);
}

namespace solkin {

PoissonOperator::PoissonOperator(const Grid1D& grid, int k, double penalty_scale)
    : grid_(grid), k_(k), penalty_scale_(penalty_scale), p_(k + 2),
      n_(grid.ncells() * (k + 2)), kd_(2 * (k + 2) - 1) {
    require(k >= 0, "PoissonOperator: degree must be >= 0");
    require(penalty_scale > 0, "PoissonOperator: penalty_scale must be positive");

    const auto& bk = ReferenceBasis::get(k_);
    const auto& bs = ReferenceBasis::get(k_ + 1);
    interp_.resize(size_t(p_) * (k_ + 1));
    for (int m = 0; m < p_; ++m)
        for (int n = 0; n <= k_; ++n) interp_[size_t(m) * (k_ + 1) + n] = bk.lagrange(n, bs.nodes()[m]);
    deriv_at_k_.resize(size_t(k_ + 1) * p_);
    for (int m = 0; m <= k_; ++m)
        for (int n = 0; n < p_; ++n)
            deriv_at_k_[size_t(m) * p_ + n] = bs.lagrange_derivative(n, bk.nodes()[m]);

    assemble();
    factorize();
}

void PoissonOperator::assemble() {
    const auto& bs = ReferenceBasis::get(k_ + 1);
    const int p = p_;
    const int ldab = kd_ + 1;
    band_.assign(size_t(ldab) * n_, 0.0);

    auto add = [&](int i, int j, double v) {
        if (i >= j) band_[size_t(j) * ldab + (i - j)] += v;
    };
    // local 2p x 2p (or p x p) blocks are formed in full and folded into the
    // lower band; the defect tracks any asymmetry of the fold
    auto add_block = [&](int gi, int gj, const std::vector<double>& M, int rows, int cols) {
        for (int a = 0; a < rows; ++a)
            for (int b = 0; b < cols; ++b) add(gi + a, gj + b, M[size_t(a) * cols + b]);
    };

    // trace and physical-derivative trace vectors of the solve basis
    std::vector<double> t0(p), t1(p), d0(p), d1(p);
    for (int n = 0; n < p; ++n) {
        t0[n] = bs.lagrange(n, 0.0);
        t1[n] = bs.lagrange(n, 1.0);
        d0[n] = bs.lagrange_derivative(n, 0.0);
        d1[n] = bs.lagrange_derivative(n, 1.0);
    }

    // volume terms: (1/h) D^T diag(w) D per cell
    for (int c = 0; c < grid_.ncells(); ++c) {
        double h = grid_.cell_width(c);
        std::vector<double> vol(size_t(p) * p, 0.0);
        for (int q = 0; q < p; ++q)
            for (int a = 0; a < p; ++a)
                for (int b = 0; b < p; ++b)
                    vol[size_t(a) * p + b] += bs.weights()[q] * bs.diff(q, a) * bs.diff(q, b) / h;
        add_block(c * p, c * p, vol, p, p);
    }

    double pen = penalty_scale_ * (k_ + 2) * (k_ + 2);

    // interior faces: -{u'}[v] - {v'}[u] + sigma [u][v]
    for (int c = 0; c + 1 < grid_.ncells(); ++c) {
        double hl = grid_.cell_width(c), hr = grid_.cell_width(c + 1);
        double sigma = pen / std::min(hl, hr);
        std::vector<double> J(2 * p), D(2 * p);
        for (int n = 0; n < p; ++n) {
            J[n] = t1[n];          // left-cell trace
            J[p + n] = -t0[n];     // minus right-cell trace
            D[n] = 0.5 * d1[n] / hl;
            D[p + n] = 0.5 * d0[n] / hr;
        }
        std::vector<double> M(size_t(2 * p) * 2 * p, 0.0);
        double defect = 0.0;
        for (int a = 0; a < 2 * p; ++a)
            for (int b = 0; b < 2 * p; ++b) {
                M[size_t(a) * 2 * p + b] = sigma * J[a] * J[b] - D[a] * J[b] - J[a] * D[b];
                if (b < a)
                    defect = std::max(defect, std::abs(M[size_t(a) * 2 * p + b] -
                                                       M[size_t(b) * 2 * p + a]));
            }
        symmetry_defect_ = std::max(symmetry_defect_, defect);
        add_block(c * p, c * p, M, 2 * p, 2 * p);
    }

    // Dirichlet boundary faces; outward normal -1 on the left, +1 on the right
    {
        double h = grid_.cell_width(0);
        double sigma = pen / h;
        std::vector<double> M(size_t(p) * p);
        for (int a = 0; a < p; ++a)
            for (int b = 0; b < p; ++b)
                M[size_t(a) * p + b] =
                    sigma * t0[a] * t0[b] + d0[a] / h * t0[b] + t0[a] * d0[b] / h;
        add_block(0, 0, M, p, p);
    }
    {
        int c = grid_.ncells() - 1;
        double h = grid_.cell_width(c);
        double sigma = pen / h;
        std::vector<double> M(size_t(p) * p);
        for (int a = 0; a < p; ++a)
            for (int b = 0; b < p; ++b)
                M[size_t(a) * p + b] =
                    sigma * t1[a] * t1[b] - d1[a] / h * t1[b] - t1[a] * d1[b] / h;
        add_block(c * p, c * p, M, p, p);
    }
}

void PoissonOperator::factorize() {
    factor_ = band_;
    const int ldab = kd_ + 1;
    int info = 0;
    dpbtrf_("L", &n_, &kd_, factor_.data(), &ldab, &info);
    require(info == 0,
            "Poisson factorization failed (matrix not positive definite; "
            "penalty_scale too small?), dpbtrf info = " +
                std::to_string(info));
}

std::vector<double> PoissonOperator::build_load(std::span<const double> rho) const {
    require(rho.size() == size_t(grid_.ncells()) * (k_ + 1), "Poisson load: rho size mismatch");
    const auto& bs = ReferenceBasis::get(k_ + 1);
    std::vector<double> load(n_, 0.0);
    for (int c = 0; c < grid_.ncells(); ++c) {
        double h = grid_.cell_width(c);
        const double* rc = rho.data() + size_t(c) * (k_ + 1);
        for (int m = 0; m < p_; ++m) {
            double val = 0.0;
            for (int n = 0; n <= k_; ++n) val += interp_[size_t(m) * (k_ + 1) + n] * rc[n];
            load[size_t(c) * p_ + m] = bs.weights()[m] * h * val;
        }
    }
    return load;
}

std::vector<double> PoissonOperator::apply(std::span<const double> x) const {
    const int ldab = kd_ + 1;
    std::vector<double> y(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
        y[j] += band_[size_t(j) * ldab] * x[j];
        int imax = std::min(n_ - 1, j + kd_);
        for (int i = j + 1; i <= imax; ++i) {
            double v = band_[size_t(j) * ldab + (i - j)];
            y[i] += v * x[j];
            y[j] += v * x[i];
        }
    }
    return y;
}

std::vector<double> PoissonOperator::solve_raw(std::span<const double> load) const {
    std::vector<double> x(load.begin(), load.end());
    const int ldab = kd_ + 1;
    const int one = 1;
    int info = 0;
    dpbtrs_("L", &n_, &kd_, &one, factor_.data(), &ldab, x.data(), &n_, &info);
    require(info == 0, "Poisson back-substitution failed, dpbtrs info = " + std::to_string(info));
    return x;
}

FieldPair PoissonOperator::solve(std::span<const double> rho) const {
    FieldPair out;
    out.grid = grid_;
    out.k = k_;
    out.phi = solve_raw(build_load(rho));
    out.E.assign(size_t(grid_.ncells()) * (k_ + 1), 0.0);
    for (int c = 0; c < grid_.ncells(); ++c) {
        double h = grid_.cell_width(c);
        const double* pc = out.phi.data() + size_t(c) * p_;
        for (int m = 0; m <= k_; ++m) {
            double dphi = 0.0;
            for (int n = 0; n < p_; ++n) dphi += deriv_at_k_[size_t(m) * p_ + n] * pc[n];
            out.E[size_t(c) * (k_ + 1) + m] = -dphi / h;
        }
    }
    return out;
}

std::vector<double> charge_density(const NodalField& f_e, const NodalField& f_i) {
    require(f_e.x() == f_i.x(), "charge_density: species must share the x grid");
    require(f_e.degree() == f_i.degree(), "charge_density: species must share the degree");
    const auto& basis = ReferenceBasis::get(f_e.degree());
    const int p = f_e.nodes_per_cell();
    const int nx = f_e.nx();
    std::vector<double> rho(size_t(nx) * p, 0.0);

    auto accumulate = [&](const NodalField& f, double sign) {
        for (int vc = 0; vc < f.nv(); ++vc) {
            double dv = f.v().cell_width(vc);
            for (int vn = 0; vn < p; ++vn) {
                double w = sign * basis.weights()[vn] * dv;
                for (int xc = 0; xc < nx; ++xc)
                    for (int xn = 0; xn < p; ++xn)
                        rho[size_t(xc) * p + xn] += w * f.at(xc, xn, vc, vn);
            }
        }
    };
    accumulate(f_i, +1.0);
    accumulate(f_e, -1.0);
    return rho;
}

}  // namespace solkin

#pragma once

#include <functional>
#include <span>
#include <string>

#include "solkin/basis.hpp"
#include "solkin/grid.hpp"

namespace solkin {

enum class Species { Electron, Ion };

inline const char* species_name(Species s) { return s == Species::Electron ? "electron" : "ion"; }

// Per-species phase-space density: degree-k nodal DG coefficients on the
// tensor grid. Memory layout is (v-cell, v-node, x-cell, x-node) with the
// x index fastest, so an x sweep line is contiguous and a v sweep line has a
// single uniform stride. Lines are disjoint; sweeps may update distinct
// lines concurrently.
class NodalField {
  public:
    NodalField() = default;
    NodalField(Species species, Grid1D x, Grid1D v, int k);

    Species species() const { return species_; }
    const Grid1D& x() const { return x_; }
    const Grid1D& v() const { return v_; }
    int degree() const { return k_; }
    int nodes_per_cell() const { return k_ + 1; }
    int nx() const { return x_.ncells(); }
    int nv() const { return v_.ncells(); }
    size_t size() const { return data_.size(); }

    double& at(int xc, int xn, int vc, int vn) { return data_[index(xc, xn, vc, vn)]; }
    double at(int xc, int xn, int vc, int vn) const { return data_[index(xc, xn, vc, vn)]; }

    std::span<double> raw() { return data_; }
    std::span<const double> raw() const { return data_; }

    // Contiguous x line (nx * (k+1) values) for a fixed v degree of freedom.
    std::span<double> x_line(int vc, int vn) {
        return std::span<double>(data_.data() + index(0, 0, vc, vn), size_t(nx()) * (k_ + 1));
    }
    std::span<const double> x_line(int vc, int vn) const {
        return std::span<const double>(data_.data() + index(0, 0, vc, vn), size_t(nx()) * (k_ + 1));
    }

    // Strided v line for a fixed x degree of freedom.
    void gather_v_line(int xc, int xn, std::span<double> out) const;
    void scatter_v_line(int xc, int xn, std::span<const double> in);

    // Physical coordinate of a node.
    double x_node(int xc, int xn) const;
    double v_node(int vc, int vn) const;

    // Sample an (x,v) function at all tensor nodes.
    void fill(const std::function<double(double, double)>& f);

    // Total integral of f over phase space (exact quadrature, fixed order).
    double mass() const;
    // L2 norm sqrt(integral of f^2).
    double l2_norm() const;
    bool all_finite() const;

    // Replace the v grid (same cell count) and the payload; used by the
    // velocity-domain shrink.
    void reset_v(Grid1D v_new, std::vector<double> data_new);

  private:
    size_t index(int xc, int xn, int vc, int vn) const {
        return ((size_t(vc) * (k_ + 1) + vn) * nx() + xc) * (k_ + 1) + xn;
    }

    Species species_ = Species::Electron;
    Grid1D x_;
    Grid1D v_;
    int k_ = 0;
    std::vector<double> data_;
};

}  // namespace solkin

#pragma once

#include <span>
#include <vector>

#include "solkin/field.hpp"
#include "solkin/grid.hpp"

namespace solkin {

// Electric potential (degree k+1 per cell) and field E = -phi' (degree k,
// stored at the degree-k nodes the v sweep reads). Immutable after solve.
struct FieldPair {
    Grid1D grid;
    int k = 0;
    std::vector<double> phi;  // ncells * (k+2)
    std::vector<double> E;    // ncells * (k+1)
};

// SIPG discretization of -phi'' = rho on [x_left, x_right] with homogeneous
// Dirichlet ends, assembled at degree k+1 and factorized once. The load is
// the degree-k charge density re-evaluated at the elevated node set, which
// recovers order k+2 for phi and k+1 for E.
class PoissonOperator {
  public:
    PoissonOperator(const Grid1D& grid, int k, double penalty_scale);

    FieldPair solve(std::span<const double> rho) const;

    const Grid1D& grid() const { return grid_; }
    int degree() const { return k_; }
    int unknowns() const { return n_; }
    double penalty_scale() const { return penalty_scale_; }
    // max |M_ij - M_ji| recorded while folding local blocks into the band
    double symmetry_defect() const { return symmetry_defect_; }

    // Internals exposed for the residual and reuse checks.
    std::vector<double> build_load(std::span<const double> rho) const;
    std::vector<double> apply(std::span<const double> x) const;
    std::vector<double> solve_raw(std::span<const double> load) const;

  private:
    void assemble();
    void factorize();

    Grid1D grid_;
    int k_;
    double penalty_scale_;
    int p_;   // k+2 unknowns per cell
    int n_;   // total unknowns
    int kd_;  // subdiagonals: 2p-1
    std::vector<double> band_;    // lower band, column-major, ldab = kd+1
    std::vector<double> factor_;  // Cholesky factor from dpbtrf
    std::vector<double> interp_;        // (k+2)x(k+1): degree-k poly at solve nodes
    std::vector<double> deriv_at_k_;    // (k+1)x(k+2): d/dxi of solve basis at degree-k nodes
    double symmetry_defect_ = 0.0;
};

// rho at the degree-k x nodes: the v-integral of f_i minus f_e, each species
// integrated on its own v grid with exact quadrature.
std::vector<double> charge_density(const NodalField& f_e, const NodalField& f_i);

}  // namespace solkin

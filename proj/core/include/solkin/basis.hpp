#pragma once

#include <span>
#include <utility>
#include <vector>

namespace solkin {

/// Gauss-Legendre nodes and weights on the reference cell [0,1].
/// k+1 points, weights sum to 1, exact for polynomials of degree <= 2k+1.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int k);

// Reference-cell machinery for one polynomial degree k: quadrature nodes and
// weights on [0,1], Lagrange evaluation (including the natural extension
// outside [0,1]), nodal differentiation, and the nodal->monomial map used by
// the exact extremum search. Immutable after construction; share freely.
class ReferenceBasis {
  public:
    explicit ReferenceBasis(int degree);

    // Cached instance; valid for any k >= 0, the solver uses k in {0..6}.
    static const ReferenceBasis& get(int degree);

    int degree() const { return k_; }
    int npoints() const { return k_ + 1; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    // d/dxi of the nodal interpolant at the nodes: u'(xi_m) = sum_n diff(m,n) u_n.
    double diff(int m, int n) const { return diff_[m * npoints() + n]; }

    // Lagrange cardinal function l_n evaluated anywhere (natural extension).
    double lagrange(int n, double xi) const;

    // d l_n / dxi evaluated anywhere (including at the nodes).
    double lagrange_derivative(int n, double xi) const;

    // Value of the interpolant with the given nodal values at xi.
    double evaluate(std::span<const double> nodal, double xi) const;

    // Quadrature mean over [0,1]: sum_j w_j u_j.
    double mean(std::span<const double> nodal) const;

    // Exact integral of the interpolant over an arbitrary interval [a,b] in
    // reference coordinates (extension allowed outside [0,1]).
    double integrate(std::span<const double> nodal, double a, double b) const;

    // Moments m_n = \int_a^b l_n(xi) dxi, so that integrate(u,a,b) = m . u.
    std::vector<double> interval_moments(double a, double b) const;

    // Monomial coefficients c_0..c_k of the interpolant: u(xi) = sum c_j xi^j.
    void to_monomial(std::span<const double> nodal, std::span<double> coeffs) const;

    // Extrema of the interpolant over [a,b]. Exact for k <= 3 (derivative
    // roots via the quadratic formula); 33 Chebyshev samples plus endpoints
    // for higher degrees. Degenerate intervals (a == b) evaluate the point.
    double max_on(std::span<const double> nodal, double a, double b) const;
    double min_on(std::span<const double> nodal, double a, double b) const;

  private:
    int k_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> diff_;       // (k+1)^2 row-major
    std::vector<double> bary_;       // barycentric weights
    std::vector<double> monomial_;   // (k+1)^2 nodal -> monomial map, row-major
};

// One degree-k polynomial stored as nodal values plus its physical cell.
struct CellPolynomial {
    std::vector<double> values;  // k+1 values at the mapped Gauss nodes
    double left = 0.0;
    double width = 1.0;
};

// Evaluate a CellPolynomial at a physical coordinate x; x may lie outside
// the cell (natural polynomial extension).
double evaluate(const ReferenceBasis& basis, const CellPolynomial& p, double x);

// Quadrature mean over the cell.
double cell_mean(const ReferenceBasis& basis, const CellPolynomial& p);

// Piecewise polynomial on contiguous cells; the source type of projections.
struct PiecewisePoly {
    std::vector<double> edges;                // ncells+1, ascending
    std::vector<std::vector<double>> cells;   // nodal values per cell

    int ncells() const { return static_cast<int>(cells.size()); }
    double left() const { return edges.front(); }
    double right() const { return edges.back(); }
    int cell_of(double x) const;  // clamped to the nearest valid cell
    double evaluate(const ReferenceBasis& basis, double x) const;
};

// L2 projection of a piecewise polynomial onto a single target cell
// [left, left+width]. The source must cover the target interval. The result
// conserves the source integral over the target cell and reproduces
// polynomial sources exactly.
CellPolynomial project_L2(const ReferenceBasis& basis, const PiecewisePoly& source,
                          double left, double width);

}  // namespace solkin

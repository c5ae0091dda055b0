#include "solkin/basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "solkin/common.hpp"

namespace solkin {

namespace {

// Legendre P_n and P_n' on [-1,1] by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double t) {
    double p0 = 1.0, p1 = t;
    if (n == 0) return {1.0, 0.0};
    for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    double dp = n * (t * p1 - p0) / (t * t - 1.0);
    return {p1, dp};
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int k) {
    require(k >= 0, "gauss_legendre: degree must be >= 0");
    const int n = k + 1;
    std::vector<double> nodes(n), weights(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev initial guess, Newton iteration to 1e-15.
        double t = -std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            auto [p, dp] = legendre_with_derivative(n, t);
            double dt = p / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        auto [p, dp] = legendre_with_derivative(n, t);
        (void)p;
        nodes[i] = 0.5 * (t + 1.0);                         // map to [0,1]
        weights[i] = 1.0 / ((1.0 - t * t) * dp * dp);       // = w_[-1,1]/2
    }
    return {nodes, weights};
}

ReferenceBasis::ReferenceBasis(int degree) : k_(degree) {
    auto [n, w] = gauss_legendre(degree);
    nodes_ = std::move(n);
    weights_ = std::move(w);
    const int p = npoints();

    bary_.assign(p, 1.0);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            if (j != i) bary_[i] /= (nodes_[i] - nodes_[j]);

    diff_.assign(p * p, 0.0);
    for (int m = 0; m < p; ++m) {
        double row_sum = 0.0;
        for (int n2 = 0; n2 < p; ++n2) {
            if (n2 == m) continue;
            double d = bary_[n2] / bary_[m] / (nodes_[m] - nodes_[n2]);
            diff_[m * p + n2] = d;
            row_sum += d;
        }
        diff_[m * p + m] = -row_sum;  // derivative of a constant is zero
    }

    // Nodal -> monomial map: column n holds the monomial coefficients of l_n,
    // obtained by synthetic expansion of the product form.
    monomial_.assign(p * p, 0.0);
    for (int n2 = 0; n2 < p; ++n2) {
        std::vector<double> c(p, 0.0);
        c[0] = bary_[n2];
        int deg = 0;
        for (int j = 0; j < p; ++j) {
            if (j == n2) continue;
            // multiply by (x - nodes_[j])
            for (int d = deg; d >= 0; --d) {
                c[d + 1] += c[d];
                c[d] *= -nodes_[j];
            }
            ++deg;
        }
        for (int d = 0; d < p; ++d) monomial_[d * p + n2] = c[d];
    }
}

const ReferenceBasis& ReferenceBasis::get(int degree) {
    static std::mutex mu;
    static std::map<int, ReferenceBasis> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find(degree);
    if (it == cache.end()) it = cache.emplace(degree, ReferenceBasis(degree)).first;
    return it->second;
}

double ReferenceBasis::lagrange(int n, double xi) const {
    const int p = npoints();
    double v = bary_[n];
    for (int j = 0; j < p; ++j)
        if (j != n) v *= (xi - nodes_[j]);
    return v;
}

double ReferenceBasis::lagrange_derivative(int n, double xi) const {
    const int p = npoints();
    double acc = 0.0;
    for (int j = 0; j < p; ++j) {
        if (j == n) continue;
        double term = 1.0;
        for (int i = 0; i < p; ++i)
            if (i != n && i != j) term *= (xi - nodes_[i]);
        acc += term;
    }
    return bary_[n] * acc;
}

double ReferenceBasis::evaluate(std::span<const double> nodal, double xi) const {
    const int p = npoints();
    // Second barycentric form: exact at the nodes and on constants.
    double num = 0.0, den = 0.0;
    for (int n = 0; n < p; ++n) {
        if (xi == nodes_[n]) return nodal[n];
        double t = bary_[n] / (xi - nodes_[n]);
        num += t * nodal[n];
        den += t;
    }
    return num / den;
}

double ReferenceBasis::mean(std::span<const double> nodal) const {
    double acc = 0.0;
    for (int j = 0; j < npoints(); ++j) acc += weights_[j] * nodal[j];
    return acc;
}

double ReferenceBasis::integrate(std::span<const double> nodal, double a, double b) const {
    double acc = 0.0;
    const double len = b - a;
    for (int q = 0; q < npoints(); ++q) {
        double xi = a + len * nodes_[q];
        acc += weights_[q] * evaluate(nodal, xi);
    }
    return acc * len;
}

std::vector<double> ReferenceBasis::interval_moments(double a, double b) const {
    const int p = npoints();
    std::vector<double> m(p, 0.0);
    const double len = b - a;
    for (int q = 0; q < p; ++q) {
        double xi = a + len * nodes_[q];
        for (int n = 0; n < p; ++n) m[n] += weights_[q] * len * lagrange(n, xi);
    }
    return m;
}

void ReferenceBasis::to_monomial(std::span<const double> nodal, std::span<double> coeffs) const {
    const int p = npoints();
    for (int d = 0; d < p; ++d) {
        double acc = 0.0;
        for (int n = 0; n < p; ++n) acc += monomial_[d * p + n] * nodal[n];
        coeffs[d] = acc;
    }
}

namespace {

template <class Cmp>
double extremum_on(const ReferenceBasis& basis, std::span<const double> nodal, double a, double b,
                   Cmp better) {
    double best = basis.evaluate(nodal, a);
    if (b == a) return best;
    double vb = basis.evaluate(nodal, b);
    if (better(vb, best)) best = vb;
    const int k = basis.degree();
    if (k <= 1) return best;
    if (k <= 3) {
        // Derivative has degree <= 2: critical points in closed form.
        double c[4] = {0, 0, 0, 0};
        basis.to_monomial(nodal, std::span<double>(c, k + 1));
        // u'(x) = c1 + 2 c2 x + 3 c3 x^2
        double qa = 3.0 * c[3], qb = 2.0 * c[2], qc = c[1];
        auto consider = [&](double x) {
            if (x > a && x < b) {
                double v = basis.evaluate(nodal, x);
                if (better(v, best)) best = v;
            }
        };
        if (std::abs(qa) > 0.0) {
            double disc = qb * qb - 4.0 * qa * qc;
            if (disc >= 0.0) {
                double r = std::sqrt(disc);
                consider((-qb + r) / (2.0 * qa));
                consider((-qb - r) / (2.0 * qa));
            }
        } else if (std::abs(qb) > 0.0) {
            consider(-qc / qb);
        }
        return best;
    }
    // Dense sampling for higher degrees.
    for (int j = 0; j < 33; ++j) {
        double t = std::cos(M_PI * (2 * j + 1) / 66.0);  // Chebyshev points of (-1,1)
        double x = 0.5 * (a + b) + 0.5 * (b - a) * t;
        double v = basis.evaluate(nodal, x);
        if (better(v, best)) best = v;
    }
    return best;
}

}  // namespace

double ReferenceBasis::max_on(std::span<const double> nodal, double a, double b) const {
    return extremum_on(*this, nodal, a, b, [](double x, double y) { return x > y; });
}

double ReferenceBasis::min_on(std::span<const double> nodal, double a, double b) const {
    return extremum_on(*this, nodal, a, b, [](double x, double y) { return x < y; });
}

double evaluate(const ReferenceBasis& basis, const CellPolynomial& p, double x) {
    return basis.evaluate(p.values, (x - p.left) / p.width);
}

double cell_mean(const ReferenceBasis& basis, const CellPolynomial& p) {
    return basis.mean(p.values);
}

int PiecewisePoly::cell_of(double x) const {
    const int n = ncells();
    auto it = std::upper_bound(edges.begin(), edges.end(), x);
    int i = static_cast<int>(it - edges.begin()) - 1;
    return std::clamp(i, 0, n - 1);
}

double PiecewisePoly::evaluate(const ReferenceBasis& basis, double x) const {
    int i = cell_of(x);
    double h = edges[i + 1] - edges[i];
    return basis.evaluate(cells[i], (x - edges[i]) / h);
}

CellPolynomial project_L2(const ReferenceBasis& basis, const PiecewisePoly& source,
                          double left, double width) {
    require(width > 0, "project_L2: target width must be positive");
    require(source.left() <= left + 1e-12 * width && source.right() >= left + width - 1e-12 * width,
            "project_L2: source does not cover the target cell");
    const int p = basis.npoints();
    CellPolynomial out;
    out.left = left;
    out.width = width;
    out.values.assign(p, 0.0);

    // Split the target at interior source edges; on each smooth segment the
    // integrand l_m * source has degree <= 2k, so (k+1)-point Gauss is exact.
    std::vector<double> cuts;
    cuts.push_back(left);
    for (double e : source.edges)
        if (e > left + 1e-14 * width && e < left + width - 1e-14 * width) cuts.push_back(e);
    cuts.push_back(left + width);
    std::sort(cuts.begin(), cuts.end());

    std::vector<double> rhs(p, 0.0);
    for (size_t s = 0; s + 1 < cuts.size(); ++s) {
        double a = cuts[s], b = cuts[s + 1];
        double len = b - a;
        if (len <= 0) continue;
        int src = source.cell_of(0.5 * (a + b));
        double sl = source.edges[src], sh = source.edges[src + 1] - sl;
        for (int q = 0; q < p; ++q) {
            double x = a + len * basis.nodes()[q];
            double fval = basis.evaluate(source.cells[src], (x - sl) / sh);
            double xi_t = (x - left) / width;  // target reference coordinate
            for (int m = 0; m < p; ++m)
                rhs[m] += basis.weights()[q] * len * fval * basis.lagrange(m, xi_t);
        }
    }
    // Diagonal mass matrix at the Gauss nodes: M_mm = w_m * width.
    for (int m = 0; m < p; ++m) out.values[m] = rhs[m] / (basis.weights()[m] * width);
    return out;
}

}  // namespace solkin

#include "solkin/check.hpp"

#include <cmath>
#include <iomanip>
#include <random>

#include "solkin/advection.hpp"
#include "solkin/basis.hpp"
#include "solkin/limiters.hpp"
#include "solkin/poisson.hpp"

namespace solkin {

namespace {

struct Reporter {
    std::ostream& out;
    int failures = 0;

    void check(const std::string& name, bool ok, double value, double threshold) {
        out << (ok ? "PASS" : "FAIL") << "  " << name << "  (value " << std::scientific
            << std::setprecision(3) << value << ", threshold " << threshold << ")\n";
        if (!ok) ++failures;
    }
};

}  // namespace

int run_self_checks(std::ostream& out) {
    Reporter rep{out};
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    {  // quadrature exactness for degree <= 2k+1 monomials
        double worst = 0.0;
        for (int k = 0; k <= 6; ++k) {
            const auto& basis = ReferenceBasis::get(k);
            for (int d = 0; d <= 2 * k + 1; ++d) {
                double q = 0.0;
                for (int j = 0; j <= k; ++j)
                    q += basis.weights()[j] * std::pow(basis.nodes()[j], d);
                worst = std::max(worst, std::abs(q - 1.0 / (d + 1)));
            }
        }
        rep.check("gauss_legendre quadrature exact to degree 2k+1", worst < 1e-13, worst, 1e-13);
    }

    {  // shift matrices: constants preserved, global linear data reproduced
        double worst = 0.0;
        const auto& basis = ReferenceBasis::get(3);
        for (double alpha : {0.0, 0.125, 0.5, 0.93}) {
            auto M = build_shift_matrices(basis, alpha);
            for (int m = 0; m < M.p; ++m) {
                double row = 0.0;
                for (int n = 0; n < M.p; ++n) row += M.A[m * M.p + n] + M.B[m * M.p + n];
                worst = std::max(worst, std::abs(row - 1.0));
            }
        }
        rep.check("shift matrices advect constants exactly", worst < 1e-13, worst, 1e-13);
    }

    {  // mass conservation of a periodic sweep
        const auto& basis = ReferenceBasis::get(3);
        int n = 32;
        std::vector<double> line(n * 4), out(n * 4);
        for (auto& v : line) v = 1.0 + 0.3 * unit(rng);
        auto M = build_shift_matrices(basis, 0.37);
        advect_line(basis, M, -2, BoundaryRule::Periodic, line, 0, n, 0, out, nullptr, nullptr);
        double m0 = 0.0, m1 = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 4; ++j) {
                m0 += basis.weights()[j] * line[i * 4 + j];
                m1 += basis.weights()[j] * out[i * 4 + j];
            }
        double drift = std::abs(m1 - m0) / std::abs(m0);
        rep.check("periodic sweep conserves mass", drift < 1e-13, drift, 1e-13);
    }

    {  // Poisson: solve residual on a random load
        Grid1D grid = Grid1D::three_block(-1.0, 1.0, 8, 8, 2);
        PoissonOperator op(grid, 3, 10.0);
        std::vector<double> rho(grid.ncells() * 4);
        for (auto& v : rho) v = unit(rng);
        auto load = op.build_load(rho);
        auto x = op.solve_raw(load);
        auto Ax = op.apply(x);
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < load.size(); ++i) {
            num += (Ax[i] - load[i]) * (Ax[i] - load[i]);
            den += load[i] * load[i];
        }
        double rel = std::sqrt(num / std::max(den, 1e-300));
        rep.check("SIPG solve residual", rel < 1e-10, rel, 1e-10);
        rep.check("SIPG assembly symmetric", op.symmetry_defect() < 1e-12, op.symmetry_defect(),
                  1e-12);
    }

    {  // inline limiter: clamped output stays inside the input window
        const auto& basis = ReferenceBasis::get(3);
        double worst = 0.0;
        int tested = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            double alpha = 0.5 * (unit(rng) + 1.0) * 0.999;
            auto M = build_shift_matrices(basis, alpha);
            std::vector<double> ul(4), ur(4), up(4);
            for (int j = 0; j < 4; ++j) {
                ul[j] = unit(rng);
                ur[j] = unit(rng);
            }
            for (int m = 0; m < 4; ++m) {
                up[m] = 0.0;
                for (int n = 0; n < 4; ++n) up[m] += M.A[m * 4 + n] * ul[n] + M.B[m * 4 + n] * ur[n];
            }
            double wmax = std::max(basis.max_on(ul, alpha, 1.0), basis.max_on(ur, 0.0, alpha));
            double wmin = std::min(basis.min_on(ul, alpha, 1.0), basis.min_on(ur, 0.0, alpha));
            double mean_p = basis.mean(up);
            if (mean_p > wmax || mean_p < wmin) continue;
            ++tested;
            InlineLimiter lim(basis, alpha, 0.0);
            lim.clamp(ul, ur, up);
            worst = std::max(worst, basis.max_on(up, 0.0, 1.0) - wmax);
            worst = std::max(worst, wmin - basis.min_on(up, 0.0, 1.0));
        }
        rep.check("inline limiter clamps into the input window (" + std::to_string(tested) +
                      " stencils)",
                  worst < 1e-12, worst, 1e-12);
    }

    {  // mean-error indicator: no flags on globally polynomial data
        const auto& basis = ReferenceBasis::get(3);
        bool flagged = false;
        for (int trial = 0; trial < 200; ++trial) {
            double c[4] = {unit(rng), unit(rng), unit(rng), unit(rng)};
            auto eval = [&](double x) { return c[0] + x * (c[1] + x * (c[2] + x * c[3])); };
            std::vector<double> um(4), u0(4), up(4);
            for (int j = 0; j < 4; ++j) {
                double xi = basis.nodes()[j];
                um[j] = eval(xi - 1.0);
                u0[j] = eval(xi);
                up[j] = eval(xi + 1.0);
            }
            if (indicator_meanerr(basis, {um, u0, up}, 0.5)) flagged = true;
        }
        rep.check("meanerr indicator passes smooth polynomial data", !flagged, flagged ? 1 : 0,
                  0.5);
    }

    out << (rep.failures == 0 ? "all checks passed\n"
                              : std::to_string(rep.failures) + " check(s) failed\n");
    return rep.failures;
}

}  // namespace solkin

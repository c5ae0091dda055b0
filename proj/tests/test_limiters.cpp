#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "solkin/advection.hpp"
#include "solkin/limiters.hpp"

using namespace solkin;

namespace {

std::vector<double> sample_poly(const ReferenceBasis& basis, double shift,
                                const std::function<double(double)>& f) {
    std::vector<double> out(basis.npoints());
    for (int j = 0; j < basis.npoints(); ++j) out[j] = f(shift + basis.nodes()[j]);
    return out;
}

}  // namespace

TEST_CASE("minmod function") {
    CHECK(minmod(1, 2, 3) == 1.0);
    CHECK(minmod(-1, 2, 3) == 0.0);
    CHECK(minmod(-2, -1, -3) == -1.0);
    CHECK(minmod(0, 1, 2) == 0.0);
    CHECK(minmod(2, 3, 1) == 1.0);
}

TEST_CASE("limiter mode strings round-trip") {
    for (const char* mode :
         {"none", "minmod+simple", "minmod+line", "meanerr+simple", "meanerr+line", "sldg"}) {
        auto cfg = LimiterConfig::parse(mode);
        CHECK(cfg.mode_string() == mode);
    }
    CHECK_THROWS(LimiterConfig::parse("fancy"));
    CHECK_THROWS(LimiterConfig::parse("minmod+fancy"));
    auto cfg = LimiterConfig::parse("meanerr+line");
    CHECK(cfg.threshold == 0.5);
    CHECK(cfg.gamma_line[0] == 0.45);
    CHECK(cfg.gamma_line[1] == 0.1);
    CHECK(cfg.gamma_simple[1] == 0.998);
    CHECK(cfg.epsilon == 1e-6);
}

TEST_CASE("indicator_minmod: constants and linears pass, steps flag") {
    const auto& basis = ReferenceBasis::get(3);
    auto constant = [](double) { return 3.0; };
    StencilTriplet c{sample_poly(basis, 0, constant), sample_poly(basis, 0, constant),
                     sample_poly(basis, 0, constant)};
    std::vector<double> cm = sample_poly(basis, -1.0, constant);
    std::vector<double> c0 = sample_poly(basis, 0.0, constant);
    std::vector<double> cp = sample_poly(basis, 1.0, constant);
    CHECK_FALSE(indicator_minmod(basis, {cm, c0, cp}));

    auto lin = [](double x) { return 0.7 * x - 0.2; };
    std::vector<double> lm = sample_poly(basis, -1.0, lin);
    std::vector<double> l0 = sample_poly(basis, 0.0, lin);
    std::vector<double> lp = sample_poly(basis, 1.0, lin);
    CHECK_FALSE(indicator_minmod(basis, {lm, l0, lp}));

    // step with an interior extremum in u0: means 0 / 0 / 1, u0 wiggles.
    // Brute-force the four quantities: u0+ = u0(1) - mean != minmod output
    auto wiggle = [](double x) { return 0.3 * std::sin(2 * M_PI * x); };
    std::vector<double> sm(4, 0.0);
    std::vector<double> s0 = sample_poly(basis, 0.0, wiggle);
    std::vector<double> sp(4, 1.0);
    double mean0 = basis.mean(s0);
    double u0p = basis.evaluate(s0, 1.0) - mean0;
    double u0m = mean0 - basis.evaluate(s0, 0.0);
    double dp = 1.0 - mean0, dm = mean0 - 0.0;
    bool expect = minmod(u0p, dp, dm) != u0p || minmod(u0m, dp, dm) != u0m;
    CHECK(expect);  // the wiggle's edge slopes disagree with the mean jumps
    CHECK(indicator_minmod(basis, {sm, s0, sp}) == expect);
}

TEST_CASE("indicator_meanerr: constants, global polynomials, steps") {
    const auto& basis = ReferenceBasis::get(3);
    auto constant = [](double) { return 2.0; };
    std::vector<double> cm = sample_poly(basis, -1.0, constant);
    std::vector<double> c0 = sample_poly(basis, 0.0, constant);
    std::vector<double> cp = sample_poly(basis, 1.0, constant);
    CHECK_FALSE(indicator_meanerr(basis, {cm, c0, cp}, 0.5));

    auto cubic = [](double x) { return 0.2 + x - 0.5 * x * x + 0.1 * x * x * x; };
    std::vector<double> pm = sample_poly(basis, -1.0, cubic);
    std::vector<double> p0 = sample_poly(basis, 0.0, cubic);
    std::vector<double> pp = sample_poly(basis, 1.0, cubic);
    CHECK_FALSE(indicator_meanerr(basis, {pm, p0, pp}, 0.5));
    // extensions of smooth data are exact: indicator value is ~0, so it stays
    // below even a tiny threshold
    CHECK_FALSE(indicator_meanerr(basis, {pm, p0, pp}, 1e-10));

    // piecewise constants (0, 0, 1): I = (|0-0| + |1-0|)/1 = 1 > 0.5
    std::vector<double> zm(4, 0.0), z0(4, 0.0), op(4, 1.0);
    CHECK(indicator_meanerr(basis, {zm, z0, op}, 0.5));
    CHECK_FALSE(indicator_meanerr(basis, {zm, z0, op}, 1.5));

    // all-zero stencils are vacuum: never troubled
    CHECK_FALSE(indicator_meanerr(basis, {zm, z0, zm}, 0.5));
}

TEST_CASE("smoothness_beta: constant, linear, quadratic") {
    const auto& b2 = ReferenceBasis::get(2);
    const auto& b3 = ReferenceBasis::get(3);

    std::vector<double> c(3, 5.0);
    CHECK(smoothness_beta(b2, c) == doctest::Approx(0.0).epsilon(1e-14));

    for (double slope : {1.0, -2.5}) {
        std::vector<double> lin(4);
        for (int j = 0; j < 4; ++j) lin[j] = slope * b3.nodes()[j] + 1.0;
        CHECK(smoothness_beta(b3, lin) == doctest::Approx(slope * slope).epsilon(1e-13));
    }

    // p(x)=x^2 on [0,1]: int (2x)^2 + int 2^2 = 4/3 + 4 = 16/3
    std::vector<double> quad2(3), quad3(4);
    for (int j = 0; j < 3; ++j) quad2[j] = b2.nodes()[j] * b2.nodes()[j];
    for (int j = 0; j < 4; ++j) quad3[j] = b3.nodes()[j] * b3.nodes()[j];
    CHECK(smoothness_beta(b2, quad2) == doctest::Approx(16.0 / 3).epsilon(1e-13));
    CHECK(smoothness_beta(b3, quad3) == doctest::Approx(16.0 / 3).epsilon(1e-13));
}

TEST_CASE("modify_simple_weno: exact on globally polynomial data") {
    const auto& basis = ReferenceBasis::get(3);
    LimiterConfig cfg;
    auto cubic = [](double x) { return 1.0 - 0.4 * x + 0.25 * x * x - 0.6 * x * x * x; };
    std::vector<double> um = sample_poly(basis, -1.0, cubic);
    std::vector<double> u0 = sample_poly(basis, 0.0, cubic);
    std::vector<double> up = sample_poly(basis, 1.0, cubic);
    std::vector<double> out(4);
    modify_simple_weno(basis, {um, u0, up}, cfg, out);
    for (int j = 0; j < 4; ++j) CHECK(out[j] == doctest::Approx(u0[j]).epsilon(1e-13));

    std::vector<double> cm(4, 3.0);
    modify_simple_weno(basis, {cm, cm, cm}, cfg, out);
    for (int j = 0; j < 4; ++j) CHECK(out[j] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("modify_simple_weno: equal-smoothness stencil uses the linear weights") {
    const auto& basis = ReferenceBasis::get(3);
    LimiterConfig cfg;
    // same shape in each cell (own coordinates) -> equal beta by translation
    // invariance; then omega = gamma exactly
    auto shape = [](double x) { return std::sin(2 * M_PI * x); };
    std::vector<double> um(4), u0(4), up(4);
    for (int j = 0; j < 4; ++j) {
        double xi = basis.nodes()[j];
        um[j] = shape(xi) + 1.0;  // constant offsets do not change beta
        u0[j] = shape(xi);
        up[j] = shape(xi) - 2.0;
    }
    std::vector<double> out(4);
    modify_simple_weno(basis, {um, u0, up}, cfg, out);
    // hand-combined: candidates are extensions shifted to u0's mean
    double mean0 = basis.mean(u0);
    double em = basis.integrate(um, 1.0, 2.0);
    double ep = basis.integrate(up, -1.0, 0.0);
    for (int j = 0; j < 4; ++j) {
        double xi = basis.nodes()[j];
        double cand_m = basis.evaluate(um, 1.0 + xi) - em + mean0;
        double cand_p = basis.evaluate(up, xi - 1.0) - ep + mean0;
        double expect = 0.001 * cand_m + 0.998 * u0[j] + 0.001 * cand_p;
        CHECK(out[j] == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("modify_line_weno: constants, global linears, mean-matching example") {
    const auto& basis = ReferenceBasis::get(3);
    LimiterConfig cfg;
    std::vector<double> out(4);

    std::vector<double> cm(4, 4.0);
    modify_line_weno(basis, {cm, cm, cm}, cfg, out);
    for (int j = 0; j < 4; ++j) CHECK(out[j] == doctest::Approx(4.0).epsilon(1e-13));

    auto lin = [](double x) { return 2.0 * x - 0.3; };
    std::vector<double> lm = sample_poly(basis, -1.0, lin);
    std::vector<double> l0 = sample_poly(basis, 0.0, lin);
    std::vector<double> lp = sample_poly(basis, 1.0, lin);
    modify_line_weno(basis, {lm, l0, lp}, cfg, out);
    for (int j = 0; j < 4; ++j) CHECK(out[j] == doctest::Approx(l0[j]).epsilon(1e-12));

    // means (0,0,1), u0 = 0: p_m = 0, p_p(x) = x - 1/2 in [0,1] coordinates
    // (two-point mean-matching linear reconstruction); output mean stays 0
    std::vector<double> zm(4, 0.0), z0(4, 0.0), po(4, 1.0);
    modify_line_weno(basis, {zm, z0, po}, cfg, out);
    CHECK(basis.mean(out) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("WENO modifiers preserve the cell mean on random stencils") {
    const auto& basis = ReferenceBasis::get(3);
    LimiterConfig cfg;
    auto gen = oracles::rng(21);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> um(4), u0(4), up(4), out(4);
        for (int j = 0; j < 4; ++j) {
            um[j] = val(gen);
            u0[j] = val(gen);
            up[j] = val(gen);
        }
        double mean0 = basis.mean(u0);
        modify_simple_weno(basis, {um, u0, up}, cfg, out);
        CHECK(basis.mean(out) == doctest::Approx(mean0).epsilon(1e-13));
        modify_line_weno(basis, {um, u0, up}, cfg, out);
        CHECK(basis.mean(out) == doctest::Approx(mean0).epsilon(1e-13));
    }
}

TEST_CASE("scale covariance of indicators and modifiers") {
    const auto& basis = ReferenceBasis::get(3);
    auto gen = oracles::rng(22);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (double lambda : {1e-3, 1.0, 1e3}) {
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<double> um(4), u0(4), up(4);
            for (int j = 0; j < 4; ++j) {
                um[j] = val(gen);
                u0[j] = val(gen);
                up[j] = val(gen);
            }
            auto scaled = [&](const std::vector<double>& u) {
                std::vector<double> s(u);
                for (auto& x : s) x *= lambda;
                return s;
            };
            auto sm = scaled(um), s0 = scaled(u0), sp = scaled(up);

            // indicator flags are scale-invariant (normalized by the means)
            CHECK(indicator_meanerr(basis, {um, u0, up}, 0.5) ==
                  indicator_meanerr(basis, {sm, s0, sp}, 0.5));
            CHECK(indicator_minmod(basis, {um, u0, up}) ==
                  indicator_minmod(basis, {sm, s0, sp}));

            // simple WENO is homogeneous once epsilon is rescaled by lambda^2
            LimiterConfig cfg1, cfg2;
            cfg2.epsilon = cfg1.epsilon * lambda * lambda;
            std::vector<double> out1(4), out2(4);
            modify_simple_weno(basis, {um, u0, up}, cfg1, out1);
            modify_simple_weno(basis, {sm, s0, sp}, cfg2, out2);
            for (int j = 0; j < 4; ++j)
                CHECK(out2[j] == doctest::Approx(lambda * out1[j]).epsilon(1e-12));
        }
    }
}

TEST_CASE("sldg indicator: smooth projections pass, steps flag") {
    const auto& basis = ReferenceBasis::get(3);
    auto gen = oracles::rng(23);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);

    SUBCASE("globally polynomial inputs are never troubled") {
        for (double alpha : {0.0, 0.3, 0.77}) {
            auto M = build_shift_matrices(basis, alpha);
            double c[4] = {coeff(gen), coeff(gen), coeff(gen), 0.5};
            auto poly = [&](double x) { return c[0] + x * (c[1] + x * (c[2] + x * c[3])); };
            std::vector<double> ul = sample_poly(basis, 0.0, poly);
            std::vector<double> ur = sample_poly(basis, 1.0, poly);
            std::vector<double> up(4, 0.0);
            for (int m = 0; m < 4; ++m)
                for (int n = 0; n < 4; ++n)
                    up[m] += M.A[m * 4 + n] * ul[n] + M.B[m * 4 + n] * ur[n];
            CHECK_FALSE(sldg_indicator(basis, {ul, ur, up, alpha}, 0.5));
            // the projection reproduces the polynomial: indicator value ~ 0
            CHECK_FALSE(sldg_indicator(basis, {ul, ur, up, alpha}, 1e-10));
        }
    }

    SUBCASE("step inputs at alpha=0.5 are troubled") {
        double alpha = 0.5;
        auto M = build_shift_matrices(basis, alpha);
        std::vector<double> ul(4, 0.0), ur(4, 1.0), up(4, 0.0);
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) up[m] += M.A[m * 4 + n] * ul[n] + M.B[m * 4 + n] * ur[n];
        CHECK(sldg_indicator(basis, {ul, ur, up, alpha}, 0.5));

        // cross-check the extension means against a dense-quadrature oracle
        InlineLimiter lim(basis, alpha, 0.5);
        auto up_fn = [&](double y) { return basis.evaluate(up, y - alpha); };
        double ext_l = oracles::composite_gauss(up_fn, 0.0, 1.0);
        double ext_r = oracles::composite_gauss(up_fn, 1.0, 2.0);
        double indicator = (std::abs(ext_l - 0.0) + std::abs(ext_r - 1.0)) / 1.0;
        CHECK(indicator > 0.5);
        CHECK(lim.indicator(ul, ur, up) == (indicator > 0.5));
    }

    SUBCASE("alpha=0 is the integer-shift identity") {
        std::vector<double> ul(4), ur(4);
        for (int j = 0; j < 4; ++j) {
            ul[j] = coeff(gen);
            ur[j] = coeff(gen);
        }
        // u_p = u_l exactly at alpha=0
        std::vector<double> up(ul);
        InlineLimiter lim(basis, 0.0, 1e10);  // huge threshold: check values only
        CHECK_FALSE(lim.indicator(ul, ur, up));
    }

    SUBCASE("vacuum stencils are never troubled") {
        std::vector<double> z(4, 0.0);
        CHECK_FALSE(sldg_indicator(basis, {z, z, z, 0.4}, 0.5));
    }
}

TEST_CASE("sldg modifier: theta clamp") {
    const auto& basis = ReferenceBasis::get(1);

    SUBCASE("within bounds: no-op") {
        const auto& b3 = ReferenceBasis::get(3);
        std::vector<double> ul(4, 1.0), ur(4, 0.0);
        std::vector<double> up(4);
        for (int j = 0; j < 4; ++j) up[j] = 0.5 + 0.1 * b3.nodes()[j];
        auto out = sldg_modifier(b3, {ul, ur, up, 0.5});
        for (int j = 0; j < 4; ++j) CHECK(out[j] == doctest::Approx(up[j]).epsilon(1e-14));
    }

    SUBCASE("hand-computed theta = 1/3") {
        // u_p linear with mean 0.5, max 2 at x=1, min -1 at x=0 (k=1);
        // window max 1 (u_l = 1), window min 0 (u_r = 0):
        // theta = min(|(1-0.5)/(2-0.5)|, |(0-0.5)/(-1-0.5)|, 1) = 1/3
        std::vector<double> ul(2, 1.0), ur(2, 0.0);
        std::vector<double> up(2);
        for (int j = 0; j < 2; ++j) up[j] = -1.0 + 3.0 * basis.nodes()[j];
        CHECK(basis.mean(up) == doctest::Approx(0.5).epsilon(1e-14));
        auto out = sldg_modifier(basis, {ul, ur, up, 0.5});
        for (int j = 0; j < 2; ++j)
            CHECK(out[j] == doctest::Approx((up[j] - 0.5) / 3.0 + 0.5).epsilon(1e-13));
        CHECK(basis.max_on(out, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(basis.min_on(out, 0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(basis.mean(out) == doctest::Approx(0.5).epsilon(1e-13));
    }

    SUBCASE("constant u_p is degenerate: theta = 1") {
        std::vector<double> ul(2, 2.0), ur(2, 0.5);
        std::vector<double> up(2, 1.0);
        auto out = sldg_modifier(basis, {ul, ur, up, 0.3});
        for (int j = 0; j < 2; ++j) CHECK(out[j] == 1.0);
    }
}

TEST_CASE("sldg modifier is homogeneous of degree 1") {
    const auto& basis = ReferenceBasis::get(3);
    auto gen = oracles::rng(24);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (double lambda : {1e-3, 1.0, 1e3}) {
        for (int trial = 0; trial < 20; ++trial) {
            double alpha = 0.5 * (coeff(gen) + 1.0) * 0.99;
            auto M = build_shift_matrices(basis, alpha);
            std::vector<double> ul(4), ur(4), up(4, 0.0);
            for (int j = 0; j < 4; ++j) {
                ul[j] = coeff(gen);
                ur[j] = coeff(gen);
            }
            for (int m = 0; m < 4; ++m)
                for (int n = 0; n < 4; ++n)
                    up[m] += M.A[m * 4 + n] * ul[n] + M.B[m * 4 + n] * ur[n];
            auto out1 = sldg_modifier(basis, {ul, ur, up, alpha});
            auto scale = [&](std::vector<double> v) {
                for (auto& x : v) x *= lambda;
                return v;
            };
            auto sl = scale(ul), sr = scale(ur), sp = scale(up);
            auto out2 = sldg_modifier(basis, {sl, sr, sp, alpha});
            for (int j = 0; j < 4; ++j)
                CHECK(out2[j] == doctest::Approx(lambda * out1[j]).epsilon(1e-12));
            // and the inline indicator flag is scale-invariant
            CHECK(sldg_indicator(basis, {ul, ur, up, alpha}, 0.5) ==
                  sldg_indicator(basis, {sl, sr, sp, alpha}, 0.5));
        }
    }
}

TEST_CASE("theta clamp soundness on random projected stencils") {
    const auto& basis = ReferenceBasis::get(3);
    auto gen = oracles::rng(25);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0), frac(0.0, 0.999);
    int tested = 0;
    for (int trial = 0; trial < 2000 && tested < 1000; ++trial) {
        double alpha = frac(gen);
        auto M = build_shift_matrices(basis, alpha);
        std::vector<double> ul(4), ur(4), up(4, 0.0);
        for (int j = 0; j < 4; ++j) {
            ul[j] = coeff(gen);
            ur[j] = coeff(gen);
        }
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) up[m] += M.A[m * 4 + n] * ul[n] + M.B[m * 4 + n] * ur[n];
        double wmax = std::max(basis.max_on(ul, alpha, 1.0), basis.max_on(ur, 0.0, alpha));
        double wmin = std::min(basis.min_on(ul, alpha, 1.0), basis.min_on(ur, 0.0, alpha));
        double mean_p = basis.mean(up);
        if (mean_p > wmax || mean_p < wmin) continue;
        ++tested;
        auto out = sldg_modifier(basis, {ul, ur, up, alpha});
        CHECK(basis.max_on(out, 0.0, 1.0) <= wmax + 1e-12);
        CHECK(basis.min_on(out, 0.0, 1.0) >= wmin - 1e-12);
        CHECK(basis.mean(out) == doctest::Approx(mean_p).epsilon(1e-13));
    }
    CHECK(tested == 1000);
}

TEST_CASE("apply_post_limiter: smooth fields pass through, spikes are limited") {
    // field smooth under the periodic continuation of the x domain
    Grid1D x = Grid1D::uniform(-1.0, 1.0, 16);
    Grid1D v = Grid1D::uniform(-2.0, 2.0, 10);
    NodalField f(Species::Electron, x, v, 3);
    f.fill([](double xx, double vv) { return (2.0 + std::sin(M_PI * xx)) * std::exp(-vv * vv); });

    auto cfg = LimiterConfig::parse("meanerr+line");

    SUBCASE("smooth field unchanged") {
        std::vector<double> before(f.raw().begin(), f.raw().end());
        SweepStats stats;
        apply_post_limiter(f, SweepDirection::X, cfg, BoundaryRule::Periodic, 1, &stats);
        CHECK(stats.post_troubled == 0);
        for (size_t i = 0; i < before.size(); ++i) CHECK(f.raw()[i] == before[i]);
    }

    SUBCASE("single-cell spike is flagged with its mean preserved") {
        // inject a 10x spike into one interior x cell on one v line
        const int xc = 8, vc = 5;
        for (int xn = 0; xn < 4; ++xn)
            for (int vn = 0; vn < 4; ++vn) f.at(xc, xn, vc, vn) *= 10.0;
        double mass0 = f.mass();
        const auto& basis = ReferenceBasis::get(3);
        std::vector<double> line_before(f.x_line(vc, 2).begin(), f.x_line(vc, 2).end());
        double spike_mean = basis.mean(std::span<const double>(&line_before[xc * 4], 4));

        SweepStats stats;
        apply_post_limiter(f, SweepDirection::X, cfg, BoundaryRule::Periodic, 1, &stats);
        CHECK(stats.post_troubled > 0);
        auto line_after = f.x_line(vc, 2);
        double new_mean = basis.mean(std::span<const double>(&line_after[xc * 4], 4));
        CHECK(new_mean == doctest::Approx(spike_mean).epsilon(1e-13));
        // total mass unchanged: modifiers are mean-preserving
        CHECK(f.mass() == doctest::Approx(mass0).epsilon(1e-13));
    }
}

TEST_CASE("post limiter idempotence: a second pass touches no new cells (statistical)") {
    auto gen = oracles::rng(26);
    std::uniform_real_distribution<double> amp(5.0, 20.0), phase(0.0, 6.28);
    auto cfg = LimiterConfig::parse("meanerr+simple");
    int spread = 0;
    const int trials = 100;
    // cells whose values changed between two field states, per x line
    auto changed_cells = [](const NodalField& a, const NodalField& b) {
        std::vector<bool> out(size_t(a.nx()) * a.nv(), false);
        for (int vc = 0; vc < a.nv(); ++vc)
            for (int xc = 0; xc < a.nx(); ++xc) {
                bool diff = false;
                for (int xn = 0; xn < 4 && !diff; ++xn)
                    for (int vn = 0; vn < 4 && !diff; ++vn)
                        diff = a.at(xc, xn, vc, vn) != b.at(xc, xn, vc, vn);
                out[size_t(vc) * a.nx() + xc] = diff;
            }
        return out;
    };
    for (int trial = 0; trial < trials; ++trial) {
        Grid1D x = Grid1D::uniform(0.0, 1.0, 24);
        Grid1D v = Grid1D::uniform(-1.0, 1.0, 4);
        NodalField f(Species::Electron, x, v, 3);
        double ph = phase(gen), a = amp(gen);
        f.fill([&](double xx, double vv) {
            return 1.5 + std::sin(2 * M_PI * xx + ph) + 0.2 * vv;
        });
        int spike = 3 + trial % 18;
        for (int xn = 0; xn < 4; ++xn)
            for (int vn = 0; vn < 4; ++vn) f.at(spike, xn, 2, vn) *= a;

        NodalField before1 = f;
        apply_post_limiter(f, SweepDirection::X, cfg, BoundaryRule::Periodic, 1, nullptr);
        NodalField before2 = f;
        apply_post_limiter(f, SweepDirection::X, cfg, BoundaryRule::Periodic, 1, nullptr);

        auto d1 = changed_cells(before1, before2);
        auto d2 = changed_cells(before2, f);
        for (size_t i = 0; i < d1.size(); ++i)
            if (d2[i] && !d1[i]) {
                ++spread;
                break;
            }
    }
    CHECK(spread <= trials / 100);  // >= 99% of trials stay within the first pass's set
}

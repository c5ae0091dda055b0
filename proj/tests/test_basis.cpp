#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "solkin/basis.hpp"

using namespace solkin;

TEST_CASE("gauss_legendre: k=0 is the midpoint rule") {
    auto [nodes, weights] = gauss_legendre(0);
    REQUIRE(nodes.size() == 1);
    CHECK(nodes[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(weights[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("gauss_legendre: k=1 nodes are the P2 roots") {
    // roots of P2 on [0,1]: 1/2 -+ 1/(2 sqrt 3)
    auto [nodes, weights] = gauss_legendre(1);
    double lo = 0.5 - 0.5 / std::sqrt(3.0), hi = 0.5 + 0.5 / std::sqrt(3.0);
    CHECK(nodes[0] == doctest::Approx(lo).epsilon(1e-15));
    CHECK(nodes[1] == doctest::Approx(hi).epsilon(1e-15));
    CHECK(weights[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(weights[1] == doctest::Approx(0.5).epsilon(1e-15));
    // the 2-point rule must integrate x^2 and x^3 exactly
    CHECK(0.5 * (nodes[0] * nodes[0] + nodes[1] * nodes[1]) ==
          doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(0.5 * (std::pow(nodes[0], 3) + std::pow(nodes[1], 3)) ==
          doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("gauss_legendre: weights sum to 1, nodes increasing in (0,1)") {
    for (int k = 0; k <= 6; ++k) {
        auto [nodes, weights] = gauss_legendre(k);
        double sum = 0.0;
        for (double w : weights) sum += w;
        CHECK(std::abs(sum - 1.0) < 1e-14);
        for (size_t i = 0; i < nodes.size(); ++i) {
            CHECK(nodes[i] > 0.0);
            CHECK(nodes[i] < 1.0);
            if (i > 0) CHECK(nodes[i] > nodes[i - 1]);
        }
    }
}

TEST_CASE("quadrature exactness for random polynomials of degree <= 2k+1") {
    auto gen = oracles::rng(1);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int k = 0; k <= 6; ++k) {
        const auto& basis = ReferenceBasis::get(k);
        for (int trial = 0; trial < 20; ++trial) {
            int deg = 2 * k + 1;
            std::vector<double> c(deg + 1);
            for (auto& v : c) v = coeff(gen);
            double quad = 0.0;
            for (int j = 0; j <= k; ++j) {
                double x = basis.nodes()[j], pw = 1.0, val = 0.0;
                for (int d = 0; d <= deg; ++d) {
                    val += c[d] * pw;
                    pw *= x;
                }
                quad += basis.weights()[j] * val;
            }
            double exact = 0.0;
            for (int d = 0; d <= deg; ++d) exact += c[d] / (d + 1);
            CHECK(std::abs(quad - exact) < 1e-13);
        }
    }
}

TEST_CASE("evaluate: constants, linear extension, cubic interpolation") {
    const auto& b1 = ReferenceBasis::get(1);
    const auto& b3 = ReferenceBasis::get(3);

    std::vector<double> constant{4.25, 4.25, 4.25, 4.25};
    CHECK(b3.evaluate(constant, -1.3) == doctest::Approx(4.25).epsilon(1e-12));
    CHECK(b3.evaluate(constant, 2.6) == doctest::Approx(4.25).epsilon(1e-12));

    // u(xi)=xi sampled at the k=1 nodes extends linearly: u(2) = 2
    std::vector<double> linear{b1.nodes()[0], b1.nodes()[1]};
    CHECK(b1.evaluate(linear, 2.0) == doctest::Approx(2.0).epsilon(1e-14));

    // u(xi)=xi^3 at the k=3 nodes: interpolation is exact, u(0.5) = 0.125
    std::vector<double> cubic(4);
    for (int j = 0; j < 4; ++j) cubic[j] = std::pow(b3.nodes()[j], 3);
    CHECK(b3.evaluate(cubic, 0.5) == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("extension consistency against a Horner-form monomial oracle") {
    auto gen = oracles::rng(2);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0), point(-2.0, 3.0);
    for (int k : {1, 3, 5, 6}) {
        const auto& basis = ReferenceBasis::get(k);
        // the monomial fit itself loses digits to Vandermonde conditioning at
        // higher degree; 1e-11 is the contract at the default k
        double tol = k <= 3 ? 1e-11 : 1e-9;
        std::vector<double> nodal(k + 1);
        for (auto& v : nodal) v = coeff(gen);
        auto horner = oracles::fit_monomial(basis.nodes(), nodal);
        for (int i = 0; i < 100; ++i) {
            double x = point(gen);
            CHECK(basis.evaluate(nodal, x) == doctest::Approx(horner(x)).epsilon(tol));
        }
    }
}

TEST_CASE("cell_mean: constants, linear, quadratic") {
    const auto& b1 = ReferenceBasis::get(1);
    const auto& b3 = ReferenceBasis::get(3);

    CellPolynomial c{{7.5, 7.5}, 0.0, 1.0};
    CHECK(cell_mean(b1, c) == doctest::Approx(7.5).epsilon(1e-15));

    CellPolynomial lin{{b1.nodes()[0], b1.nodes()[1]}, 0.0, 1.0};
    CHECK(cell_mean(b1, lin) == doctest::Approx(0.5).epsilon(1e-15));

    CellPolynomial quad{{0, 0, 0, 0}, 0.0, 1.0};
    for (int j = 0; j < 4; ++j) quad.values[j] = b3.nodes()[j] * b3.nodes()[j];
    CHECK(cell_mean(b3, quad) == doctest::Approx(1.0 / 3).epsilon(1e-14));
}

TEST_CASE("project_L2: identity on polynomial sources") {
    const auto& basis = ReferenceBasis::get(3);
    auto gen = oracles::rng(3);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    PiecewisePoly src;
    src.edges = {0.0, 1.0};
    src.cells = {{coeff(gen), coeff(gen), coeff(gen), coeff(gen)}};
    auto out = project_L2(basis, src, 0.0, 1.0);
    for (int j = 0; j < 4; ++j)
        CHECK(out.values[j] == doctest::Approx(src.cells[0][j]).epsilon(1e-14));
}

TEST_CASE("project_L2: piecewise constant mean, k=0") {
    const auto& basis = ReferenceBasis::get(0);
    PiecewisePoly src;
    src.edges = {0.0, 0.4, 1.0};
    src.cells = {{0.0}, {1.0}};
    auto out = project_L2(basis, src, 0.0, 1.0);
    CHECK(out.values[0] == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("project_L2: piecewise linear kink vs dense-quadrature oracle") {
    const auto& basis = ReferenceBasis::get(3);
    // piecewise linear with a kink at 0.35
    auto f = [](double x) { return x < 0.35 ? 2.0 * x : 0.7 + 0.5 * (x - 0.35); };
    PiecewisePoly src;
    src.edges = {0.0, 0.35, 1.0};
    src.cells.resize(2);
    for (int j = 0; j < 4; ++j) {
        src.cells[0].push_back(f(0.35 * basis.nodes()[j]));
        src.cells[1].push_back(f(0.35 + 0.65 * basis.nodes()[j]));
    }
    auto out = project_L2(basis, src, 0.0, 1.0);
    // oracle: nodal value m = (1/w_m) int f(x) l_m(x) dx, 200-point composite
    // rule per smooth piece
    for (int m = 0; m < 4; ++m) {
        auto integrand = [&](double x) { return f(x) * basis.lagrange(m, x); };
        double val = (oracles::composite_gauss(integrand, 0.0, 0.35) +
                      oracles::composite_gauss(integrand, 0.35, 1.0)) /
                     basis.weights()[m];
        CHECK(out.values[m] == doctest::Approx(val).epsilon(1e-12));
    }
}

TEST_CASE("project_L2 properties: conservation and idempotence") {
    auto gen = oracles::rng(4);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0), cut(0.2, 0.8);
    const auto& basis = ReferenceBasis::get(3);
    for (int trial = 0; trial < 25; ++trial) {
        PiecewisePoly src;
        src.edges = {-0.3, cut(gen), 1.4};
        src.cells = {{coeff(gen), coeff(gen), coeff(gen), coeff(gen)},
                     {coeff(gen), coeff(gen), coeff(gen), coeff(gen)}};
        double left = -0.1, width = 1.2;
        auto out = project_L2(basis, src, left, width);

        // conservation: cell mean equals the source integral over the target
        double src_int = 0.0;
        for (int piece = 0; piece < 2; ++piece) {
            double a = std::max(left, src.edges[piece]);
            double b = std::min(left + width, src.edges[piece + 1]);
            if (b <= a) continue;
            double pl = src.edges[piece], pw = src.edges[piece + 1] - pl;
            auto fp = [&](double x) { return basis.evaluate(src.cells[piece], (x - pl) / pw); };
            src_int += oracles::composite_gauss(fp, a, b);
        }
        CHECK(cell_mean(basis, out) * width == doctest::Approx(src_int).epsilon(1e-13));

        // idempotence
        PiecewisePoly again;
        again.edges = {left, left + width};
        again.cells = {out.values};
        auto twice = project_L2(basis, again, left, width);
        for (int j = 0; j < 4; ++j)
            CHECK(twice.values[j] == doctest::Approx(out.values[j]).epsilon(1e-14));
    }
}

#include "solkin/advection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "solkin/adaptivity.hpp"
#include "solkin/common.hpp"
#include "solkin/parallel.hpp"

namespace solkin {

ShiftDecomposition decompose_shift(double speed, double dt, double dx) {
    require(dx > 0, "decompose_shift: dx must be positive");
    double s = -speed * dt / dx;
    double fl = std::floor(s);
    double alpha = s - fl;
    int istar = static_cast<int>(fl);
    if (alpha >= 1.0) {  // guard against floor roundoff at exact integers
        alpha -= 1.0;
        istar += 1;
    }
    return {istar, alpha};
}

ShiftMatrices build_shift_matrices(const ReferenceBasis& basis, double alpha) {
    require(alpha >= 0.0 && alpha < 1.0, "build_shift_matrices: alpha must be in [0,1)");
    const int p = basis.npoints();
    ShiftMatrices M;
    M.p = p;
    M.alpha = alpha;
    M.A.assign(p * p, 0.0);
    M.B.assign(p * p, 0.0);

    // A: overlap of the upwind cell, integrand l_n(xi+alpha) l_m(xi) on [0,1-alpha];
    // B: overlap of its right neighbor, l_n(xi+alpha-1) l_m(xi) on [1-alpha,1].
    // Degree-2k integrands, so the k+1 point rule is exact.
    const auto& xq = basis.nodes();
    const auto& wq = basis.weights();
    double len_a = 1.0 - alpha;
    for (int q = 0; q < p; ++q) {
        double xi = len_a * xq[q];
        for (int m = 0; m < p; ++m) {
            double lm = basis.lagrange(m, xi);
            for (int n = 0; n < p; ++n)
                M.A[m * p + n] += wq[q] * len_a * basis.lagrange(n, xi + alpha) * lm;
        }
    }
    for (int q = 0; q < p; ++q) {
        double xi = 1.0 - alpha + alpha * xq[q];
        for (int m = 0; m < p; ++m) {
            double lm = basis.lagrange(m, xi);
            for (int n = 0; n < p; ++n)
                M.B[m * p + n] += wq[q] * alpha * basis.lagrange(n, alpha * xq[q]) * lm;
        }
    }
    for (int m = 0; m < p; ++m) {
        double inv_w = 1.0 / wq[m];
        for (int n = 0; n < p; ++n) {
            M.A[m * p + n] *= inv_w;
            M.B[m * p + n] *= inv_w;
        }
    }
    return M;
}

void advect_line(const ReferenceBasis& basis, const ShiftMatrices& M, int istar,
                 BoundaryRule bc, std::span<const double> in, int gl, int n, int gr,
                 std::span<double> out, const InlineLimiter* limiter, SweepStats* stats) {
    require(n >= 1, "advect_line: line must have at least one cell");
    const int p = basis.npoints();
    const int total = gl + n + gr;
    require(static_cast<int>(in.size()) == total * p, "advect_line: input size mismatch");
    require(static_cast<int>(out.size()) == n * p, "advect_line: output size mismatch");
    if (bc == BoundaryRule::Periodic)
        require(gl == 0 && gr == 0, "advect_line: periodic rule needs a ghost-free line");

    static constexpr double kZero[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    const double* A = M.A.data();
    const double* B = M.B.data();

    for (int i = 0; i < n; ++i) {
        const double *ul, *ur;
        if (bc == BoundaryRule::Periodic) {
            int a = ((i + istar) % n + n) % n;
            ul = &in[size_t(a) * p];
            ur = &in[size_t((a + 1) % n) * p];
        } else {
            int s = gl + i + istar;
            ul = (s >= 0 && s < total) ? &in[size_t(s) * p] : kZero;
            ur = (s + 1 >= 0 && s + 1 < total) ? &in[size_t(s + 1) * p] : kZero;
        }
        double* o = &out[size_t(i) * p];
        for (int m = 0; m < p; ++m) {
            double acc = 0.0;
            const double* Am = A + m * p;
            const double* Bm = B + m * p;
            for (int j = 0; j < p; ++j) acc += Am[j] * ul[j] + Bm[j] * ur[j];
            o[m] = acc;
        }
        if (limiter) {
            auto res = limiter->apply(std::span<const double>(ul, p),
                                      std::span<const double>(ur, p),
                                      std::span<double>(o, p));
            if (stats) {
                stats->inline_troubled += res.troubled;
                stats->inline_clamped += res.clamped;
                stats->inline_mean_outside += res.mean_outside;
            }
        }
    }
    if (stats) stats->outputs += n;
}

SpeciesParams SpeciesParams::ion(double mu) {
    require(mu > 0, "SpeciesParams::ion: mass ratio must be positive");
    return {+1.0, std::sqrt(mu)};
}

namespace {

// Per-line sweep machinery shared by both directions. Matrices (and the
// inline limiter context) are keyed by the cell width so the two fine blocks
// reuse one build.
struct LinePlan {
    ShiftDecomposition shift;
    ShiftMatrices matrices;
    std::optional<InlineLimiter> inliner;
};

LinePlan make_plan(const ReferenceBasis& basis, double speed, double tau, double dx,
                   const LimiterConfig& lim) {
    LinePlan plan;
    plan.shift = decompose_shift(speed, tau, dx);
    plan.matrices = build_shift_matrices(basis, plan.shift.alpha);
    if (lim.inline_sldg)
        plan.inliner.emplace(basis, plan.shift.alpha, lim.threshold);
    return plan;
}

}  // namespace

void advect_x(NodalField& f, double tau, const SpeciesParams& sp, const SweepOptions& opt) {
    const auto& basis = ReferenceBasis::get(f.degree());
    const int p = f.nodes_per_cell();
    const int nx = f.nx();
    const Grid1D& grid = f.x();
    const int nblocks = grid.nblocks();
    if (nblocks > 1)
        require(opt.bc == BoundaryRule::ZeroInflow,
                "advect_x: periodic rule is only supported on single-block grids");

    const int nlines = f.nv() * p;
    std::mutex merge_mu;
    SweepStats total;

    parallel_for_chunks(nlines, opt.threads, [&](int begin, int end) {
        std::vector<double> scratch_out(size_t(nx) * p);
        std::vector<double> ext;
        SweepStats local;
        for (int lid = begin; lid < end; ++lid) {
            int vc = lid / p, vn = lid % p;
            double speed = f.v_node(vc, vn) / sp.sqrt_mu;
            auto line = f.x_line(vc, vn);

            if (nblocks == 1) {
                auto plan = make_plan(basis, speed, tau, grid.blocks()[0].dx, opt.limiter);
                advect_line(basis, plan.matrices, plan.shift.istar, opt.bc, line, 0, nx, 0,
                            scratch_out, plan.inliner ? &*plan.inliner : nullptr, &local);
            } else {
                std::map<double, LinePlan> plans;
                for (int b = 0; b < nblocks; ++b) {
                    const auto& blk = grid.blocks()[b];
                    auto it = plans.find(blk.dx);
                    if (it == plans.end())
                        it = plans.emplace(blk.dx,
                                           make_plan(basis, speed, tau, blk.dx, opt.limiter))
                                 .first;
                    const LinePlan& plan = it->second;
                    int gl_need = std::max(0, -plan.shift.istar);
                    int gr_need = std::max(0, plan.shift.istar + 1);
                    int gl = (b > 0) ? gl_need : 0;
                    int gr = (b + 1 < nblocks) ? gr_need : 0;
                    if (opt.max_ghost >= 0 && std::max(gl, gr) > opt.max_ghost)
                        throw SimulationError(
                            opt.step_index,
                            "insufficient ghost width: sweep requires " +
                                std::to_string(std::max(gl, gr)) + " cells, layout provides " +
                                std::to_string(opt.max_ghost));
                    exchange_block_ghosts(basis, grid, b, line, gl, gr, ext);
                    int c0 = grid.block_start(b);
                    advect_line(basis, plan.matrices, plan.shift.istar, BoundaryRule::ZeroInflow,
                                ext, gl, blk.cells, gr,
                                std::span<double>(scratch_out.data() + size_t(c0) * p,
                                                  size_t(blk.cells) * p),
                                plan.inliner ? &*plan.inliner : nullptr, &local);
                }
            }
            std::copy(scratch_out.begin(), scratch_out.end(), line.begin());
        }
        std::scoped_lock lock(merge_mu);
        total.merge(local);
    });

    if (opt.stats) opt.stats->merge(total);
}

void advect_v(NodalField& f, double tau, std::span<const double> E_nodes,
              const SpeciesParams& sp, const SweepOptions& opt) {
    const auto& basis = ReferenceBasis::get(f.degree());
    const int p = f.nodes_per_cell();
    const int nv = f.nv();
    const double dv = f.v().blocks()[0].dx;
    require(E_nodes.size() == size_t(f.nx()) * p, "advect_v: E node array size mismatch");

    const int nlines = f.nx() * p;
    std::mutex merge_mu;
    SweepStats total;

    parallel_for_chunks(nlines, opt.threads, [&](int begin, int end) {
        std::vector<double> in(size_t(nv) * p), out(size_t(nv) * p);
        SweepStats local;
        for (int lid = begin; lid < end; ++lid) {
            int xc = lid / p, xn = lid % p;
            double speed = sp.charge_sign * E_nodes[size_t(xc) * p + xn] / sp.sqrt_mu;
            auto plan = make_plan(basis, speed, tau, dv, opt.limiter);
            f.gather_v_line(xc, xn, in);
            advect_line(basis, plan.matrices, plan.shift.istar, opt.bc, in, 0, nv, 0, out,
                        plan.inliner ? &*plan.inliner : nullptr, &local);
            f.scatter_v_line(xc, xn, out);
        }
        std::scoped_lock lock(merge_mu);
        total.merge(local);
    });

    if (opt.stats) opt.stats->merge(total);
}

}  // namespace solkin

#include "solkin/adaptivity.hpp"

#include <algorithm>
#include <cmath>

#include "solkin/common.hpp"

namespace solkin {

void VAdjustPolicy::validate() const {
    require(p > 0 && gamma >= 0 && p + gamma < 1,
            "VAdjustPolicy: need 0 < p, 0 <= gamma, p + gamma < 1");
    require(tol > 0, "VAdjustPolicy: tol must be positive");
}

bool check_velocity_shrink(const NodalField& f, const VAdjustPolicy& policy) {
    policy.validate();
    const auto& basis = ReferenceBasis::get(f.degree());
    const int p = f.nodes_per_cell();
    const Grid1D& v = f.v();
    const double dv = v.blocks()[0].dx;
    const double probe = v.right() * (1.0 - policy.p - policy.gamma);

    for (double sign : {1.0, -1.0}) {
        double vp = sign * probe;
        int vc = std::clamp(static_cast<int>(std::floor((vp - v.left()) / dv)), 0, f.nv() - 1);
        double xi = (vp - v.cell_left(vc)) / dv;
        std::vector<double> L(p);
        for (int n = 0; n < p; ++n) L[n] = basis.lagrange(n, xi);
        for (int xc = 0; xc < f.nx(); ++xc)
            for (int xn = 0; xn < p; ++xn) {
                double val = 0.0;
                for (int vn = 0; vn < p; ++vn) val += L[vn] * f.at(xc, xn, vc, vn);
                if (std::abs(val) >= policy.tol) return false;
            }
    }
    return true;
}

namespace {

// Transfer plan for re-projecting one uniform v line onto a new uniform grid:
// per new cell, the list of overlapping old cells and their p x p couplings.
struct VTransferPlan {
    struct Piece {
        int old_cell;
        std::vector<double> T;  // p*p: new_vals += T * old_vals
    };
    std::vector<std::vector<Piece>> per_new_cell;
};

VTransferPlan build_v_transfer(const ReferenceBasis& basis, const Grid1D& old_v,
                               const Grid1D& new_v) {
    const int p = basis.npoints();
    VTransferPlan plan;
    plan.per_new_cell.resize(new_v.ncells());
    const double old_dx = old_v.blocks()[0].dx;
    for (int j = 0; j < new_v.ncells(); ++j) {
        double a = new_v.cell_left(j);
        double h = new_v.cell_width(j);
        double b = a + h;
        int i0 = std::clamp(static_cast<int>(std::floor((a - old_v.left()) / old_dx)), 0,
                            old_v.ncells() - 1);
        for (int i = i0; i < old_v.ncells(); ++i) {
            double oa = old_v.cell_left(i), ob = oa + old_dx;
            double s0 = std::max(a, oa), s1 = std::min(b, ob);
            if (s1 <= s0) {
                if (oa >= b) break;
                continue;
            }
            VTransferPlan::Piece piece;
            piece.old_cell = i;
            piece.T.assign(p * p, 0.0);
            double len = s1 - s0;
            for (int q = 0; q < p; ++q) {
                double x = s0 + len * basis.nodes()[q];
                double xi_src = (x - oa) / old_dx;
                double xi_tgt = (x - a) / h;
                double wq = basis.weights()[q] * len;
                for (int m = 0; m < p; ++m) {
                    double lm = basis.lagrange(m, xi_tgt) / (basis.weights()[m] * h);
                    for (int n = 0; n < p; ++n)
                        piece.T[m * p + n] += wq * lm * basis.lagrange(n, xi_src);
                }
            }
            plan.per_new_cell[j].push_back(std::move(piece));
        }
    }
    return plan;
}

}  // namespace

ShrinkResult shrink_velocity_domain(NodalField& f, const VAdjustPolicy& policy) {
    policy.validate();
    const auto& basis = ReferenceBasis::get(f.degree());
    const int p = f.nodes_per_cell();
    const int nv = f.nv();

    ShrinkResult result;
    result.vmax_before = f.v().right();
    result.mass_before = f.mass();
    double new_vmax = result.vmax_before * (1.0 - policy.p);
    Grid1D new_v = Grid1D::uniform(-new_vmax, new_vmax, nv);
    auto plan = build_v_transfer(basis, f.v(), new_v);

    std::vector<double> line(size_t(nv) * p), out(size_t(nv) * p);
    NodalField next(f.species(), f.x(), new_v, f.degree());
    for (int xc = 0; xc < f.nx(); ++xc)
        for (int xn = 0; xn < p; ++xn) {
            f.gather_v_line(xc, xn, line);
            std::fill(out.begin(), out.end(), 0.0);
            for (int j = 0; j < nv; ++j)
                for (const auto& piece : plan.per_new_cell[j]) {
                    const double* src = line.data() + size_t(piece.old_cell) * p;
                    double* dst = out.data() + size_t(j) * p;
                    for (int m = 0; m < p; ++m) {
                        double acc = 0.0;
                        for (int n = 0; n < p; ++n) acc += piece.T[m * p + n] * src[n];
                        dst[m] += acc;
                    }
                }
            next.scatter_v_line(xc, xn, out);
        }

    f.reset_v(new_v, std::vector<double>(next.raw().begin(), next.raw().end()));
    result.vmax_after = new_vmax;
    result.mass_after = f.mass();
    return result;
}

void fine_to_coarse(const ReferenceBasis& basis, std::span<const double> fine, int m,
                    std::span<double> coarse) {
    const int p = basis.npoints();
    require(static_cast<int>(fine.size()) == m * p, "fine_to_coarse: need m cells of input");
    for (int mm = 0; mm < p; ++mm) {
        double acc = 0.0;
        for (int j = 0; j < m; ++j) {
            const double* cell = fine.data() + size_t(j) * p;
            for (int q = 0; q < p; ++q) {
                double xi_c = (j + basis.nodes()[q]) / m;
                acc += basis.weights()[q] / m * cell[q] * basis.lagrange(mm, xi_c);
            }
        }
        coarse[mm] = acc / basis.weights()[mm];
    }
}

void coarse_to_fine(const ReferenceBasis& basis, std::span<const double> coarse, int m,
                    std::span<double> fine) {
    const int p = basis.npoints();
    require(static_cast<int>(fine.size()) == m * p, "coarse_to_fine: need m cells of output");
    for (int j = 0; j < m; ++j)
        for (int q = 0; q < p; ++q)
            fine[size_t(j) * p + q] = basis.evaluate(coarse, (j + basis.nodes()[q]) / m);
}

int BlockLayout::required_ghost_width(double vmax, double dt, double sqrt_mu_min,
                                      double dx_local) {
    return static_cast<int>(std::ceil(vmax * dt / (sqrt_mu_min * dx_local))) + 1;
}

namespace {

// Ghost cell j (1 = adjacent to the interface) on the `left_side` of a block,
// filled from the neighbor block. Widths are nested by construction, so the
// transfer is either a copy, a fine_to_coarse of m neighbor cells, or one
// piece of a coarse_to_fine refinement.
void fill_ghost(const ReferenceBasis& basis, const Grid1D& grid, int block, bool left_side,
                int j, std::span<const double> line, std::span<double> ghost) {
    const int p = basis.npoints();
    const auto& blk = grid.blocks()[block];
    int nb_index = left_side ? block - 1 : block + 1;
    const auto& nb = grid.blocks()[nb_index];
    int nb_begin = grid.block_start(nb_index);
    int nb_end = nb_begin + nb.cells;
    int interface = left_side ? grid.block_start(block) : grid.block_start(block) + blk.cells;

    auto out_of_range = [&](int lo, int hi) {
        require(lo >= nb_begin && hi <= nb_end,
                "exchange_block_ghosts: neighbor block cannot supply ghost width " +
                    std::to_string(j));
    };

    if (nb.dx == blk.dx) {
        int src = left_side ? interface - j : interface + (j - 1);
        out_of_range(src, src + 1);
        std::copy_n(line.data() + size_t(src) * p, p, ghost.data());
        return;
    }
    if (nb.dx > blk.dx) {
        int m = static_cast<int>(std::llround(nb.dx / blk.dx));
        int coarse = left_side ? interface - 1 - (j - 1) / m : interface + (j - 1) / m;
        out_of_range(coarse, coarse + 1);
        int piece = left_side ? m - 1 - (j - 1) % m : (j - 1) % m;
        std::vector<double> refined(size_t(m) * p);
        coarse_to_fine(basis, std::span<const double>(line.data() + size_t(coarse) * p, p), m,
                       refined);
        std::copy_n(refined.data() + size_t(piece) * p, p, ghost.data());
        return;
    }
    int m = static_cast<int>(std::llround(blk.dx / nb.dx));
    int lo = left_side ? interface - j * m : interface + (j - 1) * m;
    out_of_range(lo, lo + m);
    fine_to_coarse(basis, std::span<const double>(line.data() + size_t(lo) * p, size_t(m) * p), m,
                   ghost);
}

}  // namespace

void exchange_block_ghosts(const ReferenceBasis& basis, const Grid1D& grid, int block,
                           std::span<const double> line, int gl, int gr,
                           std::vector<double>& ext) {
    const int p = basis.npoints();
    const auto& blk = grid.blocks()[block];
    const int c0 = grid.block_start(block);
    ext.resize(size_t(gl + blk.cells + gr) * p);
    std::copy_n(line.data() + size_t(c0) * p, size_t(blk.cells) * p, ext.data() + size_t(gl) * p);
    for (int j = 1; j <= gl; ++j)
        fill_ghost(basis, grid, block, true, j, line,
                   std::span<double>(ext.data() + size_t(gl - j) * p, p));
    for (int j = 1; j <= gr; ++j)
        fill_ghost(basis, grid, block, false, j, line,
                   std::span<double>(ext.data() + size_t(gl + blk.cells + j - 1) * p, p));
}

}  // namespace solkin

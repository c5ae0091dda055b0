#pragma once

#include <span>
#include <vector>

#include "solkin/basis.hpp"
#include "solkin/field.hpp"

namespace solkin {

// Velocity-domain shrink policy: probe the two stripes at +-vmax*(1-p-gamma)
// and, when |f| < tol on both, project onto [-vmax*(1-p), vmax*(1-p)].
struct VAdjustPolicy {
    double p = 0.05;
    double gamma = 0.05;
    double tol = 1e-14;

    void validate() const;
};

bool check_velocity_shrink(const NodalField& f, const VAdjustPolicy& policy);

struct ShrinkResult {
    double vmax_before = 0.0;
    double vmax_after = 0.0;
    double mass_before = 0.0;
    double mass_after = 0.0;
};

// In-place projection onto the smaller symmetric v domain; the cell count is
// kept so the resolution increases. Caller is responsible for having checked
// the shrink criterion.
ShrinkResult shrink_velocity_domain(NodalField& f, const VAdjustPolicy& policy);

// L2 projection of m fine cells tiling one coarse cell (nodal in, nodal out).
void fine_to_coarse(const ReferenceBasis& basis, std::span<const double> fine, int m,
                    std::span<double> coarse);
// Exact restriction of one coarse cell onto its m fine subcells.
void coarse_to_fine(const ReferenceBasis& basis, std::span<const double> coarse, int m,
                    std::span<double> fine);

// Three-block x layout bookkeeping.
struct BlockLayout {
    int refinement_ratio = 1;
    int ghost_width = 1;

    // g = ceil(vmax*dt/(sqrt_mu_min*dx_local)) + 1
    static int required_ghost_width(double vmax, double dt, double sqrt_mu_min, double dx_local);
};

// Fill the extended input line of one block for an x sweep: gl ghost cells on
// the left and gr on the right, transferred from the neighboring blocks via
// fine_to_coarse / coarse_to_fine. `line` holds all x cells of the sweep line
// (ncells * (k+1) values); `ext` receives (gl + block_cells + gr) cells.
// Throws when a neighbor block cannot supply the requested width.
void exchange_block_ghosts(const ReferenceBasis& basis, const Grid1D& grid, int block,
                           std::span<const double> line, int gl, int gr,
                           std::vector<double>& ext);

}  // namespace solkin

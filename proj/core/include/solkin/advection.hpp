#pragma once

#include <optional>
#include <span>
#include <vector>

#include "solkin/basis.hpp"
#include "solkin/field.hpp"
#include "solkin/limiters.hpp"

namespace solkin {

// Displacement -a*dt split into whole cells and a fractional remainder:
// -a*dt = dx * (istar + alpha), alpha in [0,1).
struct ShiftDecomposition {
    int istar = 0;
    double alpha = 0.0;
};

ShiftDecomposition decompose_shift(double speed, double dt, double dx);

// The pair A(alpha), B(alpha): the new cell value is the L2 projection of the
// shifted piecewise polynomial, u_new_i = A u_{i+istar} + B u_{i+istar+1}.
struct ShiftMatrices {
    int p = 0;              // k+1
    double alpha = 0.0;
    std::vector<double> A;  // row-major p*p
    std::vector<double> B;
};

ShiftMatrices build_shift_matrices(const ReferenceBasis& basis, double alpha);

// Wall treatment of a sweep line. Production runs use ZeroInflow everywhere;
// Periodic exists for the test harness and single-block lines only.
enum class BoundaryRule { ZeroInflow, Periodic };

struct SweepStats {
    long outputs = 0;
    long inline_troubled = 0;
    long inline_clamped = 0;
    long inline_mean_outside = 0;
    long post_checked = 0;
    long post_troubled = 0;

    void merge(const SweepStats& o) {
        outputs += o.outputs;
        inline_troubled += o.inline_troubled;
        inline_clamped += o.inline_clamped;
        inline_mean_outside += o.inline_mean_outside;
        post_checked += o.post_checked;
        post_troubled += o.post_troubled;
    }
};

// Advance one uniform line of cells. `in` holds gl + n + gr cells of k+1
// nodal values each (ghosts included); `out` receives the n interior cells.
// Output cell i reads input cells gl+i+istar and gl+i+istar+1; reads outside
// `in` yield zero (ZeroInflow) or wrap modulo n (Periodic, requires gl=gr=0).
// The optional inline limiter checks and possibly clamps every output cell.
void advect_line(const ReferenceBasis& basis, const ShiftMatrices& M, int istar,
                 BoundaryRule bc, std::span<const double> in, int gl, int n, int gr,
                 std::span<double> out, const InlineLimiter* limiter, SweepStats* stats);

struct SpeciesParams {
    double charge_sign = -1.0;  // c_e = -1, c_i = +1
    double sqrt_mu = 1.0;

    static SpeciesParams electron() { return {-1.0, 1.0}; }
    static SpeciesParams ion(double mu);
};

struct SweepOptions {
    BoundaryRule bc = BoundaryRule::ZeroInflow;
    LimiterConfig limiter{};
    int threads = 1;
    int max_ghost = -1;  // <0: limited only by neighbor block capacity
    SweepStats* stats = nullptr;
    long step_index = 0;  // context for abort messages
};

// x sweep: each (v-cell, v-node) line advances with speed v/sqrt(mu); block
// interfaces are bridged with transferred ghost cells.
void advect_x(NodalField& f, double tau, const SpeciesParams& sp, const SweepOptions& opt);

// v sweep: each (x-cell, x-node) line advances with speed c*E(x)/sqrt(mu);
// E_nodes holds E at the degree-k x nodes, nx*(k+1) values.
void advect_v(NodalField& f, double tau, std::span<const double> E_nodes,
              const SpeciesParams& sp, const SweepOptions& opt);

}  // namespace solkin

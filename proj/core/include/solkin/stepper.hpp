#pragma once

#include <functional>
#include <limits>
#include <memory>

#include "solkin/advection.hpp"
#include "solkin/field.hpp"
#include "solkin/poisson.hpp"

namespace solkin {

// Neutral particle source shared by both species. A null evaluator means no
// source; t_end lets the stepper skip sampling once the window has closed.
struct SourceTerm {
    std::function<double(double t, double x, double v)> eval;
    double t_end = std::numeric_limits<double>::infinity();

    // t == t_end still samples: Heun then integrates the cutoff as a
    // half-weighted endpoint.
    bool active(double t) const { return static_cast<bool>(eval) && t <= t_end; }
};

struct StepTimers {
    double source = 0.0;
    double advect_x = 0.0;
    double advect_v = 0.0;
    double poisson = 0.0;
    double post_limiter = 0.0;

    double total() const { return source + advect_x + advect_v + poisson + post_limiter; }
};

struct StepOptions {
    BoundaryRule bc = BoundaryRule::ZeroInflow;
    LimiterConfig limiter{};
    int threads = 1;
    int max_ghost = -1;        // layout ghost allotment; <0 = capacity-limited
    bool freeze_field = false; // keep the stored E; skip the Poisson solve
    SweepStats* stats = nullptr;
    StepTimers* timers = nullptr;
};

struct SimulationState {
    NodalField f_e;
    NodalField f_i;
    std::shared_ptr<const PoissonOperator> poisson;  // factorized once
    FieldPair field;
    SourceTerm source;
    SpeciesParams electron = SpeciesParams::electron();
    SpeciesParams ion = SpeciesParams::ion(1.0);
    double time = 0.0;
    long step = 0;
};

// Heun step for df/dt = S over [t, t + half_dt]; exact for S linear in t.
void source_half_step(NodalField& f, double t, double half_dt, const SourceTerm& source);

// One Strang-split step: source, x half-sweep, mid-step Poisson solve, full
// v sweep, x half-sweep, source. Post limiters run after each sweep; the
// inline limiter runs inside the sweeps. Throws SimulationError on nonfinite
// values or Poisson failure.
void strang_step(SimulationState& state, double dt, const StepOptions& opt);

}  // namespace solkin

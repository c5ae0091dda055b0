#include "solkin/stepper.hpp"

#include <chrono>

#include "solkin/common.hpp"
#include "solkin/limiters.hpp"

namespace solkin {

namespace {

class PhaseTimer {
  public:
    explicit PhaseTimer(double* slot) : slot_(slot), start_(clock::now()) {}
    ~PhaseTimer() {
        if (slot_) *slot_ += std::chrono::duration<double>(clock::now() - start_).count();
    }

  private:
    using clock = std::chrono::steady_clock;
    double* slot_;
    clock::time_point start_;
};

double* slot(StepTimers* t, double StepTimers::* member) { return t ? &(t->*member) : nullptr; }

}  // namespace

void source_half_step(NodalField& f, double t, double half_dt, const SourceTerm& source) {
    if (!source.active(t)) return;
    const int p = f.nodes_per_cell();
    for (int vc = 0; vc < f.nv(); ++vc)
        for (int vn = 0; vn < p; ++vn) {
            double v = f.v_node(vc, vn);
            for (int xc = 0; xc < f.nx(); ++xc)
                for (int xn = 0; xn < p; ++xn) {
                    double x = f.x_node(xc, xn);
                    f.at(xc, xn, vc, vn) +=
                        0.5 * half_dt * (source.eval(t, x, v) + source.eval(t + half_dt, x, v));
                }
        }
}

void strang_step(SimulationState& state, double dt, const StepOptions& opt) {
    require(dt != 0.0, "strang_step: dt must be nonzero");
    const double half = 0.5 * dt;

    SweepOptions sweep;
    sweep.bc = opt.bc;
    sweep.limiter = opt.limiter;
    sweep.threads = opt.threads;
    sweep.max_ghost = opt.max_ghost;
    sweep.stats = opt.stats;
    sweep.step_index = state.step;

    auto post_limit = [&](SweepDirection dir) {
        if (!opt.limiter.post_enabled()) return;
        PhaseTimer timer(slot(opt.timers, &StepTimers::post_limiter));
        apply_post_limiter(state.f_e, dir, opt.limiter, opt.bc, opt.threads, opt.stats);
        apply_post_limiter(state.f_i, dir, opt.limiter, opt.bc, opt.threads, opt.stats);
    };
    auto advect_x_both = [&](double tau) {
        PhaseTimer timer(slot(opt.timers, &StepTimers::advect_x));
        advect_x(state.f_e, tau, state.electron, sweep);
        advect_x(state.f_i, tau, state.ion, sweep);
    };

    {
        PhaseTimer timer(slot(opt.timers, &StepTimers::source));
        source_half_step(state.f_e, state.time, half, state.source);
        source_half_step(state.f_i, state.time, half, state.source);
    }

    advect_x_both(half);
    post_limit(SweepDirection::X);

    if (!opt.freeze_field) {
        PhaseTimer timer(slot(opt.timers, &StepTimers::poisson));
        auto rho = charge_density(state.f_e, state.f_i);
        state.field = state.poisson->solve(rho);
    }

    {
        PhaseTimer timer(slot(opt.timers, &StepTimers::advect_v));
        advect_v(state.f_e, dt, state.field.E, state.electron, sweep);
        advect_v(state.f_i, dt, state.field.E, state.ion, sweep);
    }
    post_limit(SweepDirection::V);

    advect_x_both(half);
    post_limit(SweepDirection::X);

    {
        PhaseTimer timer(slot(opt.timers, &StepTimers::source));
        source_half_step(state.f_e, state.time + half, half, state.source);
        source_half_step(state.f_i, state.time + half, half, state.source);
    }

    state.time += dt;
    state.step += 1;
    if (!state.f_e.all_finite() || !state.f_i.all_finite())
        throw SimulationError(state.step, "nonfinite values in the density function");
}

}  // namespace solkin

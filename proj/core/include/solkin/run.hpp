#pragma once

#include <string>
#include <vector>

#include "solkin/config.hpp"
#include "solkin/diagnostics.hpp"
#include "solkin/stepper.hpp"

namespace solkin {

struct ShrinkEvent {
    long step = 0;
    Species species = Species::Electron;
    double vmax_before = 0.0;
    double vmax_after = 0.0;
    double mass_delta = 0.0;
};

struct RunResult {
    int exit_code = 0;
    std::string error;
    long steps_done = 0;
    std::vector<FluxSample> series;
    std::vector<ShrinkEvent> shrinks;
    SweepStats sweep_stats;
    StepTimers timers;
    double wall_seconds = 0.0;
};

// Sample the scenario's initial condition, assemble and factorize the Poisson
// operator, and solve once for the initial field.
SimulationState build_initial_state(const RunConfig& cfg);

// Step to t_final with the configured limiter, shrink checks after each step
// (rate-limited to one shrink per species per 10 steps), and diagnostics at
// the configured cadences. With write_files the flux series, snapshots,
// profiles, resolved config, and run log land in cfg.out_dir.
RunResult run(const RunConfig& cfg, bool write_files = true);

}  // namespace solkin

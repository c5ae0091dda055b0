#include "solkin/run.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <sstream>

#include "solkin/adaptivity.hpp"
#include "solkin/common.hpp"
#include "solkin/limiters.hpp"

namespace solkin {

namespace {

constexpr long kShrinkCooldownSteps = 10;

double gaussian_blob(double x, double v, double sigma) {
    return (1.0 / std::sqrt(2.0 * M_PI)) * std::exp(-x * x / (2.0 * sigma * sigma)) *
           std::exp(-v * v / 2.0);
}

}  // namespace

SimulationState build_initial_state(const RunConfig& cfg_in) {
    RunConfig cfg = cfg_in;
    cfg.resolve();
    cfg.validate();

    Grid1D xgrid = Grid1D::three_block(-cfg.L, cfg.L, cfg.fine_block_cells,
                                       cfg.coarse_block_cells, cfg.refinement_ratio);
    SimulationState state;
    state.f_e = NodalField(Species::Electron, xgrid,
                           Grid1D::uniform(-cfg.vmax_e, cfg.vmax_e, cfg.v_cells), cfg.k);
    state.f_i = NodalField(Species::Ion, xgrid,
                           Grid1D::uniform(-cfg.vmax_i, cfg.vmax_i, cfg.v_cells), cfg.k);
    state.electron = SpeciesParams::electron();
    state.ion = SpeciesParams::ion(cfg.mu);

    if (cfg.scenario == "blob") {
        double sigma = cfg.sigma;
        auto blob = [sigma](double x, double v) { return gaussian_blob(x, v, sigma); };
        state.f_e.fill(blob);
        state.f_i.fill(blob);
    } else {
        double sigma = cfg.sigma, t0 = cfg.t0;
        state.source.eval = [sigma, t0](double t, double x, double v) {
            if (t > t0) return 0.0;  // H(t0 - t), with H(0) = 1
            return gaussian_blob(x, v, sigma) / t0;
        };
        state.source.t_end = t0;
    }

    state.poisson = std::make_shared<PoissonOperator>(xgrid, cfg.k, cfg.penalty_scale);
    state.field = state.poisson->solve(charge_density(state.f_e, state.f_i));
    return state;
}

RunResult run(const RunConfig& cfg_in, bool write_files) {
    RunConfig cfg = cfg_in;
    cfg.resolve();
    cfg.validate();

    auto t_start = std::chrono::steady_clock::now();
    RunResult result;
    SimulationState state = build_initial_state(cfg);

    std::optional<OutputWriter> writer;
    if (write_files) {
        writer.emplace(cfg.out_dir);
        writer->write_text("config_resolved.cfg", cfg.echo());
    }

    StepOptions opt;
    opt.limiter = LimiterConfig::parse(cfg.limiter);
    opt.limiter.threshold = cfg.limiter_threshold;
    opt.threads = cfg.threads;
    opt.stats = &result.sweep_stats;
    opt.timers = &result.timers;

    VAdjustPolicy policy{cfg.adapt_p, cfg.adapt_gamma, cfg.adapt_tol};
    long last_shrink_e = -kShrinkCooldownSteps;
    long last_shrink_i = -kShrinkCooldownSteps;

    auto sample = [&]() {
        FluxSample s = sample_fluxes(state.time, state.f_e, state.f_i, state.field);
        result.series.push_back(s);
        if (writer) writer->write_flux_row(s);
    };
    auto snapshots = [&](long step) {
        if (!writer) return;
        if (cfg.snapshot_cadence > 0 && step % cfg.snapshot_cadence == 0)
            writer->write_snapshot(step, state.time, state.f_e, state.f_i);
        if (cfg.profile_cadence > 0 && step % cfg.profile_cadence == 0)
            writer->write_profiles(step, state.f_e, state.f_i, state.field);
    };
    auto check_shrink = [&](NodalField& f, long& last_shrink) {
        if (!cfg.v_adjust) return;
        if (state.step - last_shrink < kShrinkCooldownSteps) return;
        if (!check_velocity_shrink(f, policy)) return;
        auto r = shrink_velocity_domain(f, policy);
        last_shrink = state.step;
        ShrinkEvent ev{state.step, f.species(), r.vmax_before, r.vmax_after,
                       r.mass_after - r.mass_before};
        result.shrinks.push_back(ev);
        if (writer) {
            std::ostringstream msg;
            msg << "step " << ev.step << ": " << species_name(ev.species)
                << " v domain shrink " << r.vmax_before << " -> " << r.vmax_after
                << " (mass delta " << ev.mass_delta << ")";
            writer->log(msg.str());
        }
    };

    const long nsteps = cfg.nsteps();
    // ghost allotment from the layout formula, refreshed when v_max shrinks
    double sqrt_mu_min = std::min(state.electron.sqrt_mu, state.ion.sqrt_mu);

    sample();
    snapshots(0);

    try {
        for (long step = 1; step <= nsteps; ++step) {
            double vmax_now = std::max(state.f_e.v().right(), state.f_i.v().right());
            double dx_fine = state.f_e.x().blocks()[0].dx;
            opt.max_ghost =
                BlockLayout::required_ghost_width(vmax_now, cfg.dt, sqrt_mu_min, dx_fine);
            strang_step(state, cfg.dt, opt);
            check_shrink(state.f_e, last_shrink_e);
            check_shrink(state.f_i, last_shrink_i);
            result.steps_done = step;
            if (step % cfg.cadence == 0) {
                sample();
                if (writer && opt.limiter.any()) {
                    std::ostringstream msg;
                    msg << "step " << step << ": inline_troubled=" << result.sweep_stats.inline_troubled
                        << " inline_clamped=" << result.sweep_stats.inline_clamped
                        << " inline_mean_outside=" << result.sweep_stats.inline_mean_outside
                        << " post_troubled=" << result.sweep_stats.post_troubled << "/"
                        << result.sweep_stats.post_checked;
                    writer->log(msg.str());
                }
            }
            snapshots(step);
        }
    } catch (const SimulationError& e) {
        result.exit_code = 1;
        result.error = e.what();
        if (writer) {
            writer->log(std::string("ABORT: ") + e.what());
            writer->write_snapshot(state.step, state.time, state.f_e, state.f_i);
            writer->write_profiles(state.step, state.f_e, state.f_i, state.field);
        }
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    if (writer) {
        std::ostringstream msg;
        msg << "phase timings [s]: source=" << result.timers.source
            << " advect_x=" << result.timers.advect_x << " advect_v=" << result.timers.advect_v
            << " poisson=" << result.timers.poisson
            << " post_limiter=" << result.timers.post_limiter
            << " wall=" << result.wall_seconds;
        writer->log(msg.str());
    }
    return result;
}

}  // namespace solkin

// solkin: two-species 1x1v Vlasov-Poisson scrape-off-layer solver.
//
//   solkin run --config <file> [--preset <name>] [--limiter <mode>]
//              [--out <dir>] [--threads N]
//   solkin matrices --alpha <a> --order <k>
//   solkin check

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "solkin/advection.hpp"
#include "solkin/check.hpp"
#include "solkin/config.hpp"
#include "solkin/run.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& preset,
            const std::string& limiter, const std::string& out_dir, int threads) {
    solkin::RunConfig cfg;
    if (!preset.empty()) cfg = solkin::RunConfig::preset(preset);
    if (!config_path.empty()) cfg.apply_file(config_path);
    if (!limiter.empty()) cfg.limiter = limiter;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (threads > 0) cfg.threads = threads;
    cfg.resolve();
    cfg.validate();

    auto result = solkin::run(cfg);
    if (result.exit_code != 0) {
        std::cerr << "run aborted: " << result.error << "\n";
        return result.exit_code;
    }
    std::cout << "completed " << result.steps_done << " steps in " << result.wall_seconds
              << " s; outputs in " << cfg.out_dir << "\n";
    std::cout << "shrink events: " << result.shrinks.size()
              << ", inline troubled cells: " << result.sweep_stats.inline_troubled
              << ", post troubled cells: " << result.sweep_stats.post_troubled << "\n";
    return 0;
}

int cmd_matrices(double alpha, int order) {
    const auto& basis = solkin::ReferenceBasis::get(order);
    auto M = solkin::build_shift_matrices(basis, alpha);
    auto print = [&](const char* name, const std::vector<double>& mat) {
        std::printf("%s(alpha=%.17g), order %d:\n", name, alpha, order);
        for (int m = 0; m < M.p; ++m) {
            for (int n = 0; n < M.p; ++n) std::printf(" % .17e", mat[m * M.p + n]);
            std::printf("\n");
        }
    };
    print("A", M.A);
    print("B", M.B);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semi-Lagrangian DG Vlasov-Poisson solver for the scrape-off layer"};
    app.require_subcommand(1);

    std::string config_path, preset, limiter, out_dir;
    int threads = 0;
    auto* run_cmd = app.add_subcommand("run", "run a simulation");
    run_cmd->add_option("--config", config_path, "key=value config file");
    run_cmd->add_option("--preset", preset,
                        "blob-paper | injection-paper | blob-desk | injection-desk");
    run_cmd->add_option("--limiter", limiter,
                        "none | minmod+simple | minmod+line | meanerr+simple | meanerr+line | sldg");
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_option("--threads", threads, "sweep worker threads");

    double alpha = 0.0;
    int order = 3;
    auto* mat_cmd = app.add_subcommand("matrices", "print the advection matrices A, B");
    mat_cmd->add_option("--alpha", alpha, "fractional shift in [0,1)")->required();
    mat_cmd->add_option("--order", order, "polynomial degree k")->check(CLI::Range(0, 6));

    auto* check_cmd = app.add_subcommand("check", "run the built-in invariant suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(config_path, preset, limiter, out_dir, threads);
        if (mat_cmd->parsed()) return cmd_matrices(alpha, order);
        if (check_cmd->parsed()) return solkin::run_self_checks(std::cout) == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

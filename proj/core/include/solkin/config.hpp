#pragma once

#include <string>
#include <vector>

namespace solkin {

// Resolved run configuration. File format is flat key=value with '#'
// comments; CLI flags override file keys which override preset values.
struct RunConfig {
    std::string scenario = "blob";  // blob | injection
    double L = 200.0;
    double dt = 0.1;
    int k = 3;
    double mu = 400.0;
    double t_final = 400.0;
    double sigma = -1.0;  // <0: resolved to 0.1*L
    double t0 = 2000.0;   // source window (injection)
    double vmax_e = 12.0;
    double vmax_i = 12.0;

    int fine_block_cells = 50;
    int coarse_block_cells = 50;
    int refinement_ratio = 1;
    int v_cells = 40;

    std::string limiter = "none";
    double limiter_threshold = 0.5;

    bool v_adjust = true;
    double adapt_p = 0.05;
    double adapt_gamma = 0.05;
    double adapt_tol = 1e-14;

    double penalty_scale = 10.0;

    std::string out_dir = "out";
    int cadence = 10;           // flux row every N steps
    int snapshot_cadence = 0;   // 0 = off
    int profile_cadence = 0;    // 0 = off
    int threads = 1;

    // blob-paper, injection-paper, blob-desk, injection-desk
    static RunConfig preset(const std::string& name);
    static RunConfig from_file(const std::string& path);

    void apply_file(const std::string& path);
    void apply_kv(const std::string& key, const std::string& value);

    // Fill derived defaults (sigma = 0.1*L when unset).
    void resolve();
    // Violations as "key.path: message" lines; empty when valid.
    std::vector<std::string> violations() const;
    // Throws with all violations listed.
    void validate() const;
    // Re-ingestible key=value echo of the resolved configuration.
    std::string echo() const;

    long nsteps() const;
};

}  // namespace solkin

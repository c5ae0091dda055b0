#include "solkin/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "solkin/common.hpp"
#include "solkin/limiters.hpp"

namespace solkin {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        require(pos == v.size(), "");
        return d;
    } catch (...) {
        throw std::runtime_error(key + ": not a number: '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        int i = std::stoi(v, &pos);
        require(pos == v.size(), "");
        return i;
    } catch (...) {
        throw std::runtime_error(key + ": not an integer: '" + v + "'");
    }
}

bool to_onoff(const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw std::runtime_error(key + ": expected on|off, got '" + v + "'");
}

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

RunConfig RunConfig::preset(const std::string& name) {
    RunConfig c;
    if (name == "blob-desk") {
        c.t_final = 400.0;
    } else if (name == "injection-desk") {
        c.scenario = "injection";
        c.t_final = 400.0;
    } else if (name == "blob-paper") {
        // 1200 x 600 degrees of freedom at order 4: 300 x cells, 150 v cells
        c.fine_block_cells = 100;
        c.coarse_block_cells = 100;
        c.refinement_ratio = 1;
        c.v_cells = 150;
        c.t_final = 4000.0;
    } else if (name == "injection-paper") {
        c.scenario = "injection";
        c.fine_block_cells = 100;
        c.coarse_block_cells = 100;
        c.refinement_ratio = 8;
        c.v_cells = 150;
        c.t_final = 8000.0;
    } else {
        throw std::runtime_error("unknown preset '" + name +
                                 "' (expected blob-paper, injection-paper, blob-desk, "
                                 "injection-desk)");
    }
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    RunConfig c;
    c.apply_file(path);
    return c;
}

void RunConfig::apply_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot read config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        require(eq != std::string::npos,
                path + ":" + std::to_string(lineno) + ": expected key = value");
        apply_kv(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void RunConfig::apply_kv(const std::string& key, const std::string& value) {
    if (key == "scenario") scenario = value;
    else if (key == "L") L = to_double(key, value);
    else if (key == "dt") dt = to_double(key, value);
    else if (key == "k") k = to_int(key, value);
    else if (key == "mu") mu = to_double(key, value);
    else if (key == "t_final") t_final = to_double(key, value);
    else if (key == "sigma") sigma = to_double(key, value);
    else if (key == "t0") t0 = to_double(key, value);
    else if (key == "vmax_e") vmax_e = to_double(key, value);
    else if (key == "vmax_i") vmax_i = to_double(key, value);
    else if (key == "mesh.fine_block_cells") fine_block_cells = to_int(key, value);
    else if (key == "mesh.coarse_block_cells") coarse_block_cells = to_int(key, value);
    else if (key == "mesh.refinement_ratio") refinement_ratio = to_int(key, value);
    else if (key == "v_cells") v_cells = to_int(key, value);
    else if (key == "limiter") limiter = value;
    else if (key == "limiter.threshold") limiter_threshold = to_double(key, value);
    else if (key == "adaptivity.v_adjust") v_adjust = to_onoff(key, value);
    else if (key == "adaptivity.p") adapt_p = to_double(key, value);
    else if (key == "adaptivity.gamma") adapt_gamma = to_double(key, value);
    else if (key == "adaptivity.tol") adapt_tol = to_double(key, value);
    else if (key == "poisson.penalty_scale") penalty_scale = to_double(key, value);
    else if (key == "output.dir") out_dir = value;
    else if (key == "output.cadence") cadence = to_int(key, value);
    else if (key == "output.snapshot_cadence") snapshot_cadence = to_int(key, value);
    else if (key == "output.profile_cadence") profile_cadence = to_int(key, value);
    else if (key == "threads") threads = to_int(key, value);
    else throw std::runtime_error("unknown config key '" + key + "'");
}

void RunConfig::resolve() {
    if (sigma < 0) sigma = 0.1 * L;
}

std::vector<std::string> RunConfig::violations() const {
    std::vector<std::string> v;
    auto bad = [&](const std::string& key, const std::string& msg) { v.push_back(key + ": " + msg); };
    if (scenario != "blob" && scenario != "injection") bad("scenario", "must be blob or injection");
    if (!(L > 0)) bad("L", "must be positive");
    if (!(dt > 0)) bad("dt", "must be positive");
    if (k < 0 || k > 6) bad("k", "must be in 0..6");
    if (!(mu > 0)) bad("mu", "must be positive");
    if (t_final < 0) bad("t_final", "must be >= 0");
    if (!(sigma > 0)) bad("sigma", "must be positive (call resolve() to default to 0.1*L)");
    if (!(t0 > 0)) bad("t0", "must be positive");
    if (!(vmax_e > 0)) bad("vmax_e", "must be positive");
    if (!(vmax_i > 0)) bad("vmax_i", "must be positive");
    if (fine_block_cells < 1) bad("mesh.fine_block_cells", "must be >= 1");
    if (coarse_block_cells < 1) bad("mesh.coarse_block_cells", "must be >= 1");
    if (refinement_ratio < 1) bad("mesh.refinement_ratio", "must be >= 1");
    if (v_cells < 1) bad("v_cells", "must be >= 1");
    try {
        LimiterConfig::parse(limiter);
    } catch (const std::exception&) {
        bad("limiter",
            "must be one of none, minmod+simple, minmod+line, meanerr+simple, meanerr+line, sldg");
    }
    if (!(limiter_threshold > 0)) bad("limiter.threshold", "must be positive");
    if (!(adapt_p > 0) || adapt_gamma < 0 || adapt_p + adapt_gamma >= 1)
        bad("adaptivity.p/gamma", "need 0 < p, 0 <= gamma, p + gamma < 1");
    if (!(adapt_tol > 0)) bad("adaptivity.tol", "must be positive");
    if (!(penalty_scale > 0)) bad("poisson.penalty_scale", "must be positive");
    if (cadence < 1) bad("output.cadence", "must be >= 1");
    if (snapshot_cadence < 0) bad("output.snapshot_cadence", "must be >= 0");
    if (profile_cadence < 0) bad("output.profile_cadence", "must be >= 0");
    if (threads < 1) bad("threads", "must be >= 1");
    return v;
}

void RunConfig::validate() const {
    auto v = violations();
    if (v.empty()) return;
    std::ostringstream msg;
    msg << "invalid configuration:";
    for (const auto& s : v) msg << "\n  " << s;
    throw std::runtime_error(msg.str());
}

std::string RunConfig::echo() const {
    std::ostringstream o;
    o << "scenario = " << scenario << "\n";
    o << "L = " << g17(L) << "\n";
    o << "dt = " << g17(dt) << "\n";
    o << "k = " << k << "\n";
    o << "mu = " << g17(mu) << "\n";
    o << "t_final = " << g17(t_final) << "\n";
    o << "sigma = " << g17(sigma) << "\n";
    o << "t0 = " << g17(t0) << "\n";
    o << "vmax_e = " << g17(vmax_e) << "\n";
    o << "vmax_i = " << g17(vmax_i) << "\n";
    o << "mesh.fine_block_cells = " << fine_block_cells << "\n";
    o << "mesh.coarse_block_cells = " << coarse_block_cells << "\n";
    o << "mesh.refinement_ratio = " << refinement_ratio << "\n";
    o << "v_cells = " << v_cells << "\n";
    o << "limiter = " << limiter << "\n";
    o << "limiter.threshold = " << g17(limiter_threshold) << "\n";
    o << "adaptivity.v_adjust = " << (v_adjust ? "on" : "off") << "\n";
    o << "adaptivity.p = " << g17(adapt_p) << "\n";
    o << "adaptivity.gamma = " << g17(adapt_gamma) << "\n";
    o << "adaptivity.tol = " << g17(adapt_tol) << "\n";
    o << "poisson.penalty_scale = " << g17(penalty_scale) << "\n";
    o << "output.dir = " << out_dir << "\n";
    o << "output.cadence = " << cadence << "\n";
    o << "output.snapshot_cadence = " << snapshot_cadence << "\n";
    o << "output.profile_cadence = " << profile_cadence << "\n";
    o << "threads = " << threads << "\n";
    return o.str();
}

long RunConfig::nsteps() const { return std::lround(t_final / dt); }

}  // namespace solkin

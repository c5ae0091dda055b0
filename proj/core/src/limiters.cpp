#include "solkin/limiters.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "solkin/advection.hpp"
#include "solkin/adaptivity.hpp"
#include "solkin/common.hpp"
#include "solkin/parallel.hpp"

namespace solkin {

LimiterConfig LimiterConfig::parse(const std::string& mode) {
    LimiterConfig cfg;
    if (mode == "none") return cfg;
    if (mode == "sldg") {
        cfg.inline_sldg = true;
        return cfg;
    }
    auto plus = mode.find('+');
    require(plus != std::string::npos, "unknown limiter mode: " + mode);
    std::string ind = mode.substr(0, plus), mod = mode.substr(plus + 1);
    if (ind == "minmod")
        cfg.indicator = IndicatorKind::Minmod;
    else if (ind == "meanerr")
        cfg.indicator = IndicatorKind::MeanErr;
    else
        require(false, "unknown limiter indicator: " + ind);
    if (mod == "simple")
        cfg.modifier = ModifierKind::SimpleWeno;
    else if (mod == "line")
        cfg.modifier = ModifierKind::LineWeno;
    else
        require(false, "unknown limiter modifier: " + mod);
    return cfg;
}

std::string LimiterConfig::mode_string() const {
    if (inline_sldg) return "sldg";
    if (indicator == IndicatorKind::None) return "none";
    std::string s = indicator == IndicatorKind::Minmod ? "minmod" : "meanerr";
    s += modifier == ModifierKind::SimpleWeno ? "+simple" : "+line";
    return s;
}

double minmod(double a, double b, double c) {
    if (a > 0 && b > 0 && c > 0) return std::min(a, std::min(b, c));
    if (a < 0 && b < 0 && c < 0) return -std::min(-a, std::min(-b, -c));
    return 0.0;
}

bool indicator_minmod(const ReferenceBasis& basis, const StencilTriplet& t) {
    double mean_m = basis.mean(t.um);
    double mean_0 = basis.mean(t.u0);
    double mean_p = basis.mean(t.up);
    double u0_plus = basis.evaluate(t.u0, 1.0) - mean_0;
    double u0_minus = mean_0 - basis.evaluate(t.u0, 0.0);
    double d_plus = mean_p - mean_0;
    double d_minus = mean_0 - mean_m;
    // troubled iff minmod moved away from the first argument; the comparison
    // carries a roundoff guard scaled to the stencil so constants and exact
    // polynomials never flag on edge-evaluation noise
    double scale = std::max({std::abs(mean_m), std::abs(mean_0), std::abs(mean_p),
                             std::abs(u0_plus), std::abs(u0_minus), std::abs(d_plus),
                             std::abs(d_minus)});
    double guard = 1e-13 * scale;
    return std::abs(minmod(u0_plus, d_plus, d_minus) - u0_plus) > guard ||
           std::abs(minmod(u0_minus, d_plus, d_minus) - u0_minus) > guard;
}

bool indicator_meanerr(const ReferenceBasis& basis, const StencilTriplet& t, double threshold) {
    double mean_m = basis.mean(t.um);
    double mean_0 = basis.mean(t.u0);
    double mean_p = basis.mean(t.up);
    double denom = std::max(std::abs(mean_m), std::max(std::abs(mean_0), std::abs(mean_p)));
    if (denom <= 0.0) return false;  // vacuum stencil
    // extensions of the neighbors over I_0, in each neighbor's own coordinates
    double ext_m = basis.integrate(t.um, 1.0, 2.0);
    double ext_p = basis.integrate(t.up, -1.0, 0.0);
    double indicator = (std::abs(ext_m - mean_0) + std::abs(ext_p - mean_0)) / denom;
    return indicator > threshold;
}

double smoothness_beta(const ReferenceBasis& basis, std::span<const double> u) {
    const int p = basis.npoints();
    const int k = basis.degree();
    std::vector<double> cur(u.begin(), u.end()), next(p);
    double total = 0.0;
    for (int s = 1; s <= k; ++s) {
        for (int m = 0; m < p; ++m) {
            double acc = 0.0;
            for (int n = 0; n < p; ++n) acc += basis.diff(m, n) * cur[n];
            next[m] = acc;
        }
        for (int q = 0; q < p; ++q) total += basis.weights()[q] * next[q] * next[q];
        cur = next;
    }
    return total;
}

void modify_simple_weno(const ReferenceBasis& basis, const StencilTriplet& t,
                        const LimiterConfig& cfg, std::span<double> out) {
    const int p = basis.npoints();
    double beta_m = smoothness_beta(basis, t.um);
    double beta_0 = smoothness_beta(basis, t.u0);
    double beta_p = smoothness_beta(basis, t.up);
    double wm = cfg.gamma_simple[0] / ((cfg.epsilon + beta_m) * (cfg.epsilon + beta_m));
    double w0 = cfg.gamma_simple[1] / ((cfg.epsilon + beta_0) * (cfg.epsilon + beta_0));
    double wp = cfg.gamma_simple[2] / ((cfg.epsilon + beta_p) * (cfg.epsilon + beta_p));
    double sum = wm + w0 + wp;
    wm /= sum;
    w0 /= sum;
    wp /= sum;

    // Neighbor candidates are shifted by the mean of their extension over I_0,
    // which keeps every candidate (hence the output) at the mean of u_0.
    double mean_0 = basis.mean(t.u0);
    double ext_mean_m = basis.integrate(t.um, 1.0, 2.0);
    double ext_mean_p = basis.integrate(t.up, -1.0, 0.0);
    for (int m = 0; m < p; ++m) {
        double xi = basis.nodes()[m];
        double cand_m = basis.evaluate(t.um, 1.0 + xi) - ext_mean_m + mean_0;
        double cand_p = basis.evaluate(t.up, xi - 1.0) - ext_mean_p + mean_0;
        out[m] = wm * cand_m + w0 * t.u0[m] + wp * cand_p;
    }
}

void modify_line_weno(const ReferenceBasis& basis, const StencilTriplet& t,
                      const LimiterConfig& cfg, std::span<double> out) {
    const int p = basis.npoints();
    require(cfg.gamma_line[1] != 0.0, "line WENO: gamma_0 must be nonzero");
    double mean_m = basis.mean(t.um);
    double mean_0 = basis.mean(t.u0);
    double mean_p = basis.mean(t.up);

    // p_{-1}, p_{+1}: linear, matching the pair of cell means; p_0 completes
    // u_0 = gamma_{-1} p_{-1} + gamma_0 p_0 + gamma_1 p_1 exactly.
    // In I_0 coordinates x in [0,1]: int_{I_0} (a+bx) = a + b/2.
    double bm = mean_0 - mean_m, am = mean_0 - 0.5 * bm;
    double bp = mean_p - mean_0, ap = mean_0 - 0.5 * bp;
    double gm = cfg.gamma_line[0], g0 = cfg.gamma_line[1], gp = cfg.gamma_line[2];

    std::vector<double> pm(p), pp(p), p0(p);
    for (int m = 0; m < p; ++m) {
        double xi = basis.nodes()[m];
        pm[m] = am + bm * xi;
        pp[m] = ap + bp * xi;
        p0[m] = (t.u0[m] - gm * pm[m] - gp * pp[m]) / g0;
    }

    double beta_m = smoothness_beta(basis, t.um);
    double beta_0 = smoothness_beta(basis, t.u0);
    double beta_p = smoothness_beta(basis, t.up);
    double tau = 0.5 * (std::abs(beta_0 - beta_m) + std::abs(beta_0 - beta_p));
    tau *= tau;
    double wm = gm * (1.0 + tau / (cfg.epsilon + beta_m));
    double w0 = g0 * (1.0 + tau / (cfg.epsilon + beta_0));
    double wp = gp * (1.0 + tau / (cfg.epsilon + beta_p));
    double sum = wm + w0 + wp;
    wm /= sum;
    w0 /= sum;
    wp /= sum;
    for (int m = 0; m < p; ++m) out[m] = wm * pm[m] + w0 * p0[m] + wp * pp[m];
}

InlineLimiter::InlineLimiter(const ReferenceBasis& basis, double alpha, double threshold)
    : basis_(&basis), alpha_(alpha), threshold_(threshold) {
    // u_p lives on [alpha, 1+alpha]; I_l = [0,1] maps to [-alpha, 1-alpha] and
    // I_r = [1,2] to [1-alpha, 2-alpha] in u_p's reference coordinates.
    ext_l_ = basis.interval_moments(-alpha, 1.0 - alpha);
    ext_r_ = basis.interval_moments(1.0 - alpha, 2.0 - alpha);
}

bool InlineLimiter::indicator(std::span<const double> ul, std::span<const double> ur,
                              std::span<const double> up) const {
    const int p = basis_->npoints();
    double mean_l = basis_->mean(ul);
    double mean_r = basis_->mean(ur);
    double denom = std::max(std::abs(mean_l), std::abs(mean_r));
    if (denom <= 0.0) return false;
    double ext_l = 0.0, ext_r = 0.0;
    for (int n = 0; n < p; ++n) {
        ext_l += ext_l_[n] * up[n];
        ext_r += ext_r_[n] * up[n];
    }
    double indicator = (std::abs(ext_l - mean_l) + std::abs(ext_r - mean_r)) / denom;
    return indicator > threshold_;
}

InlineLimiter::Result InlineLimiter::clamp(std::span<const double> ul,
                                           std::span<const double> ur,
                                           std::span<double> up) const {
    Result r;
    r.troubled = true;
    double mean_p = basis_->mean(up);
    // overlap windows: [alpha,1] of u_l and [1,1+alpha] of u_r (ref [0,alpha])
    double wmax = std::max(basis_->max_on(ul, alpha_, 1.0), basis_->max_on(ur, 0.0, alpha_));
    double wmin = std::min(basis_->min_on(ul, alpha_, 1.0), basis_->min_on(ur, 0.0, alpha_));
    double pmax = basis_->max_on(up, 0.0, 1.0);
    double pmin = basis_->min_on(up, 0.0, 1.0);
    r.mean_outside = (mean_p > wmax) || (mean_p < wmin);

    double theta = 1.0;
    double dmax = pmax - mean_p;
    if (dmax != 0.0) theta = std::min(theta, std::abs((wmax - mean_p) / dmax));
    double dmin = pmin - mean_p;
    if (dmin != 0.0) theta = std::min(theta, std::abs((wmin - mean_p) / dmin));
    // constant u_p leaves no candidates: theta stays 1
    if (theta < 1.0) {
        for (auto& v : up) v = theta * (v - mean_p) + mean_p;
        r.clamped = true;
    }
    return r;
}

InlineLimiter::Result InlineLimiter::apply(std::span<const double> ul,
                                           std::span<const double> ur,
                                           std::span<double> up) const {
    if (!indicator(ul, ur, up)) return {};
    return clamp(ul, ur, up);
}

bool sldg_indicator(const ReferenceBasis& basis, const InlineStencil& s, double threshold) {
    return InlineLimiter(basis, s.alpha, threshold).indicator(s.ul, s.ur, s.up);
}

std::vector<double> sldg_modifier(const ReferenceBasis& basis, const InlineStencil& s) {
    std::vector<double> out(s.up.begin(), s.up.end());
    InlineLimiter(basis, s.alpha, 0.0).clamp(s.ul, s.ur, out);
    return out;
}

namespace {

struct PostPass {
    const ReferenceBasis& basis;
    const LimiterConfig& cfg;
    SweepStats stats;

    bool flag(const StencilTriplet& t) const {
        if (cfg.indicator == IndicatorKind::Minmod) return indicator_minmod(basis, t);
        return indicator_meanerr(basis, t, cfg.threshold);
    }
    void modify(const StencilTriplet& t, std::span<double> out) const {
        if (cfg.modifier == ModifierKind::SimpleWeno)
            modify_simple_weno(basis, t, cfg, out);
        else
            modify_line_weno(basis, t, cfg, out);
    }

    // One uniform line segment with explicit neighbor cells at its two ends
    // (empty spans mean a zero neighbor). Flags from pre-pass data.
    void run_segment(std::span<const double> cells, int n,
                     std::span<const double> left_nb, std::span<const double> right_nb,
                     bool wrap, std::span<double> out) {
        const int p = basis.npoints();
        static const std::vector<double> zero(8, 0.0);
        auto cell = [&](int i) -> std::span<const double> {
            if (i >= 0 && i < n) return cells.subspan(size_t(i) * p, p);
            if (wrap) return cells.subspan(size_t(((i % n) + n) % n) * p, p);
            if (i < 0) return left_nb.empty() ? std::span<const double>(zero.data(), p) : left_nb;
            return right_nb.empty() ? std::span<const double>(zero.data(), p) : right_nb;
        };
        for (int i = 0; i < n; ++i) {
            StencilTriplet t{cell(i - 1), cell(i), cell(i + 1)};
            ++stats.post_checked;
            if (flag(t)) {
                ++stats.post_troubled;
                modify(t, out.subspan(size_t(i) * p, p));
            } else {
                std::copy_n(t.u0.begin(), p, out.begin() + size_t(i) * p);
            }
        }
    }
};

}  // namespace

void apply_post_limiter(NodalField& f, SweepDirection dir, const LimiterConfig& cfg,
                        BoundaryRule bc, int threads, SweepStats* stats) {
    if (!cfg.post_enabled()) return;
    const auto& basis = ReferenceBasis::get(f.degree());
    const int p = f.nodes_per_cell();
    const bool wrap = bc == BoundaryRule::Periodic;

    std::vector<SweepStats> partial;
    std::mutex merge_mu;

    if (dir == SweepDirection::X) {
        const Grid1D& grid = f.x();
        const int nblocks = grid.nblocks();
        if (nblocks > 1)
            require(!wrap, "apply_post_limiter: periodic rule needs a single-block grid");
        const int nlines = f.nv() * p;
        parallel_for_chunks(nlines, threads, [&](int begin, int end) {
            PostPass pass{basis, cfg, {}};
            std::vector<double> scratch(size_t(f.nx()) * p);
            std::vector<double> ext;
            for (int lid = begin; lid < end; ++lid) {
                auto line = f.x_line(lid / p, lid % p);
                if (nblocks == 1) {
                    pass.run_segment(line, f.nx(), {}, {}, wrap, scratch);
                } else {
                    for (int b = 0; b < nblocks; ++b) {
                        const auto& blk = grid.blocks()[b];
                        int gl = b > 0 ? 1 : 0, gr = b + 1 < nblocks ? 1 : 0;
                        exchange_block_ghosts(basis, grid, b, line, gl, gr, ext);
                        int c0 = grid.block_start(b);
                        std::span<const double> extv(ext);
                        pass.run_segment(extv.subspan(size_t(gl) * p, size_t(blk.cells) * p),
                                         blk.cells,
                                         gl ? extv.subspan(0, p) : std::span<const double>{},
                                         gr ? extv.subspan(size_t(gl + blk.cells) * p, p)
                                            : std::span<const double>{},
                                         false,
                                         std::span<double>(scratch.data() + size_t(c0) * p,
                                                           size_t(blk.cells) * p));
                    }
                }
                std::copy(scratch.begin(), scratch.end(), line.begin());
            }
            std::scoped_lock lock(merge_mu);
            partial.push_back(pass.stats);
        });
    } else {
        const int nv = f.nv();
        const int nlines = f.nx() * p;
        parallel_for_chunks(nlines, threads, [&](int begin, int end) {
            PostPass pass{basis, cfg, {}};
            std::vector<double> in(size_t(nv) * p), out(size_t(nv) * p);
            for (int lid = begin; lid < end; ++lid) {
                int xc = lid / p, xn = lid % p;
                f.gather_v_line(xc, xn, in);
                pass.run_segment(in, nv, {}, {}, wrap, out);
                f.scatter_v_line(xc, xn, out);
            }
            std::scoped_lock lock(merge_mu);
            partial.push_back(pass.stats);
        });
    }

    if (stats)
        for (const auto& s : partial) stats->merge(s);
}

}  // namespace solkin

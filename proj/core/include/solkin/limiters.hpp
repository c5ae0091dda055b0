#pragma once

#include <span>
#include <string>
#include <vector>

#include "solkin/basis.hpp"
#include "solkin/field.hpp"

namespace solkin {

enum class BoundaryRule;  // advection.hpp
struct SweepStats;

enum class IndicatorKind { None, Minmod, MeanErr };
enum class ModifierKind { None, SimpleWeno, LineWeno };

// Selected limiter strategy plus the tunables from the paper's experiments.
struct LimiterConfig {
    IndicatorKind indicator = IndicatorKind::None;
    ModifierKind modifier = ModifierKind::None;
    bool inline_sldg = false;
    double threshold = 0.5;  // mean-error and inline indicators
    double gamma_simple[3] = {0.001, 0.998, 0.001};
    double gamma_line[3] = {0.45, 0.1, 0.45};
    double epsilon = 1e-6;

    bool post_enabled() const { return indicator != IndicatorKind::None; }
    bool any() const { return post_enabled() || inline_sldg; }

    // Modes: none, minmod+simple, minmod+line, meanerr+simple, meanerr+line, sldg.
    static LimiterConfig parse(const std::string& mode);
    std::string mode_string() const;
};

double minmod(double a, double b, double c);

// Three equal-width contiguous cells in standardized coordinates: u_m on
// [-1,0], u_0 on [0,1], u_p on [1,2], each stored on its own [0,1] reference.
struct StencilTriplet {
    std::span<const double> um;
    std::span<const double> u0;
    std::span<const double> up;
};

bool indicator_minmod(const ReferenceBasis& basis, const StencilTriplet& t);
bool indicator_meanerr(const ReferenceBasis& basis, const StencilTriplet& t, double threshold);

// Jiang-Shu smoothness: sum over s=1..k of the integral of the squared s-th
// derivative over the unit cell.
double smoothness_beta(const ReferenceBasis& basis, std::span<const double> u);

void modify_simple_weno(const ReferenceBasis& basis, const StencilTriplet& t,
                        const LimiterConfig& cfg, std::span<double> out);
void modify_line_weno(const ReferenceBasis& basis, const StencilTriplet& t,
                      const LimiterConfig& cfg, std::span<double> out);

// Inline limiter for the semi-Lagrangian update: checks the projected cell
// u_p (on [alpha,1+alpha]) against the two input cells u_l on [0,1] and u_r
// on [1,2], and clamps u_p into their overlap-window range when troubled.
// Precomputes the alpha-dependent extension moments once per sweep line.
class InlineLimiter {
  public:
    InlineLimiter(const ReferenceBasis& basis, double alpha, double threshold);

    struct Result {
        bool troubled = false;
        bool clamped = false;
        bool mean_outside = false;  // cell mean of u_p outside the input window
    };

    bool indicator(std::span<const double> ul, std::span<const double> ur,
                   std::span<const double> up) const;
    // theta-clamp of up toward its mean; up modified in place.
    Result clamp(std::span<const double> ul, std::span<const double> ur,
                 std::span<double> up) const;
    Result apply(std::span<const double> ul, std::span<const double> ur,
                 std::span<double> up) const;

    double alpha() const { return alpha_; }

  private:
    const ReferenceBasis* basis_;
    double alpha_;
    double threshold_;
    std::vector<double> ext_l_;  // moments of u_p's basis over I_l = [0,1]
    std::vector<double> ext_r_;  // and over I_r = [1,2]
};

// Standalone forms of the inline indicator/modifier.
struct InlineStencil {
    std::span<const double> ul;
    std::span<const double> ur;
    std::span<const double> up;
    double alpha = 0.0;
};

bool sldg_indicator(const ReferenceBasis& basis, const InlineStencil& s, double threshold);
std::vector<double> sldg_modifier(const ReferenceBasis& basis, const InlineStencil& s);

enum class SweepDirection { X, V };

// Post-processing pass: indicator-check every cell of every line in the given
// direction against its neighbors and replace troubled cells with the
// configured modifier. Wall-adjacent stencils use a zero neighbor under
// ZeroInflow; Periodic wraps. Flags are computed from pre-pass data.
void apply_post_limiter(NodalField& f, SweepDirection dir, const LimiterConfig& cfg,
                        BoundaryRule bc, int threads, SweepStats* stats);

}  // namespace solkin

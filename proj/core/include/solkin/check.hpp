#pragma once

#include <ostream>

namespace solkin {

// Built-in invariant suite behind `solkin check`: quadrature exactness,
// shift-matrix identities, Poisson residual, sweep conservation, and inline
// limiter soundness. Prints one line per check; returns the failure count.
int run_self_checks(std::ostream& out);

}  // namespace solkin

#pragma once

#include <stdexcept>
#include <string>

namespace solkin {

// Precondition / invariant failures surface as exceptions with context.
inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg);
}

// Raised when a simulation step produces an unusable state (nonfinite values,
// Poisson factorization failure, insufficient ghost width). Carries the step
// index at which the run must stop.
struct SimulationError : std::runtime_error {
    long step;
    SimulationError(long step_, const std::string& msg)
        : std::runtime_error("step " + std::to_string(step_) + ": " + msg), step(step_) {}
};

}  // namespace solkin

#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace pdmp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Simulation-time failures (integrator blow-up, runaway intensity, ...).
struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A thinning envelope was caught below the actual rate. Never downgraded to a
// clipped acceptance: a broken envelope biases the law of the event time.
struct EnvelopeViolation : SimulationError {
    using SimulationError::SimulationError;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool all_finite(const Vector& v) { return v.allFinite(); }

std::string format_vector(const Vector& v, int max_entries = 8);

// Throws SimulationError naming `what` if any entry is NaN/Inf.
void require_finite(const Vector& v, const std::string& what);

}  // namespace pdmp

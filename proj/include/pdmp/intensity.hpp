#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "pdmp/flow.hpp"
#include "pdmp/rng.hpp"
#include "pdmp/types.hpp"

namespace pdmp {

enum class EnvelopeKind { constant_rate, linear_hazard_closed_form, generic_thinning };

// State-dependent jump rate lambda(z) >= 0 together with the machinery needed
// to sample the first event of the inhomogeneous Poisson clock along a flow:
//   P(W >= t) = exp(-int_0^t lambda(phi_s(z)) ds).
//
// constant_rate             exponential inversion
// linear_hazard_closed_form lambda(phi_s(z)) = (a + b s)_+ inverted exactly
// generic_thinning          dominate-and-accept with chained lookahead windows
struct IntensityFunction {
    EnvelopeKind kind{EnvelopeKind::constant_rate};
    std::function<double(const Vector&)> rate;  // lambda(z)
    double constant_value{0.0};
    // (a, b) such that lambda(phi_s(z)) = max(a + b s, 0) for s >= 0.
    std::function<std::pair<double, double>(const Vector&)> linear_coefficients;
    // lambda_bar(z, tau) >= sup_{0<=s<=tau} lambda(phi_s(z)).
    std::function<double(const Vector&, double)> envelope;
    double lookahead{1.0};

    static IntensityFunction constant(double value);
    static IntensityFunction linear_hazard(
        std::function<double(const Vector&)> rate,
        std::function<std::pair<double, double>(const Vector&)> coefficients);
    static IntensityFunction thinned(std::function<double(const Vector&)> rate,
                                     std::function<double(const Vector&, double)> envelope,
                                     double lookahead = 1.0);

    // Kind-aware bound on the rate over the lookahead window [0, tau].
    double envelope_bound(const Vector& z, double tau) const;
};

// First time W with int_0^W (a + b s)_+ ds = target, or +inf if the cumulative
// hazard never reaches the target.
double invert_linear_hazard(double a, double b, double target);

// Sample from mu_z truncated to (0, horizon]; nullopt = no event before the
// horizon. Throws EnvelopeViolation if thinning catches lambda above the
// envelope.
std::optional<double> sample_event_time(const IntensityFunction& intensity, const Flow& flow,
                                        const Vector& z, double horizon, Rng& rng);

}  // namespace pdmp

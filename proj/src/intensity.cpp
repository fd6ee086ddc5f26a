#include "pdmp/intensity.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace pdmp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEnvelopeSlack = 1e-12;  // relative slack before declaring a violation

[[noreturn]] void violation(const Vector& z, double s, double rate, double bound) {
    std::ostringstream msg;
    msg << "thinning envelope violated: rate " << rate << " exceeds envelope " << bound
        << " at s=" << s << " along the flow from z=" << format_vector(z);
    throw EnvelopeViolation(msg.str());
}
}  // namespace

IntensityFunction IntensityFunction::constant(double value) {
    if (!(value >= 0.0)) throw SimulationError("constant rate must be >= 0");
    IntensityFunction f;
    f.kind = EnvelopeKind::constant_rate;
    f.constant_value = value;
    f.rate = [value](const Vector&) { return value; };
    return f;
}

IntensityFunction IntensityFunction::linear_hazard(
    std::function<double(const Vector&)> rate,
    std::function<std::pair<double, double>(const Vector&)> coefficients) {
    IntensityFunction f;
    f.kind = EnvelopeKind::linear_hazard_closed_form;
    f.rate = std::move(rate);
    f.linear_coefficients = std::move(coefficients);
    return f;
}

IntensityFunction IntensityFunction::thinned(std::function<double(const Vector&)> rate,
                                             std::function<double(const Vector&, double)> envelope,
                                             double lookahead) {
    if (!(lookahead > 0.0)) throw SimulationError("thinning lookahead must be > 0");
    IntensityFunction f;
    f.kind = EnvelopeKind::generic_thinning;
    f.rate = std::move(rate);
    f.envelope = std::move(envelope);
    f.lookahead = lookahead;
    return f;
}

double IntensityFunction::envelope_bound(const Vector& z, double tau) const {
    switch (kind) {
        case EnvelopeKind::constant_rate:
            return constant_value;
        case EnvelopeKind::linear_hazard_closed_form: {
            const auto [a, b] = linear_coefficients(z);
            return std::max(0.0, std::max(a, a + b * tau));
        }
        case EnvelopeKind::generic_thinning:
            return std::max(0.0, envelope(z, tau));
    }
    return 0.0;
}

double invert_linear_hazard(double a, double b, double target) {
    if (!(target >= 0.0)) throw SimulationError("hazard target must be >= 0");
    if (target == 0.0) return 0.0;
    if (b == 0.0) {
        if (a <= 0.0) return kInf;
        return target / a;
    }
    if (b > 0.0) {
        if (a < 0.0) {
            // rate is zero until s0 = -a/b, then grows from 0 with slope b.
            return -a / b + std::sqrt(2.0 * target / b);
        }
        return (-a + std::sqrt(a * a + 2.0 * b * target)) / b;
    }
    // b < 0: the rate decays; total available hazard is a^2 / (2|b|).
    if (a <= 0.0) return kInf;
    const double disc = a * a + 2.0 * b * target;
    if (disc <= 0.0) return kInf;
    return (-a + std::sqrt(disc)) / b;
}

namespace {

std::optional<double> sample_by_thinning(const IntensityFunction& intensity, const Flow& flow,
                                         const Vector& z, double horizon, Rng& rng) {
    double elapsed = 0.0;
    Vector window_start = z;
    long proposals = 0;
    while (elapsed < horizon) {
        const double tau = std::min(intensity.lookahead, horizon - elapsed);
        const double bound = intensity.envelope(window_start, tau);
        if (!std::isfinite(bound)) violation(window_start, elapsed, kInf, bound);
        if (bound <= 0.0) {
            // Window declared silent; spot-check the endpoints.
            const double r0 = intensity.rate(window_start);
            const double r1 = intensity.rate(evaluate_flow(flow, window_start, tau));
            if (r0 > kEnvelopeSlack || r1 > kEnvelopeSlack)
                violation(window_start, elapsed, std::max(r0, r1), bound);
        } else {
            double local = rng.exponential() / bound;
            while (local < tau) {
                const Vector candidate = evaluate_flow(flow, window_start, local);
                const double r = intensity.rate(candidate);
                if (r > bound * (1.0 + kEnvelopeSlack))
                    violation(window_start, elapsed + local, r, bound);
                if (++proposals > 100'000'000)
                    throw SimulationError("thinning exceeded 1e8 proposals; envelope too loose");
                if (rng.uniform() * bound < r) return elapsed + local;
                local += rng.exponential() / bound;
            }
        }
        elapsed += tau;
        if (elapsed >= horizon) break;
        window_start = evaluate_flow(flow, window_start, tau);
    }
    return std::nullopt;
}

}  // namespace

std::optional<double> sample_event_time(const IntensityFunction& intensity, const Flow& flow,
                                        const Vector& z, double horizon, Rng& rng) {
    if (!(horizon > 0.0)) throw SimulationError("event-time horizon must be > 0");
    switch (intensity.kind) {
        case EnvelopeKind::constant_rate: {
            if (intensity.constant_value <= 0.0) return std::nullopt;
            const double w = rng.exponential() / intensity.constant_value;
            if (w <= horizon) return w;
            return std::nullopt;
        }
        case EnvelopeKind::linear_hazard_closed_form: {
            const auto [a, b] = intensity.linear_coefficients(z);
            const double w = invert_linear_hazard(a, b, rng.exponential());
            if (w <= horizon) return w;
            return std::nullopt;
        }
        case EnvelopeKind::generic_thinning:
            return sample_by_thinning(intensity, flow, z, horizon, rng);
    }
    return std::nullopt;
}

}  // namespace pdmp

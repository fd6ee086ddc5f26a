#include "pdmp/process.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pdmp {

EventSkeleton simulate_skeleton(const PdmpSpec& spec, const Vector& z0, double horizon, Rng& rng,
                                std::uint64_t max_events) {
    if (!(horizon > 0.0)) throw SimulationError("simulation horizon must be > 0");
    if (spec.clocks.empty()) throw SimulationError("PdmpSpec needs at least one clock");
    require_finite(z0, "initial state");

    EventSkeleton skeleton;
    skeleton.initial_state = z0;
    skeleton.horizon = horizon;

    Vector state = z0;
    double now = 0.0;
    while (true) {
        const double remaining = horizon - now;
        if (!(remaining > 0.0)) break;

        // Competing clocks: earliest candidate fires, lowest index wins ties.
        int winner = -1;
        double gap = 0.0;
        for (int c = 0; c < static_cast<int>(spec.clocks.size()); ++c) {
            const auto candidate =
                sample_event_time(spec.clocks[c].intensity, spec.flow, state, remaining, rng);
            if (candidate && (winner < 0 || *candidate < gap)) {
                winner = c;
                gap = *candidate;
            }
        }
        if (winner < 0) break;  // every clock stays silent until the horizon

        const Vector pre = evaluate_flow(spec.flow, state, gap);
        auto [post, xi] = apply_jump(spec.clocks[winner].kernel, pre, rng);
        now += gap;
        skeleton.events.push_back({now, pre, std::move(post), winner, std::move(xi)});
        state = skeleton.events.back().post;

        if (skeleton.events.size() > max_events) {
            std::ostringstream msg;
            msg << "event count exceeded " << max_events << " before horizon " << horizon
                << " (reached t=" << now << "); runaway intensity?";
            throw SimulationError(msg.str());
        }
    }
    return skeleton;
}

Vector evaluate_trajectory(const EventSkeleton& skeleton, const PdmpSpec& spec, double t) {
    if (!(t >= 0.0) || t > skeleton.horizon)
        throw std::out_of_range("trajectory time " + std::to_string(t) + " outside [0, " +
                                std::to_string(skeleton.horizon) + "]");
    // Last event with time <= t; right-continuity picks its post-jump state.
    const auto it = std::upper_bound(
        skeleton.events.begin(), skeleton.events.end(), t,
        [](double value, const Event& e) { return value < e.time; });
    if (it == skeleton.events.begin()) return evaluate_flow(spec.flow, skeleton.initial_state, t);
    const Event& last = *(it - 1);
    return evaluate_flow(spec.flow, last.post, t - last.time);
}

Vector compose_frozen(const PdmpSpec& spec, const EventSkeleton& skeleton, const Vector& z) {
    Vector state = z;
    double prev = 0.0;
    for (const Event& e : skeleton.events) {
        state = evaluate_flow(spec.flow, state, e.time - prev);
        state = spec.clocks[e.clock].kernel.apply(state, e.noise);
        prev = e.time;
    }
    return evaluate_flow(spec.flow, state, skeleton.horizon - prev);
}

int find_inconsistent_event(const EventSkeleton& skeleton, const PdmpSpec& spec, double tol) {
    Vector state = skeleton.initial_state;
    double prev = 0.0;
    for (int k = 0; k < static_cast<int>(skeleton.events.size()); ++k) {
        const Event& e = skeleton.events[k];
        if (!(e.time > prev) || e.time > skeleton.horizon) return k;
        const Vector expected = evaluate_flow(spec.flow, state, e.time - prev);
        if ((expected - e.pre).norm() > tol * (1.0 + expected.norm())) return k;
        state = e.post;
        prev = e.time;
    }
    return -1;
}

}  // namespace pdmp

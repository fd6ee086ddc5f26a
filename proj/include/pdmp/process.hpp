#pragma once

#include <cstdint>
#include <vector>

#include "pdmp/intensity.hpp"
#include "pdmp/kernel.hpp"

namespace pdmp {

// One jump mechanism: its clock and the kernel fired when the clock rings.
struct Clock {
    IntensityFunction intensity;
    JumpKernel kernel;
};

// Full process description: deterministic flow plus competing clocks. With
// several clocks the minimum candidate time fires, which realizes the
// superposition with total rate sum lambda_i and proportional kernel choice.
struct PdmpSpec {
    Flow flow;
    std::vector<Clock> clocks;
    int dimension{0};
};

struct Event {
    double time;   // T_k, strictly increasing in (0, horizon]
    Vector pre;    // state just before the jump
    Vector post;   // state just after the jump
    int clock;     // which mechanism fired
    Vector noise;  // xi_k as drawn (empty for deterministic kernels)
};

// The complete, replayable record of one trajectory.
struct EventSkeleton {
    Vector initial_state;
    double horizon{0.0};
    std::vector<Event> events;
};

// The recursion T_k = W(Z_{T_{k-1}}, U_k) + T_{k-1}: per clock a candidate
// time is drawn from the current state; the earliest fires (ties: lowest
// clock index) and its kernel is applied. Replaying with the same seed gives
// a bit-identical skeleton. Throws SimulationError when the event count
// exceeds `max_events` (runaway intensity guard).
EventSkeleton simulate_skeleton(const PdmpSpec& spec, const Vector& z0, double horizon, Rng& rng,
                                std::uint64_t max_events = 100'000'000);

// Z_t reconstructed from the skeleton: flow from the last post-jump state at
// or before t (right-continuous at event times). Requires 0 <= t <= horizon.
Vector evaluate_trajectory(const EventSkeleton& skeleton, const PdmpSpec& spec, double t);

// The composed map phi_{t_k} o R^{xi_k} o ... o R^{xi_1} o phi_{t_0} with the
// skeleton's gaps and noise held fixed, applied to an arbitrary start z.
Vector compose_frozen(const PdmpSpec& spec, const EventSkeleton& skeleton, const Vector& z);

// Checks the replay-consistency invariant: pre_k = phi_gap(post_{k-1}) within
// `tol` (relative to 1 + state norm). Returns the index of the first
// inconsistent event, or -1 if the skeleton is consistent.
int find_inconsistent_event(const EventSkeleton& skeleton, const PdmpSpec& spec, double tol);

}  // namespace pdmp

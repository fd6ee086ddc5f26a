#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pdmp/samplers.hpp"
#include "pdmp/skeleton_io.hpp"

using namespace pdmp;

namespace {

PdmpSpec constant_rate_spec(double rate) {
    PdmpSpec spec;
    spec.dimension = 2;
    spec.flow = Flow::linear_transport(2);
    spec.clocks.push_back({IntensityFunction::constant(rate), pure_reflection_kernel()});
    return spec;
}

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

bool skeletons_equal(const EventSkeleton& a, const EventSkeleton& b) {
    if (a.events.size() != b.events.size()) return false;
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        const Event &x = a.events[i], &y = b.events[i];
        if (x.time != y.time || x.clock != y.clock) return false;
        if (x.pre != y.pre || x.post != y.post || x.noise != y.noise) return false;
    }
    return a.initial_state == b.initial_state && a.horizon == b.horizon;
}

}  // namespace

TEST_CASE("zero intensity yields an empty skeleton") {
    const PdmpSpec spec = constant_rate_spec(0.0);
    Rng rng(1);
    const EventSkeleton skeleton = simulate_skeleton(spec, vec2(0.5, -0.5), 10.0, rng);
    CHECK(skeleton.events.empty());
    CHECK(skeleton.horizon == 10.0);
}

TEST_CASE("replay with the same seed is bit-identical") {
    const PdmpSpec spec = constant_rate_spec(1.5);
    Rng a(42), b(42);
    const EventSkeleton first = simulate_skeleton(spec, vec2(0.0, 1.0), 20.0, a);
    const EventSkeleton second = simulate_skeleton(spec, vec2(0.0, 1.0), 20.0, b);
    REQUIRE(!first.events.empty());
    CHECK(skeletons_equal(first, second));
}

TEST_CASE("constant-rate event count matches the Poisson law") {
    // rate 1, horizon 10: mean count 10; 1e4 replications put the sample
    // mean within [9.7, 10.3] with large margin (SE ~ 0.032).
    const PdmpSpec spec = constant_rate_spec(1.0);
    Rng rng(7);
    const int reps = 10000;
    double total = 0.0;
    for (int i = 0; i < reps; ++i) {
        Rng chain = Rng::derive(99, static_cast<std::uint64_t>(i));
        total += static_cast<double>(simulate_skeleton(spec, vec2(0.0, 1.0), 10.0, chain)
                                         .events.size());
    }
    const double mean = total / reps;
    CHECK(mean > 9.7);
    CHECK(mean < 10.3);
}

TEST_CASE("bps bounces fire only against the gradient") {
    // U(q) = ||q||^2/2; starting with <q, p> < 0 the bounce hazard
    // (<q + t p, p>)_+ is zero until the inner product turns positive.
    const Potential target = gaussian_potential(Vector::Zero(2), Matrix::Identity(2, 2));
    SamplerConfig config;
    config.target = target;
    config.variant = SamplerVariant::bps;
    config.alpha = 1.0;
    config.lambda_ref = 0.0;  // bounces only
    const PdmpSpec spec = build_bps(config);

    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        Vector z(4);
        z << 1.0, 0.5, -0.8, -0.6;  // <q,p> = -1.1 < 0
        const EventSkeleton skeleton = simulate_skeleton(spec, z, 30.0, rng);
        REQUIRE(!skeleton.events.empty());
        const Event& first = skeleton.events.front();
        CHECK(first.time > 0.0);
        const Vector q = first.pre.head(2), p = first.pre.tail(2);
        CHECK(q.dot(p) >= 0.0);
    }
}

TEST_CASE("trajectory evaluation honours right-continuity") {
    const PdmpSpec spec = constant_rate_spec(1.0);
    Rng rng(3);
    const Vector z0 = vec2(0.0, 1.0);
    const EventSkeleton skeleton = simulate_skeleton(spec, z0, 15.0, rng);
    REQUIRE(!skeleton.events.empty());

    CHECK(evaluate_trajectory(skeleton, spec, 0.0).isApprox(z0));
    const Event& e = skeleton.events.front();
    CHECK(evaluate_trajectory(skeleton, spec, e.time).isApprox(e.post));
    CHECK_THROWS_AS(evaluate_trajectory(skeleton, spec, -0.1), std::out_of_range);
    CHECK_THROWS_AS(evaluate_trajectory(skeleton, spec, 15.1), std::out_of_range);
}

TEST_CASE("zero-event trajectory equals the flow") {
    const PdmpSpec spec = constant_rate_spec(0.0);
    Rng rng(3);
    const EventSkeleton skeleton = simulate_skeleton(spec, vec2(0.0, 1.0), 10.0, rng);
    const Vector at5 = evaluate_trajectory(skeleton, spec, 5.0);
    CHECK(at5.isApprox(evaluate_flow(spec.flow, vec2(0.0, 1.0), 5.0)));
    CHECK(at5[0] == doctest::Approx(5.0));
}

TEST_CASE("event times are strictly increasing and replay-consistent") {
    const PdmpSpec spec = constant_rate_spec(2.0);
    Rng rng(5);
    const EventSkeleton skeleton = simulate_skeleton(spec, vec2(0.3, -1.0), 25.0, rng);
    double prev = 0.0;
    for (const Event& e : skeleton.events) {
        CHECK(e.time > prev);
        CHECK(e.time <= skeleton.horizon);
        prev = e.time;
    }
    CHECK(find_inconsistent_event(skeleton, spec, 1e-9) == -1);
}

TEST_CASE("runaway intensity trips the event-count guard") {
    const PdmpSpec spec = constant_rate_spec(1000.0);
    Rng rng(5);
    CHECK_THROWS_AS(simulate_skeleton(spec, vec2(0.0, 1.0), 100.0, rng, 1000),
                    SimulationError);
}

TEST_CASE("compose_frozen reproduces the recorded endpoint") {
    const Potential target = gaussian_potential(Vector::Zero(2), Matrix::Identity(2, 2));
    SamplerConfig config;
    config.target = target;
    config.variant = SamplerVariant::zigzag;
    const PdmpSpec spec = build_zigzag(config);
    Rng rng(21);
    Vector z0(4);
    z0 << 0.2, -0.4, 1.0, -0.7;
    const EventSkeleton skeleton = simulate_skeleton(spec, z0, 5.0, rng);
    REQUIRE(!skeleton.events.empty());
    const Vector end = evaluate_trajectory(skeleton, spec, skeleton.horizon);
    CHECK((compose_frozen(spec, skeleton, z0) - end).norm() < 1e-9);
}

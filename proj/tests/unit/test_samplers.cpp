#include <doctest.h>

#include <cmath>

#include "pdmp/samplers.hpp"

using namespace pdmp;

namespace {

Potential standard_gaussian(int n) {
    return gaussian_potential(Vector::Zero(n), Matrix::Identity(n, n));
}

SamplerConfig config_for(SamplerVariant variant, int n, double lambda_ref = 1.0,
                         double alpha = 1.0) {
    SamplerConfig config;
    config.target = standard_gaussian(n);
    config.variant = variant;
    config.lambda_ref = lambda_ref;
    config.alpha = alpha;
    return config;
}

double power_norm(const Matrix& m) {
    Vector v = Vector::Ones(m.cols()).normalized();
    double sigma = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Vector w = m.transpose() * (m * v);
        sigma = std::sqrt(w.norm());
        v = w.normalized();
    }
    return sigma;
}

}  // namespace

TEST_CASE("rhmc on the standard gaussian uses the exact rotation flow") {
    const PdmpSpec spec = build_rhmc(config_for(SamplerVariant::rhmc, 2, 1.0, 0.5));
    CHECK(spec.flow.kind == FlowKind::harmonic);
    Rng rng(1);
    Vector z(4);
    z << 0.7, -0.3, 0.2, 1.1;
    const double t = 1.3;
    const Vector closed = evaluate_flow(spec.flow, z, t);
    // Rotation formula (q cos t + p sin t, p cos t - q sin t).
    Vector expected(4);
    expected.head(2) = std::cos(t) * z.head(2) + std::sin(t) * z.tail(2);
    expected.tail(2) = std::cos(t) * z.tail(2) - std::sin(t) * z.head(2);
    CHECK((closed - expected).norm() < 1e-14);

    // Numeric integration of the Hamiltonian field agrees.
    const Flow numeric = Flow::numeric(spec.flow.vector_field, 1.0);
    CHECK((evaluate_flow(numeric, z, t) - expected).norm() < 1e-8);
}

TEST_CASE("rhmc lipschitz constant for the standard gaussian is 1") {
    const PdmpSpec spec = build_rhmc(config_for(SamplerVariant::rhmc, 3));
    CHECK(spec.flow.lipschitz_constant == doctest::Approx(1.0));
    // Dg = [[0, I], [-I, 0]] has operator norm 1; verify by power iteration.
    const Matrix dg = spec.flow.vector_field_jacobian(Vector::Zero(6));
    CHECK(power_norm(dg) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("rhmc alpha=0 refreshes the velocity completely") {
    const PdmpSpec spec = build_rhmc(config_for(SamplerVariant::rhmc, 2, 1.0, 0.0));
    Rng rng(3);
    Vector z(4);
    z << 1.0, 2.0, 3.0, 4.0;
    const auto [out, xi] = apply_jump(spec.clocks[0].kernel, z, rng);
    CHECK(out.head(2).isApprox(z.head(2)));
    CHECK(out.tail(2).isApprox(xi));
}

TEST_CASE("zigzag rates are the canonical positive parts") {
    const PdmpSpec spec = build_zigzag(config_for(SamplerVariant::zigzag, 1));
    REQUIRE(spec.clocks.size() == 1);
    Vector z(2);
    z << 2.0, 1.0;  // q=2, p=1: rate (1*2)_+ = 2
    CHECK(spec.clocks[0].intensity.rate(z) == doctest::Approx(2.0));
    z << 2.0, -1.0;  // p dU <= 0: rate 0
    CHECK(spec.clocks[0].intensity.rate(z) == 0.0);
}

TEST_CASE("zigzag flip kernels preserve the state norm exactly") {
    const PdmpSpec spec = build_zigzag(config_for(SamplerVariant::zigzag, 3));
    Rng rng(5);
    for (const Clock& clock : spec.clocks) {
        CHECK(clock.kernel.is_isometric);
        for (int i = 0; i < 10000; ++i) {
            const Vector z = rng.normal_vector(6) * 2.0;
            const auto [out, xi] = apply_jump(clock.kernel, z, rng);
            CHECK(std::abs(out.norm() - z.norm()) <= 1e-12 * (1.0 + z.norm()));
        }
    }
}

TEST_CASE("bps bounce rate and kernel at the worked point") {
    const PdmpSpec spec = build_bps(config_for(SamplerVariant::bps, 2, 0.0, 1.0));
    REQUIRE(spec.clocks.size() == 1);  // alpha=1, lambda_ref=0: bounces only
    Vector z(4);
    z << 1.0, 0.0, 1.0, 1.0;
    CHECK(spec.clocks[0].intensity.rate(z) == doctest::Approx(1.0));
    Rng rng(1);
    const auto [out, xi] = apply_jump(spec.clocks[0].kernel, z, rng);
    CHECK(out[2] == doctest::Approx(-1.0));
    CHECK(out[3] == doctest::Approx(1.0));
    CHECK(out.tail(2).norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("bps with alpha=1 has only isometric kernels") {
    for (double lambda_ref : {0.0, 1.0}) {
        const PdmpSpec spec = build_bps(config_for(SamplerVariant::bps, 2, lambda_ref, 1.0));
        for (const Clock& clock : spec.clocks) CHECK(clock.kernel.is_isometric);
    }
}

TEST_CASE("bps configuration rules") {
    CHECK_THROWS_AS(build_bps(config_for(SamplerVariant::bps, 2, 0.0, 0.5)), ConfigError);
    SamplerConfig bad = config_for(SamplerVariant::bps, 2);
    bad.alpha = 1.5;
    CHECK_THROWS_AS(build_bps(bad), ConfigError);
    SamplerConfig no_grad = config_for(SamplerVariant::bps, 2);
    no_grad.target.gradient = nullptr;
    CHECK_THROWS_AS(build_bps(no_grad), ConfigError);
    CHECK_THROWS_AS(build_rhmc(config_for(SamplerVariant::rhmc, 2, 0.0)), ConfigError);
}

TEST_CASE("pure reflection involution, rate, and isometry") {
    const PdmpSpec spec =
        build_pure_reflection(config_for(SamplerVariant::pure_reflection, 1));
    REQUIRE(spec.clocks.size() == 1);
    Vector z(2);
    z << 1.0, 1.0;
    CHECK(spec.clocks[0].intensity.rate(z) == doctest::Approx(1.0));
    const Vector once = spec.clocks[0].kernel.apply(z, Vector(0));
    CHECK(spec.clocks[0].kernel.apply(once, Vector(0)).isApprox(z));
    CHECK(once.norm() == z.norm());
    CHECK(spec.clocks[0].kernel.is_isometric);
}

TEST_CASE("lambda_zero spec never jumps") {
    const PdmpSpec spec = build_lambda_zero(config_for(SamplerVariant::lambda_zero, 2));
    Rng rng(9);
    Vector z(4);
    z << 0.0, 0.0, 1.0, -1.0;
    CHECK(simulate_skeleton(spec, z, 10.0, rng).events.empty());
}

TEST_CASE("mixture-target zigzag uses thinning and simulates cleanly") {
    Vector m1(2), m2(2);
    m1 << -1.5, 0.0;
    m2 << 1.5, 0.0;
    SamplerConfig config;
    config.target = gaussian_mixture_potential({0.5, 0.5}, {m1, m2}, Matrix::Identity(2, 2));
    config.variant = SamplerVariant::zigzag;
    const PdmpSpec spec = build_zigzag(config);
    CHECK(spec.clocks[0].intensity.kind == EnvelopeKind::generic_thinning);
    Rng rng(13);
    Vector z(4);
    z << 0.1, -0.2, 1.0, 0.5;
    const EventSkeleton skeleton = simulate_skeleton(spec, z, 50.0, rng);
    CHECK(!skeleton.events.empty());
    CHECK(find_inconsistent_event(skeleton, spec, 1e-9) == -1);
}

#include <doctest.h>

#include <cmath>

#include "pdmp/targets.hpp"

using namespace pdmp;

namespace {

Vector fd_gradient(const Potential& u, const Vector& q) {
    const double h = 1e-6 * (1.0 + q.norm());
    Vector g(q.size());
    Vector qp = q, qm = q;
    for (int i = 0; i < q.size(); ++i) {
        qp[i] += h;
        qm[i] -= h;
        g[i] = (u.value(qp) - u.value(qm)) / (2.0 * h);
        qp[i] = q[i];
        qm[i] = q[i];
    }
    return g;
}

double power_iteration_largest_eigenvalue(const Matrix& m) {
    Vector v = Vector::Ones(m.rows()).normalized();
    double lambda = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Vector next = m * v;
        lambda = next.norm();
        v = next / lambda;
    }
    return lambda;
}

}  // namespace

TEST_CASE("standard gaussian potential values and gradients") {
    const Potential u = gaussian_potential(Vector::Zero(2), Matrix::Identity(2, 2));
    Vector q(2);
    q << 3.0, 4.0;
    CHECK(u.value(q) == doctest::Approx(12.5).epsilon(1e-14));
    CHECK(u.gradient(q).isApprox(q));
    CHECK(u.is_standard_gaussian());
}

TEST_CASE("diagonal covariance gaussian") {
    Matrix cov = Matrix::Zero(2, 2);
    cov(0, 0) = 4.0;
    cov(1, 1) = 1.0;
    const Potential u = gaussian_potential(Vector::Zero(2), cov);
    Vector q(2);
    q << 2.0, 0.0;
    CHECK(u.value(q) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(u.gradient(q)[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(u.gradient(q)[1] == doctest::Approx(0.0));
    // L_U is the top eigenvalue of diag(0.25, 1); cross-check by power iteration.
    CHECK(u.gradient_lipschitz == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(power_iteration_largest_eigenvalue(u.precision) ==
          doctest::Approx(u.gradient_lipschitz).epsilon(1e-9));
}

TEST_CASE("non-SPD covariance is rejected") {
    Matrix bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3, -1
    CHECK_THROWS_AS(gaussian_potential(Vector::Zero(2), bad), ConfigError);
}

TEST_CASE("single-component mixture reduces to the gaussian potential") {
    Matrix cov(2, 2);
    cov << 1.5, 0.2, 0.2, 0.8;
    Vector mean(2);
    mean << 0.4, -1.0;
    const Potential gauss = gaussian_potential(mean, cov);
    const Potential mix = gaussian_mixture_potential({1.0}, {mean}, cov);
    Rng rng(2);
    for (int i = 0; i < 50; ++i) {
        const Vector q = rng.normal_vector(2) * 2.0;
        // Values agree up to the constant -log of the dropped normalizer.
        const double shift = mix.value(Vector::Zero(2)) - gauss.value(Vector::Zero(2));
        CHECK(mix.value(q) - gauss.value(q) == doctest::Approx(shift).epsilon(1e-10));
        CHECK((mix.gradient(q) - gauss.gradient(q)).norm() < 1e-12);
    }
}

TEST_CASE("symmetric mixture has no gradient along the symmetry axis at the midpoint") {
    Vector m1(2), m2(2);
    m1 << -2.0, 0.0;
    m2 << 2.0, 0.0;
    const Potential mix = gaussian_mixture_potential({0.5, 0.5}, {m1, m2},
                                                     Matrix::Identity(2, 2));
    Vector mid(2);
    mid << 0.0, 0.7;
    CHECK(std::abs(mix.gradient(mid)[0]) < 1e-14);
}

TEST_CASE("mixture gradient matches finite differences") {
    Vector m1(3), m2(3), m3(3);
    m1 << 1.0, 0.0, -1.0;
    m2 << -1.5, 0.5, 0.0;
    m3 << 0.0, 2.0, 1.0;
    Matrix cov = Matrix::Identity(3, 3) * 0.7;
    const Potential mix =
        gaussian_mixture_potential({0.3, 0.45, 0.25}, {m1, m2, m3}, cov);
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const Vector q = rng.normal_vector(3) * 2.0;
        const Vector g = mix.gradient(q);
        CHECK((g - fd_gradient(mix, q)).norm() <= 1e-5 * (1.0 + g.norm()));
    }
}

TEST_CASE("mixture hessian matches finite differences of the gradient") {
    Vector m1(2), m2(2);
    m1 << 1.0, -0.5;
    m2 << -1.0, 0.5;
    const Potential mix =
        gaussian_mixture_potential({0.6, 0.4}, {m1, m2}, Matrix::Identity(2, 2));
    Rng rng(6);
    for (int i = 0; i < 20; ++i) {
        const Vector q = rng.normal_vector(2);
        const Matrix h = mix.hessian(q);
        const double step = 1e-6;
        Matrix fd(2, 2);
        for (int c = 0; c < 2; ++c) {
            Vector qp = q, qm = q;
            qp[c] += step;
            qm[c] -= step;
            fd.col(c) = (mix.gradient(qp) - mix.gradient(qm)) / (2.0 * step);
        }
        CHECK((h - fd).norm() <= 1e-5 * (1.0 + h.norm()));
    }
}

TEST_CASE("declared Lipschitz bound dominates empirical gradient quotients") {
    Vector m1(2), m2(2);
    m1 << 2.0, 0.0;
    m2 << -2.0, 1.0;
    Matrix cov(2, 2);
    cov << 1.0, 0.3, 0.3, 2.0;
    for (const Potential& u :
         {gaussian_potential(m1, cov), gaussian_mixture_potential({0.5, 0.5}, {m1, m2}, cov)}) {
        Rng rng(7);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const Vector x = rng.normal_vector(2) * 3.0;
            const Vector y = rng.normal_vector(2) * 3.0;
            const double gap = (x - y).norm();
            if (gap < 1e-8) continue;
            worst = std::max(worst, (u.gradient(x) - u.gradient(y)).norm() / gap);
        }
        CHECK(worst <= u.gradient_lipschitz * (1.0 + 1e-9));
    }
}

TEST_CASE("reference measure draws product samples") {
    const Potential u = gaussian_potential(Vector::Zero(2), Matrix::Identity(2, 2));
    const ReferenceMeasure measure{u};
    Rng rng(11);
    const std::size_t n = 100000;
    const auto draws = sample_reference(measure, n, rng);
    REQUIRE(draws.size() == n);

    Vector mean = Vector::Zero(4);
    for (const Vector& z : draws) mean += z;
    mean /= static_cast<double>(n);
    const double se = 4.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < 4; ++i) CHECK(std::abs(mean[i]) < se);

    // q and p blocks are empirically independent: cross-covariance near zero.
    Matrix cross = Matrix::Zero(2, 2);
    for (const Vector& z : draws)
        cross += (z.head(2) - mean.head(2)) * (z.tail(2) - mean.tail(2)).transpose();
    cross /= static_cast<double>(n);
    CHECK(cross.cwiseAbs().maxCoeff() < se);
}

TEST_CASE("empty reference sample request returns an empty list") {
    const Potential u = gaussian_potential(Vector::Zero(2), Matrix::Identity(2, 2));
    Rng rng(1);
    CHECK(sample_reference(ReferenceMeasure{u}, 0, rng).empty());
}

TEST_CASE("missing exact sampler is a capability failure") {
    Potential u = gaussian_potential(Vector::Zero(2), Matrix::Identity(2, 2));
    u.exact_sampler = nullptr;
    const ReferenceMeasure measure{u};
    Rng rng(1);
    CHECK_FALSE(measure.has_sampler());
    CHECK_THROWS_AS(measure.sample(rng), SimulationError);
}

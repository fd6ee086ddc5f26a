#include <doctest.h>

#include <cmath>

#include "pdmp/rng.hpp"
#include "pdmp/test_function.hpp"

using namespace pdmp;

namespace {

Vector fd_gradient(const TestFunction& f, const Vector& z) {
    const double h = 1e-7 * (1.0 + z.norm());
    Vector g(z.size());
    Vector zp = z, zm = z;
    for (int i = 0; i < z.size(); ++i) {
        zp[i] += h;
        zm[i] -= h;
        g[i] = (f.value(zp) - f.value(zm)) / (2.0 * h);
        zp[i] = z[i];
        zm[i] = z[i];
    }
    return g;
}

}  // namespace

TEST_CASE("bump is 1 on the plateau and exactly 0 outside the support") {
    Vector center(2);
    center << 0.5, -0.5;
    const TestFunction f = bump_function(center, 1.0, 2.0);
    CHECK(f.value(center) == 1.0);
    CHECK(f.gradient(center).norm() == 0.0);

    Vector far(2);
    far << 4.0, -0.5;  // distance 3.5 > outer radius
    CHECK(f.value(far) == 0.0);
    CHECK(f.gradient(far).norm() == 0.0);
    CHECK(f.support_radius == doctest::Approx(center.norm() + 2.0));
}

TEST_CASE("bump gradient matches finite differences inside the support") {
    Rng rng(3);
    Vector center(3);
    center << 0.2, 0.0, -0.1;
    const TestFunction f = bump_function(center, 0.8, 2.2);
    for (int i = 0; i < 200; ++i) {
        const Vector z = center + rng.normal_vector(3);
        const Vector g = f.gradient(z);
        CHECK((g - fd_gradient(f, z)).norm() <= 1e-5 * (1.0 + g.norm()));
    }
}

TEST_CASE("smooth step is monotone with exact endpoints") {
    CHECK(smooth_step(-0.5) == 0.0);
    CHECK(smooth_step(0.0) == 0.0);
    CHECK(smooth_step(1.0) == 1.0);
    CHECK(smooth_step(1.5) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5).epsilon(1e-12));
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double v = smooth_step(i / 100.0);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("cutoff is 1 on B(0,k), 0 outside B(0,2k), radial, slope <= 1/k") {
    const double k = 3.0;
    const CutoffFunction eta{k};
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
        Vector z = rng.normal_vector(4);
        z *= (8.0 * rng.uniform()) / z.norm();  // radius uniform in (0, 8)
        const double r = z.norm();
        const double v = eta.value(z);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        if (r <= k) CHECK(v == 1.0);
        if (r >= 2.0 * k) CHECK(v == 0.0);
        CHECK(eta.gradient(z).norm() <= 1.0 / k + 1e-12);
        // radial: value depends only on the norm
        Vector other = rng.normal_vector(4);
        other *= r / other.norm();
        CHECK(eta.value(other) == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("cutoff_apply is exact for compactly supported f with large k") {
    Vector center = Vector::Zero(2);
    const TestFunction f = bump_function(center, 1.0, 2.0);
    const TestFunction fk = cutoff_apply(f, 4.0);  // k >= support radius
    Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        const Vector z = rng.normal_vector(2) * 2.0;
        CHECK(fk.value(z) == doctest::Approx(f.value(z)).epsilon(1e-14));
        CHECK((fk.gradient(z) - f.gradient(z)).norm() < 1e-14);
    }
}

TEST_CASE("cutoff_apply vanishes outside 2k and obeys the radial tail bound") {
    const TestFunction f = gaussian_decay();
    const double k = 2.0;
    const TestFunction fk = cutoff_apply(f, k);
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        Vector z = rng.normal_vector(3);
        z *= (2.0 * k + rng.uniform()) / z.norm();
        CHECK(fk.value(z) == 0.0);
        CHECK(fk.gradient(z).norm() == 0.0);
    }
    // sup |f_k - f| over a dense radial grid is at most sup_{||z|| >= k} f
    // = exp(-k^2/2), attained by radial monotonicity.
    double sup_gap = 0.0;
    Vector dir = Vector::Ones(3).normalized();
    for (int i = 0; i <= 4000; ++i) {
        const Vector z = (8.0 * i / 4000.0) * dir;
        sup_gap = std::max(sup_gap, std::abs(fk.value(z) - f.value(z)));
    }
    CHECK(sup_gap <= std::exp(-0.5 * k * k) * (1.0 + 1e-12));
}

TEST_CASE("coordinate product value and gradient") {
    const TestFunction f = coordinate_product(2, 0);
    Vector z(4);
    z << 1.5, 0.0, -2.0, 0.0;
    CHECK(f.value(z) == doctest::Approx(-3.0));
    const Vector g = f.gradient(z);
    CHECK(g[0] == doctest::Approx(-2.0));
    CHECK(g[2] == doctest::Approx(1.5));
}

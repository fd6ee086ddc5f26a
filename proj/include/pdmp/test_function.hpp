#pragma once

#include <functional>
#include <limits>

#include "pdmp/types.hpp"

namespace pdmp {

// Differentiable probe function with exact gradient. support_radius is the
// radius of a ball at the origin outside which f and grad f vanish exactly
// (+inf for functions without compact support).
struct TestFunction {
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;
    double support_radius{std::numeric_limits<double>::infinity()};
};

// Smooth transition built from psi(x) = exp(-1/x): 0 for u <= 0, 1 for
// u >= 1, C-infinity everywhere.
double smooth_step(double u);
double smooth_step_derivative(double u);

// Radial plateau bump: 1 on B(center, inner), 0 outside B(center, outer),
// smooth exp-profile transition in between. Exact compact support with
// closed-form gradient.
TestFunction bump_function(const Vector& center, double inner_radius, double outer_radius);

// f(z) = exp(-||z||^2 / 2): the smooth decaying stand-in used by the core
// cutoff probe.
TestFunction gaussian_decay();

TestFunction zero_function();

// Product f(q,p) = q_i p_i on a kinetic state, as a raw differentiable
// function (no compact support).
TestFunction coordinate_product(int n, int index);

// Scale-k cutoff eta_k(z) = eta(z / k): identically 1 on B(0, k), 0 outside
// B(0, 2k), radial, values in [0, 1], ||grad eta_k|| <= 1/k everywhere. The
// profile is the minimal-slope radial ramp; no differentiable profile can
// drop from 1 to 2k-support with a smaller gradient bound.
struct CutoffFunction {
    double scale{1.0};  // k >= 1

    double value(const Vector& z) const;
    Vector gradient(const Vector& z) const;
};

// f_k = eta_k f with gradient f grad eta_k + eta_k grad f; support radius 2k.
TestFunction cutoff_apply(const TestFunction& f, double k);

}  // namespace pdmp

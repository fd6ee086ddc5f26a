#pragma once

#include <functional>

#include "pdmp/types.hpp"

namespace pdmp {

// Deterministic dynamics dx/dt = g(x) between jumps.
//
// Two closed-form kinds cover the kinetic samplers (straight-line transport
// and the rotation solving the standard harmonic oscillator); everything else
// integrates with a classical fixed-step RK4 whose step is
// min(step_control, t/16), which keeps replays deterministic.
enum class FlowKind { linear_transport, harmonic, numeric };

struct Flow {
    FlowKind kind{FlowKind::numeric};
    std::function<Vector(const Vector&)> vector_field;           // g
    std::function<Matrix(const Vector&)> vector_field_jacobian;  // Dg, optional
    double lipschitz_constant{1.0};                              // L > 0
    double step_control{1.0 / 64.0};                             // max RK4 step (numeric kind)

    // phi_t(q,p) = (q + t p, p) on R^{2n}; L = 1.
    static Flow linear_transport(int state_dim);
    // phi_t(q,p) = (q cos t + p sin t, p cos t - q sin t) on R^{2n}; L = 1.
    static Flow harmonic(int state_dim);
    static Flow numeric(std::function<Vector(const Vector&)> g, double lipschitz,
                        std::function<Matrix(const Vector&)> jacobian = {},
                        double step_control = 1.0 / 64.0);
};

// phi_t(z). Exact for closed-form kinds; RK4 otherwise (local error O(h^5)).
// Throws SimulationError on non-finite results, naming t and z.
Vector evaluate_flow(const Flow& flow, const Vector& z, double t);

// Dphi_t(z) v via the variational equation d/dt (Dphi v) = Dg(phi_t) (Dphi v),
// integrated jointly with the state. Closed-form kinds use their exact
// Jacobians.
Vector flow_jacobian_action(const Flow& flow, const Vector& z, double t, const Vector& v);

// Full d x d Jacobian Dphi_t(z): the d variational columns solved jointly.
Matrix flow_jacobian(const Flow& flow, const Vector& z, double t);

// Dg at z: analytic when supplied, else central differences with step
// 1e-6 (1 + ||z||).
Matrix vector_field_jacobian(const Flow& flow, const Vector& z);

}  // namespace pdmp

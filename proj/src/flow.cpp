#include "pdmp/flow.hpp"

#include <cmath>
#include <sstream>

namespace pdmp {

namespace {

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw SimulationError("flow time must be finite and >= 0, got t=" + std::to_string(t));
}

int half_dim(const Vector& z) {
    if (z.size() % 2 != 0)
        throw SimulationError("kinetic flow needs even state dimension, got d=" +
                              std::to_string(z.size()));
    return static_cast<int>(z.size()) / 2;
}

// Number of RK4 steps for a span of length t: step h = min(step_control, t/16).
int rk4_steps(double t, double step_control) {
    const double h = std::min(step_control, t / 16.0);
    return static_cast<int>(std::ceil(t / h - 1e-12));
}

[[noreturn]] void blow_up(const char* what, double t, const Vector& z) {
    std::ostringstream msg;
    msg << what << " produced a non-finite state at t=" << t << ", z=" << format_vector(z);
    throw SimulationError(msg.str());
}

}  // namespace

std::string format_vector(const Vector& v, int max_entries) {
    std::ostringstream out;
    out << "[";
    const int n = static_cast<int>(v.size());
    for (int i = 0; i < std::min(n, max_entries); ++i) {
        if (i) out << ", ";
        out << v[i];
    }
    if (n > max_entries) out << ", ... (" << n << " entries)";
    out << "]";
    return out.str();
}

void require_finite(const Vector& v, const std::string& what) {
    if (!all_finite(v))
        throw SimulationError(what + " contains a non-finite entry: " + format_vector(v));
}

Flow Flow::linear_transport(int state_dim) {
    Flow f;
    f.kind = FlowKind::linear_transport;
    f.lipschitz_constant = 1.0;
    f.vector_field = [](const Vector& z) {
        const int n = half_dim(z);
        Vector g = Vector::Zero(z.size());
        g.head(n) = z.tail(n);
        return g;
    };
    f.vector_field_jacobian = [state_dim](const Vector&) {
        const int n = state_dim / 2;
        Matrix j = Matrix::Zero(state_dim, state_dim);
        j.topRightCorner(n, n) = Matrix::Identity(n, n);
        return j;
    };
    return f;
}

Flow Flow::harmonic(int state_dim) {
    Flow f;
    f.kind = FlowKind::harmonic;
    f.lipschitz_constant = 1.0;
    f.vector_field = [](const Vector& z) {
        const int n = half_dim(z);
        Vector g(z.size());
        g.head(n) = z.tail(n);
        g.tail(n) = -z.head(n);
        return g;
    };
    f.vector_field_jacobian = [state_dim](const Vector&) {
        const int n = state_dim / 2;
        Matrix j = Matrix::Zero(state_dim, state_dim);
        j.topRightCorner(n, n) = Matrix::Identity(n, n);
        j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
        return j;
    };
    return f;
}

Flow Flow::numeric(std::function<Vector(const Vector&)> g, double lipschitz,
                   std::function<Matrix(const Vector&)> jacobian, double step_control) {
    if (!(lipschitz > 0.0))
        throw SimulationError("numeric flow needs a Lipschitz constant L > 0");
    if (!(step_control > 0.0)) throw SimulationError("step_control must be > 0");
    Flow f;
    f.kind = FlowKind::numeric;
    f.vector_field = std::move(g);
    f.vector_field_jacobian = std::move(jacobian);
    f.lipschitz_constant = lipschitz;
    f.step_control = step_control;
    return f;
}

Matrix vector_field_jacobian(const Flow& flow, const Vector& z) {
    if (flow.vector_field_jacobian) return flow.vector_field_jacobian(z);
    const int d = static_cast<int>(z.size());
    const double h = 1e-6 * (1.0 + z.norm());
    Matrix j(d, d);
    Vector zp = z, zm = z;
    for (int i = 0; i < d; ++i) {
        zp[i] += h;
        zm[i] -= h;
        j.col(i) = (flow.vector_field(zp) - flow.vector_field(zm)) / (2.0 * h);
        zp[i] = z[i];
        zm[i] = z[i];
    }
    return j;
}

Vector evaluate_flow(const Flow& flow, const Vector& z, double t) {
    check_time(t);
    require_finite(z, "flow input state");
    if (t == 0.0) return z;

    switch (flow.kind) {
        case FlowKind::linear_transport: {
            const int n = half_dim(z);
            Vector out = z;
            out.head(n) += t * z.tail(n);
            return out;
        }
        case FlowKind::harmonic: {
            const int n = half_dim(z);
            const double c = std::cos(t), s = std::sin(t);
            Vector out(z.size());
            out.head(n) = c * z.head(n) + s * z.tail(n);
            out.tail(n) = c * z.tail(n) - s * z.head(n);
            return out;
        }
        case FlowKind::numeric: {
            const int steps = rk4_steps(t, flow.step_control);
            const double h = t / steps;
            Vector x = z;
            for (int k = 0; k < steps; ++k) {
                const Vector k1 = flow.vector_field(x);
                const Vector k2 = flow.vector_field(x + 0.5 * h * k1);
                const Vector k3 = flow.vector_field(x + 0.5 * h * k2);
                const Vector k4 = flow.vector_field(x + h * k3);
                x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            if (!all_finite(x)) blow_up("numeric flow", t, z);
            return x;
        }
    }
    throw SimulationError("unknown flow kind");
}

namespace {

// Joint RK4 on (x, V) with dV/dt = Dg(x) V; V has one column per propagated
// direction.
Matrix integrate_variational(const Flow& flow, const Vector& z, double t, Matrix v0) {
    const int steps = rk4_steps(t, flow.step_control);
    const double h = t / steps;
    Vector x = z;
    Matrix v = std::move(v0);
    for (int k = 0; k < steps; ++k) {
        const Vector k1 = flow.vector_field(x);
        const Matrix m1 = vector_field_jacobian(flow, x) * v;
        const Vector x2 = x + 0.5 * h * k1;
        const Vector k2 = flow.vector_field(x2);
        const Matrix m2 = vector_field_jacobian(flow, x2) * (v + 0.5 * h * m1);
        const Vector x3 = x + 0.5 * h * k2;
        const Vector k3 = flow.vector_field(x3);
        const Matrix m3 = vector_field_jacobian(flow, x3) * (v + 0.5 * h * m2);
        const Vector x4 = x + h * k3;
        const Vector k4 = flow.vector_field(x4);
        const Matrix m4 = vector_field_jacobian(flow, x4) * (v + h * m3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        v += (h / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
    }
    if (!all_finite(x) || !v.allFinite()) blow_up("variational integration", t, z);
    return v;
}

}  // namespace

Vector flow_jacobian_action(const Flow& flow, const Vector& z, double t, const Vector& v) {
    check_time(t);
    if (v.size() != z.size())
        throw SimulationError("jacobian action direction has wrong dimension");
    if (t == 0.0) return v;

    switch (flow.kind) {
        case FlowKind::linear_transport: {
            const int n = half_dim(z);
            Vector out = v;
            out.head(n) += t * v.tail(n);
            return out;
        }
        case FlowKind::harmonic: {
            const int n = half_dim(z);
            const double c = std::cos(t), s = std::sin(t);
            Vector out(v.size());
            out.head(n) = c * v.head(n) + s * v.tail(n);
            out.tail(n) = c * v.tail(n) - s * v.head(n);
            return out;
        }
        case FlowKind::numeric:
            return integrate_variational(flow, z, t, v);
    }
    throw SimulationError("unknown flow kind");
}

Matrix flow_jacobian(const Flow& flow, const Vector& z, double t) {
    check_time(t);
    const int d = static_cast<int>(z.size());
    if (t == 0.0) return Matrix::Identity(d, d);

    switch (flow.kind) {
        case FlowKind::linear_transport: {
            const int n = d / 2;
            Matrix j = Matrix::Identity(d, d);
            j.topRightCorner(n, n) = t * Matrix::Identity(n, n);
            return j;
        }
        case FlowKind::harmonic: {
            const int n = d / 2;
            const double c = std::cos(t), s = std::sin(t);
            Matrix j = Matrix::Zero(d, d);
            j.topLeftCorner(n, n) = c * Matrix::Identity(n, n);
            j.topRightCorner(n, n) = s * Matrix::Identity(n, n);
            j.bottomLeftCorner(n, n) = -s * Matrix::Identity(n, n);
            j.bottomRightCorner(n, n) = c * Matrix::Identity(n, n);
            return j;
        }
        case FlowKind::numeric:
            return integrate_variational(flow, z, t, Matrix::Identity(d, d));
    }
    throw SimulationError("unknown flow kind");
}

}  // namespace pdmp

#include "pdmp/kernel.hpp"

#include <cmath>

namespace pdmp {

namespace {
int half_dim(const Vector& z) {
    if (z.size() % 2 != 0)
        throw SimulationError("kinetic kernel needs even state dimension");
    return static_cast<int>(z.size()) / 2;
}
}  // namespace

Vector NoiseSpec::sample(Rng& rng) const {
    switch (kind) {
        case NoiseKind::none:
            return Vector(0);
        case NoiseKind::gaussian:
            return rng.normal_vector(size);
        case NoiseKind::uniform_index: {
            Vector xi(1);
            xi[0] = static_cast<double>(rng.uniform_index(size));
            return xi;
        }
    }
    return Vector(0);
}

Vector NoiseSpec::atom(int i) const {
    if (kind != NoiseKind::uniform_index)
        throw SimulationError("noise is not enumerable");
    Vector xi(1);
    xi[0] = static_cast<double>(i);
    return xi;
}

std::pair<Vector, Vector> apply_jump(const JumpKernel& kernel, const Vector& z, Rng& rng) {
    require_finite(z, "jump input state");
    Vector xi = kernel.noise.sample(rng);
    Vector out = kernel.apply(z, xi);
    require_finite(out, "jump output state");
    return {std::move(out), std::move(xi)};
}

Matrix kernel_jacobian(const JumpKernel& kernel, const Vector& z, const Vector& xi) {
    if (kernel.jacobian) return kernel.jacobian(z, xi);
    const int d = static_cast<int>(z.size());
    const double h = 1e-6 * (1.0 + z.norm());
    Matrix j(d, d);
    Vector zp = z, zm = z;
    for (int i = 0; i < d; ++i) {
        zp[i] += h;
        zm[i] -= h;
        j.col(i) = (kernel.apply(zp, xi) - kernel.apply(zm, xi)) / (2.0 * h);
        zp[i] = z[i];
        zm[i] = z[i];
    }
    return j;
}

JumpKernel identity_kernel() {
    JumpKernel k;
    k.apply = [](const Vector& z, const Vector&) { return z; };
    k.is_isometric = true;
    k.is_subcontractive = true;
    k.jacobian = [](const Vector& z, const Vector&) {
        return Matrix::Identity(z.size(), z.size());
    };
    return k;
}

JumpKernel pure_reflection_kernel() {
    JumpKernel k;
    k.apply = [](const Vector& z, const Vector&) {
        const int n = half_dim(z);
        Vector out = z;
        out.tail(n) = -z.tail(n);
        return out;
    };
    k.is_isometric = true;
    k.is_subcontractive = true;
    k.jacobian = [](const Vector& z, const Vector&) {
        const int n = half_dim(z);
        Vector diag = Vector::Ones(z.size());
        diag.tail(n) = -Vector::Ones(n);
        return Matrix(diag.asDiagonal());
    };
    return k;
}

JumpKernel coordinate_flip_kernel(int index) {
    JumpKernel k;
    k.apply = [index](const Vector& z, const Vector&) {
        const int n = half_dim(z);
        Vector out = z;
        out[n + index] = -z[n + index];
        return out;
    };
    k.is_isometric = true;
    k.is_subcontractive = true;
    k.jacobian = [index](const Vector& z, const Vector&) {
        const int n = half_dim(z);
        Vector diag = Vector::Ones(z.size());
        diag[n + index] = -1.0;
        return Matrix(diag.asDiagonal());
    };
    return k;
}

JumpKernel random_flip_kernel(int velocity_dim) {
    JumpKernel k;
    k.noise = {NoiseKind::uniform_index, velocity_dim};
    k.apply = [](const Vector& z, const Vector& xi) {
        const int n = half_dim(z);
        const int i = static_cast<int>(xi[0]);
        Vector out = z;
        out[n + i] = -z[n + i];
        return out;
    };
    k.is_isometric = true;
    k.is_subcontractive = true;
    k.jacobian = [](const Vector& z, const Vector& xi) {
        const int n = half_dim(z);
        Vector diag = Vector::Ones(z.size());
        diag[n + static_cast<int>(xi[0])] = -1.0;
        return Matrix(diag.asDiagonal());
    };
    return k;
}

JumpKernel autoregressive_kernel(int velocity_dim, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw SimulationError("autoregressive alpha must lie in [0, 1]");
    JumpKernel k;
    k.noise = {NoiseKind::gaussian, velocity_dim};
    const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    k.apply = [alpha, beta](const Vector& z, const Vector& xi) {
        const int n = half_dim(z);
        Vector out = z;
        out.tail(n) = alpha * z.tail(n) + beta * xi;
        return out;
    };
    // alpha = 1 degenerates to the identity on p.
    k.is_isometric = (alpha == 1.0);
    k.is_subcontractive = true;  // p-block contracts by alpha for fixed xi
    k.jacobian = [alpha](const Vector& z, const Vector&) {
        const int n = half_dim(z);
        Vector diag = Vector::Ones(z.size());
        diag.tail(n) = alpha * Vector::Ones(n);
        return Matrix(diag.asDiagonal());
    };
    return k;
}

JumpKernel bps_bounce_kernel(std::function<Vector(const Vector&)> grad_potential,
                             std::function<Matrix(const Vector&)> hessian) {
    JumpKernel k;
    auto grad = std::move(grad_potential);
    k.apply = [grad](const Vector& z, const Vector&) {
        const int n = half_dim(z);
        const Vector w = grad(z.head(n));
        const double wn2 = w.squaredNorm();
        if (wn2 < 1e-28) return z;  // ||grad U|| < 1e-14: guarded no-op
        Vector out = z;
        out.tail(n) -= (2.0 * w.dot(z.tail(n)) / wn2) * w;
        return out;
    };
    // Reflection preserves ||p|| and fixes q, so the full state norm as well.
    k.is_isometric = true;
    // The q-dependence through grad U is not norm-bounded by 1 in general.
    k.is_subcontractive = false;
    if (hessian) {
        auto hess = std::move(hessian);
        k.jacobian = [grad, hess](const Vector& z, const Vector&) {
            const int n = half_dim(z);
            const Vector q = z.head(n), p = z.tail(n);
            const Vector w = grad(q);
            const double wn2 = w.squaredNorm();
            Matrix j = Matrix::Identity(z.size(), z.size());
            if (wn2 < 1e-28) return j;
            const Matrix h = hess(q);
            const double beta = w.dot(p) / wn2;
            // p-block: I - 2 w w^T / ||w||^2
            j.bottomRightCorner(n, n) -= (2.0 / wn2) * (w * w.transpose());
            // q-block of the velocity map: -2 [ w ((H p - 2 beta H w)/||w||^2)^T + beta H ]
            const Vector dbeta = (h * p - 2.0 * beta * (h * w)) / wn2;
            j.bottomLeftCorner(n, n) = -2.0 * (w * dbeta.transpose() + beta * h);
            return j;
        };
    }
    return k;
}

}  // namespace pdmp

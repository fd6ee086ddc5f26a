#pragma once

#include <functional>
#include <utility>

#include "pdmp/rng.hpp"
#include "pdmp/types.hpp"

namespace pdmp {

// Noise feeding a jump kernel. Deterministic kernels carry `none` and record
// an empty noise vector; `uniform_index` records the drawn index as a
// length-1 vector so skeleton replays can reuse it.
enum class NoiseKind { none, gaussian, uniform_index };

struct NoiseSpec {
    NoiseKind kind{NoiseKind::none};
    int size{0};  // gaussian: vector dimension; uniform_index: index count

    Vector sample(Rng& rng) const;
    // Number of atoms when the noise is a finite set (0 = not enumerable).
    int enumeration_size() const { return kind == NoiseKind::uniform_index ? size : 0; }
    Vector atom(int i) const;  // i-th atom of an enumerable noise
};

// z' = apply(z, xi). Structural flags are declared by the builder and probed
// by the bounds module; they are never inferred.
struct JumpKernel {
    std::function<Vector(const Vector&, const Vector&)> apply;
    NoiseSpec noise;
    bool is_isometric{false};       // ||apply(z, xi)|| = ||z||
    bool is_subcontractive{false};  // ||apply(x,xi) - apply(y,xi)|| <= ||x - y||
    // Optional analytic Jacobian of z -> apply(z, xi).
    std::function<Matrix(const Vector&, const Vector&)> jacobian;
};

// Draws xi, applies the kernel, checks the output is finite.
std::pair<Vector, Vector> apply_jump(const JumpKernel& kernel, const Vector& z, Rng& rng);

// D_z apply(z, xi): analytic when available, else central finite differences.
Matrix kernel_jacobian(const JumpKernel& kernel, const Vector& z, const Vector& xi);

// (q, p) -> (q, p): no-op kernel for diagnostic zero-rate clocks.
JumpKernel identity_kernel();
// (q, p) -> (q, -p).
JumpKernel pure_reflection_kernel();
// Flips velocity coordinate `index` (0-based within the p block).
JumpKernel coordinate_flip_kernel(int index);
// Single-clock variant: flips a uniformly random velocity coordinate.
JumpKernel random_flip_kernel(int velocity_dim);
// (q, p) -> (q, alpha p + sqrt(1 - alpha^2) xi), xi ~ N(0, I).
JumpKernel autoregressive_kernel(int velocity_dim, double alpha);
// p -> p - 2 <grad U(q), p> / ||grad U(q)||^2 grad U(q); no-op when
// ||grad U(q)|| < 1e-14 (the rate vanishes there anyway). The optional
// Hessian enables the analytic full Jacobian in (q, p).
JumpKernel bps_bounce_kernel(std::function<Vector(const Vector&)> grad_potential,
                             std::function<Matrix(const Vector&)> hessian = {});

}  // namespace pdmp

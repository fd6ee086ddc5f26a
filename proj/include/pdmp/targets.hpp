#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pdmp/rng.hpp"
#include "pdmp/types.hpp"

namespace pdmp {

// Target density rho(q) proportional to exp(-U(q)). Only U and grad U are
// ever used; the normalizing constant is never computed.
struct Potential {
    int dimension{0};
    std::function<double(const Vector&)> value;     // U(q)
    std::function<Vector(const Vector&)> gradient;  // grad U(q)
    std::function<Matrix(const Vector&)> hessian;   // optional
    double gradient_lipschitz{0.0};                 // L_U, certified bound
    std::optional<Vector> exact_mean;
    std::optional<Matrix> exact_covariance;
    std::function<Vector(Rng&)> exact_sampler;      // optional direct sampler

    // Quadratic case U = (q-m)' P (q-m) / 2; enables closed-form hazards
    // along straight-line transport.
    bool quadratic{false};
    Vector gauss_mean;
    Matrix precision;

    bool is_standard_gaussian() const;
};

// U(q) = (q-m)' Sigma^{-1} (q-m) / 2. Throws ConfigError unless Sigma is
// symmetric positive definite.
Potential gaussian_potential(const Vector& mean, const Matrix& covariance);

// U(q) = -log sum_i w_i exp(-(q-m_i)' Sigma^{-1} (q-m_i) / 2), equal
// component covariance. The Lipschitz bound for grad U is the closed form
//   max(lambda_max(Sigma^{-1}), max_{i,j} ||Sigma^{-1} (m_i - m_j)||^2),
// from hess U = Sigma^{-1} - Cov_w(Sigma^{-1}(q - m_i)) with both terms PSD.
Potential gaussian_mixture_potential(const std::vector<double>& weights,
                                     const std::vector<Vector>& means,
                                     const Matrix& covariance);

// mu = pi (+) N(0, I_n) on the (q, p) phase space.
struct ReferenceMeasure {
    Potential potential;

    bool has_sampler() const { return static_cast<bool>(potential.exact_sampler); }
    // One draw (q, p); throws SimulationError without an exact sampler.
    Vector sample(Rng& rng) const;
};

std::vector<Vector> sample_reference(const ReferenceMeasure& measure, std::size_t n, Rng& rng);

}  // namespace pdmp

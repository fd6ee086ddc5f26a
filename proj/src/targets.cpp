#include "pdmp/targets.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace pdmp {

bool Potential::is_standard_gaussian() const {
    if (!quadratic) return false;
    return gauss_mean.isZero(0.0) && precision.isIdentity(1e-14);
}

Potential gaussian_potential(const Vector& mean, const Matrix& covariance) {
    const int n = static_cast<int>(mean.size());
    if (covariance.rows() != n || covariance.cols() != n)
        throw ConfigError("covariance shape does not match the mean");
    if (!covariance.isApprox(covariance.transpose(), 1e-12))
        throw ConfigError("covariance must be symmetric");
    Eigen::LLT<Matrix> llt(covariance);
    if (llt.info() != Eigen::Success)
        throw ConfigError("covariance must be positive definite");

    const Matrix chol = llt.matrixL();
    const Matrix precision = llt.solve(Matrix::Identity(n, n));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(precision);

    Potential u;
    u.dimension = n;
    u.quadratic = true;
    u.gauss_mean = mean;
    u.precision = precision;
    u.value = [mean, precision](const Vector& q) {
        const Vector r = q - mean;
        return 0.5 * r.dot(precision * r);
    };
    u.gradient = [mean, precision](const Vector& q) { return Vector(precision * (q - mean)); };
    u.hessian = [precision](const Vector&) { return precision; };
    u.gradient_lipschitz = eig.eigenvalues().maxCoeff();
    u.exact_mean = mean;
    u.exact_covariance = covariance;
    u.exact_sampler = [mean, chol, n](Rng& rng) {
        return Vector(mean + chol * rng.normal_vector(n));
    };
    return u;
}

Potential gaussian_mixture_potential(const std::vector<double>& weights,
                                     const std::vector<Vector>& means,
                                     const Matrix& covariance) {
    if (weights.empty() || means.empty()) throw ConfigError("mixture needs at least one component");
    if (weights.size() != means.size())
        throw ConfigError("mixture weights and means differ in count");
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw ConfigError("mixture weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("mixture weights must sum to 1");

    const int n = static_cast<int>(means.front().size());
    for (const Vector& m : means)
        if (m.size() != n) throw ConfigError("mixture means differ in dimension");

    Eigen::LLT<Matrix> llt(covariance);
    if (covariance.rows() != n || covariance.cols() != n ||
        !covariance.isApprox(covariance.transpose(), 1e-12) || llt.info() != Eigen::Success)
        throw ConfigError("mixture covariance must be symmetric positive definite of matching size");

    const Matrix chol = llt.matrixL();
    const Matrix precision = llt.solve(Matrix::Identity(n, n));
    const std::size_t m = weights.size();

    // Component log-weights and quadratic forms, combined by log-sum-exp.
    auto log_mix = [weights, means, precision, m](const Vector& q) {
        double best = -std::numeric_limits<double>::infinity();
        std::vector<double> terms(m);
        for (std::size_t i = 0; i < m; ++i) {
            const Vector r = q - means[i];
            terms[i] = std::log(weights[i]) - 0.5 * r.dot(precision * r);
            best = std::max(best, terms[i]);
        }
        double acc = 0.0;
        for (double t : terms) acc += std::exp(t - best);
        return std::pair<double, std::vector<double>>{best + std::log(acc), std::move(terms)};
    };

    Potential u;
    u.dimension = n;
    u.value = [log_mix](const Vector& q) { return -log_mix(q).first; };
    u.gradient = [log_mix, weights, means, precision, m](const Vector& q) {
        const auto [lse, terms] = log_mix(q);
        Vector g = Vector::Zero(q.size());
        for (std::size_t i = 0; i < m; ++i) {
            const double resp = std::exp(terms[i] - lse);  // softmax responsibility
            g += resp * (precision * (q - means[i]));
        }
        return g;
    };
    u.hessian = [log_mix, means, precision, m](const Vector& q) {
        const auto [lse, terms] = log_mix(q);
        const int dq = static_cast<int>(q.size());
        Matrix cov = Matrix::Zero(dq, dq);
        Vector mean_pull = Vector::Zero(dq);
        for (std::size_t i = 0; i < m; ++i) {
            const double resp = std::exp(terms[i] - lse);
            const Vector h = precision * (q - means[i]);
            cov += resp * (h * h.transpose());
            mean_pull += resp * h;
        }
        return Matrix(precision - (cov - mean_pull * mean_pull.transpose()));
    };

    Eigen::SelfAdjointEigenSolver<Matrix> eig(precision);
    double spread = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            spread = std::max(spread, (precision * (means[i] - means[j])).squaredNorm());
    u.gradient_lipschitz = std::max(eig.eigenvalues().maxCoeff(), spread);

    // Exact moments of the mixture: E q = sum w_i m_i, Cov = Sigma + Cov of means.
    Vector mbar = Vector::Zero(n);
    for (std::size_t i = 0; i < m; ++i) mbar += weights[i] * means[i];
    Matrix cov_means = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < m; ++i) {
        const Vector r = means[i] - mbar;
        cov_means += weights[i] * (r * r.transpose());
    }
    u.exact_mean = mbar;
    u.exact_covariance = covariance + cov_means;

    std::vector<double> cumulative(m);
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) cumulative[i] = (acc += weights[i]);
    u.exact_sampler = [cumulative, means, chol, n, m](Rng& rng) {
        const double pick = rng.uniform();
        std::size_t comp = m - 1;
        for (std::size_t i = 0; i < m; ++i)
            if (pick <= cumulative[i]) {
                comp = i;
                break;
            }
        return Vector(means[comp] + chol * rng.normal_vector(n));
    };
    return u;
}

Vector ReferenceMeasure::sample(Rng& rng) const {
    if (!has_sampler())
        throw SimulationError("reference measure has no exact sampler for this target");
    const int n = potential.dimension;
    Vector z(2 * n);
    z.head(n) = potential.exact_sampler(rng);
    z.tail(n) = rng.normal_vector(n);
    return z;
}

std::vector<Vector> sample_reference(const ReferenceMeasure& measure, std::size_t n, Rng& rng) {
    std::vector<Vector> draws;
    draws.reserve(n);
    for (std::size_t i = 0; i < n; ++i) draws.push_back(measure.sample(rng));
    return draws;
}

}  // namespace pdmp

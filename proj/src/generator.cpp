#include "pdmp/generator.hpp"

#include <cmath>
#include <sstream>

namespace pdmp {

namespace {

// E[f(R(z, xi))] and the standard error of its Monte Carlo estimate.
std::pair<double, double> kernel_expectation(const JumpKernel& kernel, const TestFunction& f,
                                             const Vector& z, int q_samples, Rng& rng) {
    switch (kernel.noise.kind) {
        case NoiseKind::none:
            return {f.value(kernel.apply(z, Vector(0))), 0.0};
        case NoiseKind::uniform_index: {
            const int m = kernel.noise.enumeration_size();
            double acc = 0.0;
            for (int i = 0; i < m; ++i) acc += f.value(kernel.apply(z, kernel.noise.atom(i)));
            return {acc / m, 0.0};
        }
        case NoiseKind::gaussian: {
            double sum = 0.0, sumsq = 0.0;
            for (int i = 0; i < q_samples; ++i) {
                const double v = f.value(kernel.apply(z, kernel.noise.sample(rng)));
                sum += v;
                sumsq += v * v;
            }
            const double mean = sum / q_samples;
            double var = 0.0;
            if (q_samples > 1)
                var = std::max(0.0, (sumsq - q_samples * mean * mean) / (q_samples - 1.0));
            return {mean, std::sqrt(var / q_samples)};
        }
    }
    return {0.0, 0.0};
}

}  // namespace

GeneratorValue apply_generator_detailed(const PdmpSpec& spec, const TestFunction& f,
                                        const Vector& z, int q_samples, Rng& rng) {
    double value = f.gradient(z).dot(spec.flow.vector_field(z));
    double se_sq = 0.0;
    const double fz = f.value(z);
    for (const Clock& clock : spec.clocks) {
        const double rate = clock.intensity.rate(z);
        if (rate == 0.0) continue;
        const auto [qf, qse] = kernel_expectation(clock.kernel, f, z, q_samples, rng);
        value += rate * (qf - fz);
        se_sq += rate * rate * qse * qse;
    }
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "generator evaluation is non-finite at z=" << format_vector(z);
        throw SimulationError(msg.str());
    }
    return {value, std::sqrt(se_sq)};
}

double apply_generator(const PdmpSpec& spec, const TestFunction& f, const Vector& z,
                       int q_samples, Rng& rng) {
    return apply_generator_detailed(spec, f, z, q_samples, rng).value;
}

MeanEstimate invariance_residual(const PdmpSpec& spec, const TestFunction& f,
                                 const ReferenceMeasure& measure, std::size_t n, int q_samples,
                                 Rng& rng, int shards, int threads) {
    if (!measure.has_sampler())
        throw SimulationError("invariance residual needs a reference measure with exact sampler");
    const std::uint64_t seed = rng.raw();
    return sharded_mean(n, seed, shards, threads, [&](Rng& local) {
        const Vector z = measure.sample(local);
        return apply_generator(spec, f, z, q_samples, local);
    });
}

double martingale_residual_single(const PdmpSpec& spec, const TestFunction& f, const Vector& z0,
                                  double t, int nodes_per_segment, int q_samples, Rng& rng) {
    if (t == 0.0) return 0.0;
    if (nodes_per_segment < 2 || nodes_per_segment % 2 != 0)
        throw SimulationError("Simpson quadrature needs an even node count >= 2");

    const EventSkeleton skeleton = simulate_skeleton(spec, z0, t, rng);

    double integral = 0.0;
    Vector segment_start = z0;
    double prev = 0.0;
    auto integrate_segment = [&](const Vector& from, double length) {
        if (length <= 0.0) return;
        const int m = nodes_per_segment;
        const double h = length / m;
        double acc = 0.0;
        Vector node = from;
        for (int j = 0; j <= m; ++j) {
            if (j > 0) node = evaluate_flow(spec.flow, node, h);
            const double value = apply_generator(spec, f, node, q_samples, rng);
            if (!std::isfinite(value)) {
                std::ostringstream msg;
                msg << "non-finite generator value on segment starting t=" << prev
                    << " node " << j << "/" << m;
                throw SimulationError(msg.str());
            }
            const double weight = (j == 0 || j == m) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
            acc += weight * value;
        }
        integral += acc * h / 3.0;
    };

    for (const Event& e : skeleton.events) {
        integrate_segment(segment_start, e.time - prev);
        segment_start = e.post;
        prev = e.time;
    }
    integrate_segment(segment_start, t - prev);

    const Vector z_t = evaluate_trajectory(skeleton, spec, t);
    return f.value(z_t) - f.value(z0) - integral;
}

MeanEstimate martingale_residual(const PdmpSpec& spec, const TestFunction& f, const Vector& z0,
                                 double t, std::size_t n_paths, int nodes_per_segment,
                                 int q_samples, Rng& rng, int shards, int threads) {
    if (t == 0.0) return {0.0, 0.0, n_paths};
    const std::uint64_t seed = rng.raw();
    return sharded_mean(n_paths, seed, shards, threads, [&](Rng& local) {
        return martingale_residual_single(spec, f, z0, t, nodes_per_segment, q_samples, local);
    });
}

std::vector<double> core_convergence_probe(const PdmpSpec& spec, const TestFunction& f,
                                           const std::vector<double>& k_list,
                                           const std::vector<Vector>& grid, int q_samples,
                                           Rng& rng) {
    std::vector<double> gaps;
    gaps.reserve(k_list.size());
    for (double k : k_list) {
        const TestFunction fk = cutoff_apply(f, k);
        double sup = 0.0;
        for (const Vector& z : grid) {
            const double a_fk = apply_generator(spec, fk, z, q_samples, rng);
            const double a_f = apply_generator(spec, f, z, q_samples, rng);
            sup = std::max(sup, std::abs(a_fk - a_f));
        }
        gaps.push_back(sup);
    }
    return gaps;
}

MeanEstimate semigroup_estimate(const PdmpSpec& spec, const TestFunction& f, const Vector& z,
                                double t, std::size_t n_paths, Rng& rng, int shards,
                                int threads) {
    if (t == 0.0) return {f.value(z), 0.0, n_paths};
    const std::uint64_t seed = rng.raw();
    return sharded_mean(n_paths, seed, shards, threads, [&](Rng& local) {
        const EventSkeleton skeleton = simulate_skeleton(spec, z, t, local);
        return f.value(evaluate_trajectory(skeleton, spec, t));
    });
}

std::vector<Vector> cube_grid(int dim, double radius, double spacing) {
    const int per_axis = static_cast<int>(std::floor(2.0 * radius / spacing)) + 1;
    std::vector<Vector> points;
    std::vector<int> idx(dim, 0);
    Vector z(dim);
    while (true) {
        for (int a = 0; a < dim; ++a) z[a] = -radius + idx[a] * spacing;
        points.push_back(z);
        int a = 0;
        while (a < dim && ++idx[a] == per_axis) idx[a++] = 0;
        if (a == dim) break;
    }
    return points;
}

}  // namespace pdmp

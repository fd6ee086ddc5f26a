#pragma once

#include <vector>

#include "pdmp/parallel.hpp"
#include "pdmp/process.hpp"
#include "pdmp/targets.hpp"
#include "pdmp/test_function.hpp"

namespace pdmp {

// Evaluation of A f(z) = <grad f(z), g(z)> + sum_i lambda_i(z) (Q_i f(z) - f(z)).
// Q_i f(z) = E[f(R_i(z, xi))]: exact for deterministic kernels, enumerated for
// finite index noise, Monte Carlo with q_samples draws otherwise (the inner
// standard error is reported alongside).
struct GeneratorValue {
    double value{0.0};
    double q_standard_error{0.0};
};

GeneratorValue apply_generator_detailed(const PdmpSpec& spec, const TestFunction& f,
                                        const Vector& z, int q_samples, Rng& rng);

double apply_generator(const PdmpSpec& spec, const TestFunction& f, const Vector& z,
                       int q_samples, Rng& rng);

// Monte Carlo estimate of int A f dmu over n draws from the reference
// measure. The associated check passes when |estimate| <= 4 SE.
MeanEstimate invariance_residual(const PdmpSpec& spec, const TestFunction& f,
                                 const ReferenceMeasure& measure, std::size_t n, int q_samples,
                                 Rng& rng, int shards = 64, int threads = 0);

// Mean and SE over n_paths of
//   f(Z_t) - f(Z_0) - int_0^t A f(Z_s) ds,
// the integral evaluated per inter-event segment with composite Simpson on
// nodes_per_segment intervals.
MeanEstimate martingale_residual(const PdmpSpec& spec, const TestFunction& f, const Vector& z0,
                                 double t, std::size_t n_paths, int nodes_per_segment,
                                 int q_samples, Rng& rng, int shards = 64, int threads = 0);

// Single-path residual (used by the quadrature-accuracy control).
double martingale_residual_single(const PdmpSpec& spec, const TestFunction& f, const Vector& z0,
                                  double t, int nodes_per_segment, int q_samples, Rng& rng);

// For each k: sup over the grid of |A(eta_k f)(z) - A f(z)|.
std::vector<double> core_convergence_probe(const PdmpSpec& spec, const TestFunction& f,
                                           const std::vector<double>& k_list,
                                           const std::vector<Vector>& grid, int q_samples,
                                           Rng& rng);

// Monte Carlo estimate of P_t f(z) = E_z[f(Z_t)].
MeanEstimate semigroup_estimate(const PdmpSpec& spec, const TestFunction& f, const Vector& z,
                                double t, std::size_t n_paths, Rng& rng, int shards = 64,
                                int threads = 0);

// Axis-aligned grid over the cube [-radius, radius]^dim with the given
// spacing (used by the cutoff probe; spacing is recorded by the caller).
std::vector<Vector> cube_grid(int dim, double radius, double spacing);

}  // namespace pdmp

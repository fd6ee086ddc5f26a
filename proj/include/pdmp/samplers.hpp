#pragma once

#include "pdmp/process.hpp"
#include "pdmp/targets.hpp"

namespace pdmp {

// lambda_zero is a diagnostic: the target's transport flow with one
// never-firing clock, so the trajectory is the bare flow.
enum class SamplerVariant { zigzag, bps, rhmc, pure_reflection, lambda_zero };

struct SamplerConfig {
    Potential target;
    SamplerVariant variant{SamplerVariant::zigzag};
    double lambda_ref{1.0};         // refreshment rate
    double alpha{1.0};              // autoregressive parameter in [0, 1]
    double zigzag_rate_scale{1.0};  // diagnostic; != 1 breaks invariance on purpose
    double thinning_lookahead{1.0};
};

SamplerVariant parse_sampler_variant(const std::string& name);
std::string sampler_variant_name(SamplerVariant variant);

// Straight-line transport; per-coordinate clocks with rate
// (p_i d_i U(q))_+ and deterministic flip of p_i. Closed-form hazards for
// quadratic U, thinning otherwise.
PdmpSpec build_zigzag(const SamplerConfig& config);

// Transport; bounce clock with rate <grad U(q), p>_+ reflecting p across
// {grad U(q)}^perp, plus (when lambda_ref > 0) a constant-rate
// autoregressive refreshment clock.
PdmpSpec build_bps(const SamplerConfig& config);

// Hamiltonian flow of g(q,p) = (p, -grad U(q)) with a single constant-rate
// autoregressive refreshment clock. The standard-Gaussian potential gets the
// exact rotation flow; anything else integrates numerically.
PdmpSpec build_rhmc(const SamplerConfig& config);

// Transport; one clock with rate <grad U(q), p>_+ and kernel (q,p) -> (q,-p).
PdmpSpec build_pure_reflection(const SamplerConfig& config);

PdmpSpec build_lambda_zero(const SamplerConfig& config);

PdmpSpec build_sampler(const SamplerConfig& config);

}  // namespace pdmp

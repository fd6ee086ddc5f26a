#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pdmp/samplers.hpp"

namespace pdmp::cli {

// Parsed batch-run configuration. The file format is flat `key = value`
// lines with '#' comments; `schema = 1` is required and unknown keys are
// hard errors with the offending line number.
struct RunConfig {
    int schema{1};

    // target
    std::string target_kind{"gaussian"};  // gaussian | gaussian_mixture
    int target_dimension{0};
    Vector target_mean;            // empty = zeros
    Matrix target_covariance;      // empty = identity
    std::vector<double> mixture_weights;
    std::vector<Vector> mixture_means;

    // sampler
    std::string sampler_variant{"zigzag"};
    double lambda_ref{1.0};
    double alpha{1.0};
    double zigzag_rate_scale{1.0};
    double thinning_lookahead{1.0};

    // run
    double horizon{10.0};
    int chains{1};
    std::uint64_t seed{1};
    std::string out_dir{"out"};
    int threads{0};  // 0 = available parallelism
    std::uint64_t max_events{100'000'000};

    // dense export grid: count points evenly spaced on [start, stop]
    int grid_count{0};
    double grid_start{0.0};
    double grid_stop{-1.0};  // < 0 = horizon

    // verification toggles and per-suite sample counts
    bool verify_bounds{false};
    bool verify_invariance{false};
    bool verify_martingale{false};
    bool verify_core_probe{false};
    bool verify_semigroup{false};
    int bounds_instances{1000};
    std::size_t invariance_samples{1'000'000};
    int invariance_bumps{10};
    int invariance_q_samples{8};
    std::size_t martingale_paths{10'000};
    int martingale_nodes{16};
    int martingale_q_samples{16};
    std::vector<double> core_probe_scales{2.0, 4.0, 8.0};
    double core_probe_spacing{0.125};
    std::size_t semigroup_paths{40'000};

    // raw key/value echo for the manifest
    std::vector<std::pair<std::string, std::string>> echo;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

Potential build_target(const RunConfig& config);
SamplerConfig build_sampler_config(const RunConfig& config);

// Exit codes: 0 all-pass, 1 check failure, 2 config error, 3 runtime failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeFailure = 3;

int cmd_sample(const RunConfig& config);
int cmd_verify(const RunConfig& config);
int cmd_replay(const RunConfig& config, const std::string& skeleton_path);

}  // namespace pdmp::cli

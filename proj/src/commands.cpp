#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "pdmp/bounds.hpp"
#include "pdmp/config.hpp"
#include "pdmp/generator.hpp"
#include "pdmp/report.hpp"
#include "pdmp/skeleton_io.hpp"
#include "pdmp/version.hpp"

namespace pdmp::cli {

namespace fs = std::filesystem;

namespace {

// Distinct sub-stream tags per consumer so that enabling one suite never
// shifts the draws of another.
enum StreamTag : std::uint64_t {
    kChainBase = 0,  // chain i uses tag i
    kBoundsTag = 1'000'001,
    kInvarianceTag = 1'000'002,
    kMartingaleTag = 1'000'003,
    kCoreProbeTag = 1'000'004,
    kSemigroupTag = 1'000'005,
};

std::string chain_basename(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "chain_%03d", index);
    return buf;
}

std::vector<double> dense_grid(const RunConfig& config) {
    if (config.grid_count <= 0) return {};
    const double stop = config.grid_stop < 0.0 ? config.horizon : config.grid_stop;
    std::vector<double> grid;
    grid.reserve(config.grid_count);
    if (config.grid_count == 1) {
        grid.push_back(config.grid_start);
        return grid;
    }
    const double step = (stop - config.grid_start) / (config.grid_count - 1);
    for (int i = 0; i < config.grid_count; ++i) grid.push_back(config.grid_start + i * step);
    return grid;
}

void ensure_writable_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
    const fs::path probe = fs::path(dir) / ".write_probe";
    std::ofstream out(probe, std::ios::binary);
    out << "ok";
    if (!out) throw ConfigError("output directory '" + dir + "' is not writable");
    out.close();
    fs::remove(probe, ec);
}

nlohmann::json config_echo_json(const RunConfig& config) {
    nlohmann::json echo = nlohmann::json::object();
    for (const auto& [key, value] : config.echo) echo[key] = value;
    return echo;
}

void write_manifest(const RunConfig& config, bool complete,
                    const std::vector<std::pair<std::uint64_t, std::size_t>>& chain_stats,
                    double wall_seconds) {
    nlohmann::json manifest;
    manifest["complete"] = complete;
    manifest["version"] = kVersion;
    manifest["config"] = config_echo_json(config);
    nlohmann::json chains = nlohmann::json::array();
    for (std::size_t i = 0; i < chain_stats.size(); ++i)
        chains.push_back({{"index", i},
                          {"seed", chain_stats[i].first},
                          {"events", chain_stats[i].second}});
    manifest["chains"] = std::move(chains);
    manifest["wall_time_seconds"] = wall_seconds;
    std::ofstream out(fs::path(config.out_dir) / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << "\n";
}

TestFunction random_bump(int dim, Rng& rng) {
    const Vector center = 0.5 * rng.normal_vector(dim);
    const double inner = 0.6 + 0.4 * rng.uniform();
    const double outer = inner + 1.0 + rng.uniform();
    return bump_function(center, inner, outer);
}

std::vector<CheckResult> run_bounds_suite(const RunConfig& config, const PdmpSpec& spec,
                                          const ReferenceMeasure& measure) {
    std::vector<CheckResult> checks;
    Rng rng = Rng::derive(config.seed, kBoundsTag);
    const int instances = std::max(1, config.bounds_instances);

    // Flow Jacobian norm vs exp(L t) on random (z, t in [0, 5]).
    double worst_excess = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < instances; ++i) {
        const Vector z = measure.sample(rng);
        const double t = 5.0 * rng.uniform();
        const double norm = jacobian_norm_flow(spec.flow, z, t);
        const double bound = std::exp(spec.flow.lipschitz_constant * t);
        worst_excess = std::max(worst_excess, norm / bound - 1.0);
    }
    checks.push_back({"gronwall_flow_excess", worst_excess, 0.0, 1e-3, worst_excess <= 1e-3,
                      std::to_string(instances) + " random (z, t)"});

    // Composed-path Jacobian vs exp(L * horizon) on short skeletons.
    const int paths = std::max(1, instances / 10);
    double worst_path_excess = -std::numeric_limits<double>::infinity();
    bool asserted = true;
    for (int i = 0; i < paths; ++i) {
        const Vector z0 = measure.sample(rng);
        const EventSkeleton skeleton = simulate_skeleton(spec, z0, 5.0, rng, config.max_events);
        const BoundReport r = gronwall_check_path(spec, skeleton);
        asserted &= r.asserted;
        worst_path_excess = std::max(worst_path_excess, r.checked_quantity / r.bound_value - 1.0);
    }
    checks.push_back({"gronwall_path_excess", worst_path_excess, 0.0, 1e-3,
                      !asserted || worst_path_excess <= 1e-3,
                      asserted ? std::to_string(paths) + " skeletons, horizon 5"
                               : "informational: non-subcontractive kernel present"});

    // No-return lower bound on a 64-point grid over [0, 5].
    std::vector<double> t_grid;
    for (int i = 0; i < 64; ++i) t_grid.push_back(5.0 * i / 63.0);
    double worst_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < instances; ++i) {
        Vector z = measure.sample(rng);
        if (z.norm() > 100.0) z *= 100.0 / z.norm();
        worst_margin = std::min(worst_margin, no_return_check(spec.flow, z, t_grid).margin);
    }
    checks.push_back({"no_return_margin", worst_margin, 0.0, 1e-9, worst_margin >= -1e-9,
                      "B = -||g(0)||^2/L (proof's constant; statement reads -||g(0)||/L)"});

    // Structural probes per kernel.
    for (std::size_t c = 0; c < spec.clocks.size(); ++c) {
        const BoundReport r =
            kernel_structure_check(spec.clocks[c].kernel, spec.dimension, 10'000, rng);
        checks.push_back({"kernel_structure_clock_" + std::to_string(c), r.checked_quantity, 0.0,
                          0.0, r.pass, r.context});
    }
    return checks;
}

std::vector<CheckResult> run_invariance_suite(const RunConfig& config, const PdmpSpec& spec,
                                              const ReferenceMeasure& measure) {
    std::vector<CheckResult> checks;
    Rng rng = Rng::derive(config.seed, kInvarianceTag);
    for (int b = 0; b < config.invariance_bumps; ++b) {
        const TestFunction f = random_bump(spec.dimension, rng);
        const MeanEstimate r =
            invariance_residual(spec, f, measure, config.invariance_samples,
                                config.invariance_q_samples, rng, 64, config.threads);
        const double threshold = 4.0 * r.standard_error;
        checks.push_back({"invariance_bump_" + std::to_string(b), r.estimate, r.standard_error,
                          threshold, std::abs(r.estimate) <= threshold,
                          "n=" + std::to_string(r.samples)});
    }
    return checks;
}

std::vector<CheckResult> run_martingale_suite(const RunConfig& config, const PdmpSpec& spec,
                                              const ReferenceMeasure& measure) {
    std::vector<CheckResult> checks;
    Rng rng = Rng::derive(config.seed, kMartingaleTag);
    const Vector z0 = measure.sample(rng);
    const TestFunction f = random_bump(spec.dimension, rng);
    for (double t : {1.0, 2.0}) {
        if (t > config.horizon) continue;
        const MeanEstimate r =
            martingale_residual(spec, f, z0, t, config.martingale_paths, config.martingale_nodes,
                                config.martingale_q_samples, rng, 64, config.threads);
        const double threshold = 4.0 * r.standard_error;
        checks.push_back({"martingale_t" + format_double(t), r.estimate, r.standard_error,
                          threshold, std::abs(r.estimate) <= threshold,
                          "paths=" + std::to_string(r.samples)});
    }
    if (checks.empty())
        throw ConfigError("martingale suite needs run.horizon >= 1 for its t grid");
    return checks;
}

std::vector<CheckResult> run_core_probe_suite(const RunConfig& config, const PdmpSpec& spec) {
    std::vector<CheckResult> checks;
    Rng rng = Rng::derive(config.seed, kCoreProbeTag);
    const double max_k = *std::max_element(config.core_probe_scales.begin(),
                                           config.core_probe_scales.end());
    const double radius = 2.0 * max_k;
    const double per_axis = std::floor(2.0 * radius / config.core_probe_spacing) + 1.0;
    if (std::pow(per_axis, spec.dimension) > 8e6)
        throw ConfigError("core probe grid too large; raise verify.core_probe.spacing or use a "
                          "lower-dimensional target");
    const auto grid = cube_grid(spec.dimension, radius, config.core_probe_spacing);
    const auto gaps = core_convergence_probe(spec, gaussian_decay(), config.core_probe_scales,
                                             grid, 256, rng);
    bool decreasing = true;
    for (std::size_t i = 1; i < gaps.size(); ++i)
        decreasing &= gaps[i] <= gaps[i - 1] + 1e-12;
    const double final_gap = gaps.back();
    checks.push_back({"core_probe_decreasing", decreasing ? 1.0 : 0.0, 0.0, 0.0, decreasing,
                      "grid spacing " + format_double(config.core_probe_spacing)});
    checks.push_back({"core_probe_final_gap", final_gap, 0.0, 1e-6, final_gap <= 1e-6,
                      "k=" + format_double(config.core_probe_scales.back())});
    return checks;
}

std::vector<CheckResult> run_semigroup_suite(const RunConfig& config, const PdmpSpec& spec,
                                             const ReferenceMeasure& measure) {
    std::vector<CheckResult> checks;
    Rng rng = Rng::derive(config.seed, kSemigroupTag);
    const TestFunction f = random_bump(spec.dimension, rng);
    std::vector<Vector> states;
    for (int i = 0; i < 5; ++i) states.push_back(measure.sample(rng));

    double sup_generator = 0.0;
    for (const Vector& z : states)
        sup_generator = std::max(sup_generator, std::abs(apply_generator(spec, f, z, 256, rng)));

    const std::vector<double> times{0.1, 0.01, 0.001};
    std::vector<double> sups;
    double last_max_se = 0.0;
    for (double t : times) {
        double sup = 0.0, max_se = 0.0;
        for (const Vector& z : states) {
            const MeanEstimate e =
                semigroup_estimate(spec, f, z, t, config.semigroup_paths, rng, 64, config.threads);
            sup = std::max(sup, std::abs(e.estimate - f.value(z)));
            max_se = std::max(max_se, e.standard_error);
        }
        sups.push_back(sup);
        last_max_se = max_se;
    }
    const bool decreasing = sups[0] >= sups[1] && sups[1] >= sups[2];
    checks.push_back({"semigroup_decreasing", decreasing ? 1.0 : 0.0, 0.0, 0.0, decreasing,
                      "sup|P_t f - f| at t=0.1, 0.01, 0.001"});
    const double bound = 0.001 * sup_generator + 4.0 * last_max_se;
    checks.push_back({"semigroup_small_t", sups[2], last_max_se, bound, sups[2] <= bound,
                      "t=0.001 vs t sup|Af| + 4 SE"});
    return checks;
}

}  // namespace

int cmd_sample(const RunConfig& config) {
    try {
        ensure_writable_dir(config.out_dir);
        const auto t_start = std::chrono::steady_clock::now();

        const SamplerConfig sampler_config = build_sampler_config(config);
        const PdmpSpec spec = build_sampler(sampler_config);
        const ReferenceMeasure measure{sampler_config.target};
        const std::vector<double> grid = dense_grid(config);

        std::vector<std::pair<std::uint64_t, std::size_t>> chain_stats(config.chains, {0, 0});
        for (int c = 0; c < config.chains; ++c)
            chain_stats[c].first = Rng::mix(config.seed, static_cast<std::uint64_t>(c));
        write_manifest(config, false, chain_stats, 0.0);

        std::atomic<int> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr failure;
        std::mutex failure_lock;
        auto worker = [&] {
            try {
                for (int c = next.fetch_add(1); c < config.chains && !failed;
                     c = next.fetch_add(1)) {
                    Rng rng(chain_stats[c].first);
                    const Vector z0 = measure.sample(rng);
                    const EventSkeleton skeleton =
                        simulate_skeleton(spec, z0, config.horizon, rng, config.max_events);
                    chain_stats[c].second = skeleton.events.size();
                    const fs::path base = fs::path(config.out_dir) / chain_basename(c);
                    write_skeleton_file(base.string() + ".jsonl", skeleton, chain_stats[c].first);
                    if (!grid.empty())
                        write_dense_csv_file(base.string() + "_dense.csv", skeleton, spec, grid);
                }
            } catch (...) {
                std::lock_guard<std::mutex> guard(failure_lock);
                if (!failure) failure = std::current_exception();
                failed = true;
            }
        };
        int threads = config.threads > 0 ? config.threads : default_thread_count();
        threads = std::min(threads, config.chains);
        if (threads <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }
        if (failure) {
            // Partial chain outputs are not trustworthy; drop them. The
            // manifest stays behind, still marked incomplete.
            for (int c = 0; c < config.chains; ++c) {
                std::error_code ec;
                const fs::path base = fs::path(config.out_dir) / chain_basename(c);
                fs::remove(base.string() + ".jsonl", ec);
                fs::remove(base.string() + "_dense.csv", ec);
            }
            std::rethrow_exception(failure);
        }

        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        write_manifest(config, true, chain_stats, wall);
        return kExitOk;
    } catch (const ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& ex) {
        std::cerr << "sample failed: " << ex.what() << "\n";
        return kExitRuntimeFailure;
    }
}

int cmd_verify(const RunConfig& config) {
    try {
        if (!config.verify_bounds && !config.verify_invariance && !config.verify_martingale &&
            !config.verify_core_probe && !config.verify_semigroup)
            throw ConfigError("verify: no suite enabled (verify.bounds / verify.invariance / "
                              "verify.martingale / verify.core_probe / verify.semigroup)");
        ensure_writable_dir(config.out_dir);

        const SamplerConfig sampler_config = build_sampler_config(config);
        const PdmpSpec spec = build_sampler(sampler_config);
        const ReferenceMeasure measure{sampler_config.target};

        std::vector<CheckResult> checks;
        auto append = [&checks](std::vector<CheckResult> more) {
            for (auto& c : more) checks.push_back(std::move(c));
        };
        if (config.verify_bounds) append(run_bounds_suite(config, spec, measure));
        if (config.verify_invariance) append(run_invariance_suite(config, spec, measure));
        if (config.verify_martingale) append(run_martingale_suite(config, spec, measure));
        if (config.verify_core_probe) append(run_core_probe_suite(config, spec));
        if (config.verify_semigroup) append(run_semigroup_suite(config, spec, measure));

        write_report_files(config.out_dir, "verify_report", checks);
        std::cout << checks_to_text(checks);
        return all_pass(checks) ? kExitOk : kExitCheckFailure;
    } catch (const ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& ex) {
        std::cerr << "verify failed: " << ex.what() << "\n";
        return kExitRuntimeFailure;
    }
}

int cmd_replay(const RunConfig& config, const std::string& skeleton_path) {
    try {
        ensure_writable_dir(config.out_dir);
        const SamplerConfig sampler_config = build_sampler_config(config);
        const PdmpSpec spec = build_sampler(sampler_config);

        const LoadedSkeleton loaded = read_skeleton_file(skeleton_path);
        if (loaded.dimension != spec.dimension)
            throw ConfigError("skeleton dimension " + std::to_string(loaded.dimension) +
                              " disagrees with the configured sampler (" +
                              std::to_string(spec.dimension) + ")");

        const int bad = find_inconsistent_event(loaded.skeleton, spec, 1e-8);
        if (bad >= 0) {
            std::cerr << "replay: skeleton inconsistent at event index " << bad
                      << " (pre-state does not match the flow from the previous post-state)\n";
            return kExitCheckFailure;
        }

        std::vector<double> grid = dense_grid(config);
        if (grid.empty())
            throw ConfigError("replay needs a dense grid (set grid.count in the config)");
        const fs::path out = fs::path(config.out_dir) / "replay_dense.csv";
        write_dense_csv_file(out.string(), loaded.skeleton, spec, grid);
        return kExitOk;
    } catch (const ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& ex) {
        std::cerr << "replay failed: " << ex.what() << "\n";
        return kExitRuntimeFailure;
    }
}

}  // namespace pdmp::cli

#include <CLI11.hpp>
#include <iostream>

#include "pdmp/config.hpp"
#include "pdmp/version.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::uint64_t seed_override = 0;
    std::string out_override;
    int chains_override = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config_path, "run configuration file")->required();
    cmd->add_option("--seed", args.seed_override, "override run.seed");
    cmd->add_option("--out", args.out_override, "override run.out");
    cmd->add_option("--chains", args.chains_override, "override run.chains");
}

int load_config(const CommonArgs& args, pdmp::cli::RunConfig& config) {
    try {
        config = pdmp::cli::parse_config_file(args.config_path);
    } catch (const pdmp::ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return pdmp::cli::kExitConfigError;
    }
    if (args.seed_override) config.seed = args.seed_override;
    if (!args.out_override.empty()) config.out_dir = args.out_override;
    if (args.chains_override > 0) config.chains = args.chains_override;
    return pdmp::cli::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"piecewise-deterministic MCMC: simulate, verify, replay"};
    app.set_version_flag("--version", pdmp::kVersion);
    app.require_subcommand(1);

    CommonArgs sample_args, verify_args, replay_args;
    std::string skeleton_path;

    CLI::App* sample = app.add_subcommand("sample", "run chains and write skeletons");
    add_common(sample, sample_args);
    CLI::App* verify = app.add_subcommand("verify", "run the enabled verification suites");
    add_common(verify, verify_args);
    CLI::App* replay = app.add_subcommand("replay", "re-derive a dense trajectory from a skeleton");
    add_common(replay, replay_args);
    replay->add_option("skeleton", skeleton_path, "skeleton .jsonl file")->required();

    CLI11_PARSE(app, argc, argv);

    pdmp::cli::RunConfig config;
    if (sample->parsed()) {
        if (int rc = load_config(sample_args, config)) return rc;
        return pdmp::cli::cmd_sample(config);
    }
    if (verify->parsed()) {
        if (int rc = load_config(verify_args, config)) return rc;
        return pdmp::cli::cmd_verify(config);
    }
    if (int rc = load_config(replay_args, config)) return rc;
    return pdmp::cli::cmd_replay(config, skeleton_path);
}

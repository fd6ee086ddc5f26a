#include "pdmp/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace pdmp::cli {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_number_list(const std::string& text, const std::string& where) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(where + ": empty entry in number list");
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError(where + ": '" + item + "' is not a number");
        }
        if (used != item.size()) throw ConfigError(where + ": '" + item + "' is not a number");
        values.push_back(v);
    }
    if (values.empty()) throw ConfigError(where + ": empty number list");
    return values;
}

Vector to_eigen(const std::vector<double>& v) {
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
    return out;
}

// rows separated by ';', entries by ','
Matrix parse_matrix(const std::string& text, const std::string& where) {
    std::vector<std::vector<double>> rows;
    std::stringstream stream(text);
    std::string row;
    while (std::getline(stream, row, ';')) rows.push_back(parse_number_list(row, where));
    const std::size_t cols = rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw ConfigError(where + ": ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    }
    return m;
}

bool parse_bool(const std::string& text, const std::string& where) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError(where + ": expected a boolean, got '" + text + "'");
}

double parse_double(const std::string& text, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + text + "'");
    }
}

long long parse_integer(const std::string& text, const std::string& where) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected an integer, got '" + text + "'");
    }
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig config;
    bool saw_schema = false;
    std::set<std::string> seen;

    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        std::string line = raw;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;

        const std::string where = origin + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(where + ": expected 'key = value'");
        if (!seen.insert(key).second) throw ConfigError(where + ": duplicate key '" + key + "'");
        config.echo.emplace_back(key, value);

        if (key == "schema") {
            if (parse_integer(value, where) != 1)
                throw ConfigError(where + ": unsupported schema version '" + value + "'");
            saw_schema = true;
        } else if (key == "target.kind") {
            if (value != "gaussian" && value != "gaussian_mixture")
                throw ConfigError(where + ": unknown target kind '" + value + "'");
            config.target_kind = value;
        } else if (key == "target.dimension") {
            config.target_dimension = static_cast<int>(parse_integer(value, where));
        } else if (key == "target.mean") {
            config.target_mean = to_eigen(parse_number_list(value, where));
        } else if (key == "target.covariance") {
            config.target_covariance = parse_matrix(value, where);
        } else if (key == "target.mixture.weights") {
            config.mixture_weights = parse_number_list(value, where);
        } else if (key == "target.mixture.means") {
            const Matrix rows = parse_matrix(value, where);
            config.mixture_means.clear();
            for (int r = 0; r < rows.rows(); ++r)
                config.mixture_means.push_back(rows.row(r).transpose());
        } else if (key == "sampler.variant") {
            parse_sampler_variant(value);  // validates
            config.sampler_variant = value;
        } else if (key == "sampler.lambda_ref") {
            config.lambda_ref = parse_double(value, where);
        } else if (key == "sampler.alpha") {
            config.alpha = parse_double(value, where);
        } else if (key == "sampler.zigzag_rate_scale") {
            config.zigzag_rate_scale = parse_double(value, where);
        } else if (key == "sampler.thinning_lookahead") {
            config.thinning_lookahead = parse_double(value, where);
        } else if (key == "run.horizon") {
            config.horizon = parse_double(value, where);
        } else if (key == "run.chains") {
            config.chains = static_cast<int>(parse_integer(value, where));
        } else if (key == "run.seed") {
            config.seed = static_cast<std::uint64_t>(parse_integer(value, where));
        } else if (key == "run.out") {
            config.out_dir = value;
        } else if (key == "run.threads") {
            config.threads = static_cast<int>(parse_integer(value, where));
        } else if (key == "run.max_events") {
            config.max_events = static_cast<std::uint64_t>(parse_integer(value, where));
        } else if (key == "grid.count") {
            config.grid_count = static_cast<int>(parse_integer(value, where));
        } else if (key == "grid.start") {
            config.grid_start = parse_double(value, where);
        } else if (key == "grid.stop") {
            config.grid_stop = parse_double(value, where);
        } else if (key == "verify.bounds") {
            config.verify_bounds = parse_bool(value, where);
        } else if (key == "verify.invariance") {
            config.verify_invariance = parse_bool(value, where);
        } else if (key == "verify.martingale") {
            config.verify_martingale = parse_bool(value, where);
        } else if (key == "verify.core_probe") {
            config.verify_core_probe = parse_bool(value, where);
        } else if (key == "verify.semigroup") {
            config.verify_semigroup = parse_bool(value, where);
        } else if (key == "verify.bounds.instances") {
            config.bounds_instances = static_cast<int>(parse_integer(value, where));
        } else if (key == "verify.invariance.samples") {
            config.invariance_samples = static_cast<std::size_t>(parse_integer(value, where));
        } else if (key == "verify.invariance.bumps") {
            config.invariance_bumps = static_cast<int>(parse_integer(value, where));
        } else if (key == "verify.invariance.q_samples") {
            config.invariance_q_samples = static_cast<int>(parse_integer(value, where));
        } else if (key == "verify.martingale.paths") {
            config.martingale_paths = static_cast<std::size_t>(parse_integer(value, where));
        } else if (key == "verify.martingale.nodes") {
            config.martingale_nodes = static_cast<int>(parse_integer(value, where));
        } else if (key == "verify.martingale.q_samples") {
            config.martingale_q_samples = static_cast<int>(parse_integer(value, where));
        } else if (key == "verify.core_probe.k") {
            config.core_probe_scales = parse_number_list(value, where);
        } else if (key == "verify.core_probe.spacing") {
            config.core_probe_spacing = parse_double(value, where);
        } else if (key == "verify.semigroup.paths") {
            config.semigroup_paths = static_cast<std::size_t>(parse_integer(value, where));
        } else {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }

    if (!saw_schema) throw ConfigError(origin + ": missing required 'schema' key");
    if (config.target_dimension <= 0)
        throw ConfigError(origin + ": target.dimension must be a positive integer");
    if (!(config.horizon > 0.0)) throw ConfigError(origin + ": run.horizon must be > 0");
    if (config.chains <= 0) throw ConfigError(origin + ": run.chains must be positive");
    if (config.seed == 0) throw ConfigError(origin + ": run.seed must be positive");
    return config;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

Potential build_target(const RunConfig& config) {
    const int n = config.target_dimension;
    if (config.target_kind == "gaussian") {
        const Vector mean =
            config.target_mean.size() ? config.target_mean : Vector(Vector::Zero(n));
        const Matrix cov = config.target_covariance.size()
                               ? config.target_covariance
                               : Matrix(Matrix::Identity(n, n));
        if (mean.size() != n || cov.rows() != n)
            throw ConfigError("target mean/covariance dimensions disagree with target.dimension");
        return gaussian_potential(mean, cov);
    }
    // gaussian_mixture
    if (config.mixture_weights.empty() || config.mixture_means.empty())
        throw ConfigError("gaussian_mixture target needs target.mixture.weights and .means");
    for (const Vector& m : config.mixture_means)
        if (m.size() != n)
            throw ConfigError("mixture means dimension disagrees with target.dimension");
    const Matrix cov = config.target_covariance.size() ? config.target_covariance
                                                       : Matrix(Matrix::Identity(n, n));
    return gaussian_mixture_potential(config.mixture_weights, config.mixture_means, cov);
}

SamplerConfig build_sampler_config(const RunConfig& config) {
    SamplerConfig sampler;
    sampler.target = build_target(config);
    sampler.variant = parse_sampler_variant(config.sampler_variant);
    sampler.lambda_ref = config.lambda_ref;
    sampler.alpha = config.alpha;
    sampler.zigzag_rate_scale = config.zigzag_rate_scale;
    sampler.thinning_lookahead = config.thinning_lookahead;
    return sampler;
}

}  // namespace pdmp::cli

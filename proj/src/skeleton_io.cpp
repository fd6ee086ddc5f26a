#include "pdmp/skeleton_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pdmp {

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

void append_vector(std::string& line, const Vector& v) {
    line += '[';
    for (int i = 0; i < v.size(); ++i) {
        if (i) line += ',';
        line += format_double(v[i]);
    }
    line += ']';
}

Vector to_vector(const nlohmann::json& j) {
    Vector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
    return v;
}

}  // namespace

void write_skeleton(std::ostream& out, const EventSkeleton& skeleton, std::uint64_t seed) {
    std::string line;
    line.reserve(256);
    line = "{\"d\":";
    line += std::to_string(skeleton.initial_state.size());
    line += ",\"z0\":";
    append_vector(line, skeleton.initial_state);
    line += ",\"horizon\":";
    line += format_double(skeleton.horizon);
    line += ",\"seed\":";
    line += std::to_string(seed);
    line += "}\n";
    out << line;

    int k = 0;
    for (const Event& e : skeleton.events) {
        line = "{\"k\":";
        line += std::to_string(++k);
        line += ",\"t\":";
        line += format_double(e.time);
        line += ",\"pre\":";
        append_vector(line, e.pre);
        line += ",\"post\":";
        append_vector(line, e.post);
        line += ",\"clock\":";
        line += std::to_string(e.clock);
        line += "}\n";
        out << line;
    }
}

void write_skeleton_file(const std::string& path, const EventSkeleton& skeleton,
                         std::uint64_t seed) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SimulationError("cannot open skeleton file for writing: " + path);
    write_skeleton(out, skeleton, seed);
    if (!out) throw SimulationError("write failed for skeleton file: " + path);
}

LoadedSkeleton read_skeleton_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SimulationError("cannot open skeleton file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw SimulationError("skeleton file is empty: " + path);

    LoadedSkeleton loaded;
    try {
        const auto header = nlohmann::json::parse(line);
        loaded.dimension = header.at("d").get<int>();
        loaded.seed = header.at("seed").get<std::uint64_t>();
        loaded.skeleton.initial_state = to_vector(header.at("z0"));
        loaded.skeleton.horizon = header.at("horizon").get<double>();
        if (loaded.skeleton.initial_state.size() != loaded.dimension)
            throw SimulationError("skeleton header: z0 length disagrees with d");

        int line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            const auto j = nlohmann::json::parse(line);
            Event e;
            e.time = j.at("t").get<double>();
            e.pre = to_vector(j.at("pre"));
            e.post = to_vector(j.at("post"));
            e.clock = j.at("clock").get<int>();
            e.noise = Vector(0);  // noise is not serialized
            if (e.pre.size() != loaded.dimension || e.post.size() != loaded.dimension)
                throw SimulationError("skeleton line " + std::to_string(line_no) +
                                      ": state length disagrees with header d");
            loaded.skeleton.events.push_back(std::move(e));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw SimulationError("skeleton parse failure in " + path + ": " + ex.what());
    }
    return loaded;
}

void write_dense_csv(std::ostream& out, const EventSkeleton& skeleton, const PdmpSpec& spec,
                     const std::vector<double>& t_grid) {
    std::string header = "t";
    for (int i = 1; i <= skeleton.initial_state.size(); ++i)
        header += ",z_" + std::to_string(i);
    out << header << "\n";
    std::string line;
    for (double t : t_grid) {
        const Vector z = evaluate_trajectory(skeleton, spec, t);
        line = format_double(t);
        for (int i = 0; i < z.size(); ++i) {
            line += ',';
            line += format_double(z[i]);
        }
        line += '\n';
        out << line;
    }
}

void write_dense_csv_file(const std::string& path, const EventSkeleton& skeleton,
                          const PdmpSpec& spec, const std::vector<double>& t_grid) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SimulationError("cannot open CSV file for writing: " + path);
    write_dense_csv(out, skeleton, spec, t_grid);
    if (!out) throw SimulationError("write failed for CSV file: " + path);
}

TimeAverages skeleton_time_averages(const EventSkeleton& skeleton, const PdmpSpec& spec,
                                    int nodes_per_segment) {
    const int d = static_cast<int>(skeleton.initial_state.size());
    const int m = std::max(2, nodes_per_segment + (nodes_per_segment % 2));
    Vector first = Vector::Zero(d), second = Vector::Zero(d);

    auto accumulate_segment = [&](const Vector& from, double length) {
        if (length <= 0.0) return;
        const double h = length / m;
        Vector node = from;
        for (int j = 0; j <= m; ++j) {
            if (j > 0) node = evaluate_flow(spec.flow, node, h);
            const double weight = ((j == 0 || j == m) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0)) * h / 3.0;
            first += weight * node;
            second += weight * node.cwiseProduct(node);
        }
    };

    Vector state = skeleton.initial_state;
    double prev = 0.0;
    for (const Event& e : skeleton.events) {
        accumulate_segment(state, e.time - prev);
        state = e.post;
        prev = e.time;
    }
    accumulate_segment(state, skeleton.horizon - prev);

    TimeAverages out;
    out.mean = first / skeleton.horizon;
    out.second_moment = second / skeleton.horizon;
    return out;
}

}  // namespace pdmp

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pdmp/samplers.hpp"
#include "pdmp/skeleton_io.hpp"

using namespace pdmp;

namespace {

PdmpSpec zigzag_2d() {
    SamplerConfig config;
    config.target = gaussian_potential(Vector::Zero(2), Matrix::Identity(2, 2));
    config.variant = SamplerVariant::zigzag;
    return build_zigzag(config);
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("skeleton JSONL round-trips exactly") {
    const PdmpSpec spec = zigzag_2d();
    Rng rng(101);
    Vector z0(4);
    z0 << 0.1, -0.3, 1.0, -0.8;
    const EventSkeleton skeleton = simulate_skeleton(spec, z0, 8.0, rng);
    REQUIRE(!skeleton.events.empty());

    const std::string path = temp_path("pdmp_io_test.jsonl");
    write_skeleton_file(path, skeleton, 12345);
    const LoadedSkeleton loaded = read_skeleton_file(path);

    CHECK(loaded.seed == 12345);
    CHECK(loaded.dimension == 4);
    CHECK(loaded.skeleton.horizon == skeleton.horizon);
    CHECK(loaded.skeleton.initial_state == skeleton.initial_state);
    REQUIRE(loaded.skeleton.events.size() == skeleton.events.size());
    for (std::size_t i = 0; i < skeleton.events.size(); ++i) {
        CHECK(loaded.skeleton.events[i].time == skeleton.events[i].time);
        CHECK(loaded.skeleton.events[i].pre == skeleton.events[i].pre);
        CHECK(loaded.skeleton.events[i].post == skeleton.events[i].post);
        CHECK(loaded.skeleton.events[i].clock == skeleton.events[i].clock);
    }

    // A rewrite of the parsed skeleton is byte-identical.
    const std::string path2 = temp_path("pdmp_io_test2.jsonl");
    write_skeleton_file(path2, loaded.skeleton, loaded.seed);
    CHECK(slurp(path) == slurp(path2));
    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("loaded skeleton passes the replay-consistency check") {
    const PdmpSpec spec = zigzag_2d();
    Rng rng(103);
    Vector z0(4);
    z0 << 0.0, 0.0, 1.0, 1.0;
    const EventSkeleton skeleton = simulate_skeleton(spec, z0, 5.0, rng);
    const std::string path = temp_path("pdmp_io_consistency.jsonl");
    write_skeleton_file(path, skeleton, 7);
    const LoadedSkeleton loaded = read_skeleton_file(path);
    CHECK(find_inconsistent_event(loaded.skeleton, spec, 1e-8) == -1);

    // Corrupt one post state: the check names that event.
    EventSkeleton bad = loaded.skeleton;
    const int victim = static_cast<int>(bad.events.size()) / 2;
    bad.events[victim].post[0] += 0.5;
    if (victim + 1 < static_cast<int>(bad.events.size()))
        CHECK(find_inconsistent_event(bad, spec, 1e-8) == victim + 1);
    std::remove(path.c_str());
}

TEST_CASE("dense CSV contains the trajectory on the grid") {
    const PdmpSpec spec = zigzag_2d();
    Rng rng(105);
    Vector z0(4);
    z0 << 0.0, 0.0, 1.0, -1.0;
    const EventSkeleton skeleton = simulate_skeleton(spec, z0, 4.0, rng);
    std::ostringstream out;
    write_dense_csv(out, skeleton, spec, {0.0, 1.0, 2.0});
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "t,z_1,z_2,z_3,z_4");
    std::getline(lines, line);
    CHECK(line.substr(0, 2) == "0,");
    int rows = 1;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("format_double is shortest round-trip") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
    const double pi = 3.141592653589793;
    CHECK(std::stod(format_double(pi)) == pi);
}

TEST_CASE("time averages of the pure flow match the closed form") {
    // No events: q(t) = q0 + t p0, so mean q = q0 + T p0 / 2 and
    // mean q^2 = q0^2 + T q0 p0 + T^2 p0^2 / 3.
    SamplerConfig config;
    config.target = gaussian_potential(Vector::Zero(1), Matrix::Identity(1, 1));
    config.variant = SamplerVariant::lambda_zero;
    const PdmpSpec spec = build_lambda_zero(config);
    Rng rng(107);
    Vector z0(2);
    z0 << 0.5, 2.0;
    const double horizon = 3.0;
    const EventSkeleton skeleton = simulate_skeleton(spec, z0, horizon, rng);
    const TimeAverages avg = skeleton_time_averages(skeleton, spec);
    CHECK(avg.mean[0] == doctest::Approx(0.5 + horizon).epsilon(1e-12));
    CHECK(avg.second_moment[0] ==
          doctest::Approx(0.25 + horizon * 1.0 + horizon * horizon * 4.0 / 3.0).epsilon(1e-12));
    CHECK(avg.mean[1] == doctest::Approx(2.0).epsilon(1e-12));
}

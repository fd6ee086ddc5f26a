#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pdmp/process.hpp"

namespace pdmp {

// One JSON object per line. Header:
//   {"d": int, "z0": [floats], "horizon": float, "seed": int}
// then per event
//   {"k": int, "t": float, "pre": [floats], "post": [floats], "clock": int}
// Doubles are printed in shortest round-trip form, so a rewrite of a parsed
// skeleton is byte-identical.
void write_skeleton(std::ostream& out, const EventSkeleton& skeleton, std::uint64_t seed);
void write_skeleton_file(const std::string& path, const EventSkeleton& skeleton,
                         std::uint64_t seed);

struct LoadedSkeleton {
    EventSkeleton skeleton;
    std::uint64_t seed{0};
    int dimension{0};
};

LoadedSkeleton read_skeleton_file(const std::string& path);

// Dense trajectory export: header "t,z_1,...,z_d", one row per grid time.
void write_dense_csv(std::ostream& out, const EventSkeleton& skeleton, const PdmpSpec& spec,
                     const std::vector<double>& t_grid);
void write_dense_csv_file(const std::string& path, const EventSkeleton& skeleton,
                          const PdmpSpec& spec, const std::vector<double>& t_grid);

// Shortest round-trip decimal representation.
std::string format_double(double value);

// Time averages of z and z^2 over [0, horizon] computed per inter-event
// segment with Simpson nodes (exact for transport flows, where coordinates
// are polynomials of degree <= 1 in t).
struct TimeAverages {
    Vector mean;
    Vector second_moment;
    Vector variance() const { return second_moment - mean.cwiseProduct(mean); }
};
TimeAverages skeleton_time_averages(const EventSkeleton& skeleton, const PdmpSpec& spec,
                                    int nodes_per_segment = 4);

}  // namespace pdmp

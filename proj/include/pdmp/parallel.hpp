#pragma once

#include <cstdint>
#include <functional>

#include "pdmp/rng.hpp"

namespace pdmp {

struct MeanEstimate {
    double estimate{0.0};
    double standard_error{0.0};
    std::size_t samples{0};
};

// Monte Carlo mean with a fixed logical shard layout: shard s draws its own
// Rng::derive(seed, s) stream, so the result is identical for any thread
// count, and shards are reduced in index order. threads <= 0 picks the
// hardware concurrency.
MeanEstimate sharded_mean(std::size_t n_samples, std::uint64_t seed, int shards, int threads,
                          const std::function<double(Rng&)>& draw);

int default_thread_count();

}  // namespace pdmp

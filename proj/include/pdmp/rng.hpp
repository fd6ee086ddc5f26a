#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "pdmp/types.hpp"

namespace pdmp {

// Deterministic random stream. All draws go through explicit formulas on the
// raw 64-bit engine output, so a given seed reproduces the same sequence on
// any platform and replaying a simulation is bit-exact.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent stream for (master seed, stream index), e.g. one per chain
    // or per estimator shard.
    static Rng derive(std::uint64_t master, std::uint64_t stream) {
        return Rng(mix(master, stream));
    }

    // splitmix64 finalizer over the pair.
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t x = a + 0x9e3779b97f4a7c15ULL * (b + 1);
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t raw() { return engine_(); }

    // Uniform on the open interval (0, 1); safe under log().
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential() { return -std::log(uniform()); }

    // Box-Muller, one value per call.
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    Vector normal_vector(int n) {
        Vector v(n);
        for (int i = 0; i < n; ++i) v[i] = normal();
        return v;
    }

    // Uniform integer in [0, n).
    int uniform_index(int n) {
        return static_cast<int>(engine_() % static_cast<std::uint64_t>(n));
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace pdmp

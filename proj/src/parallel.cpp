#include "pdmp/parallel.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pdmp {

int default_thread_count() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

MeanEstimate sharded_mean(std::size_t n_samples, std::uint64_t seed, int shards, int threads,
                          const std::function<double(Rng&)>& draw) {
    if (n_samples == 0) return {};
    shards = std::max(1, std::min<int>(shards, static_cast<int>(n_samples)));
    if (threads <= 0) threads = default_thread_count();
    threads = std::min(threads, shards);

    struct ShardSums {
        double sum = 0.0;
        double sumsq = 0.0;
    };
    std::vector<ShardSums> sums(shards);
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;

    auto worker = [&] {
        try {
            for (int s = next.fetch_add(1); s < shards; s = next.fetch_add(1)) {
                const std::size_t base = n_samples / shards;
                const std::size_t count = base + (static_cast<std::size_t>(s) < n_samples % shards);
                Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(s));
                double sum = 0.0, sumsq = 0.0;
                for (std::size_t i = 0; i < count; ++i) {
                    const double v = draw(rng);
                    sum += v;
                    sumsq += v * v;
                }
                sums[s] = {sum, sumsq};
            }
        } catch (...) {
            std::lock_guard<std::mutex> guard(failure_lock);
            if (!failure) failure = std::current_exception();
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    // Fixed-order reduction keeps the estimate independent of scheduling.
    double sum = 0.0, sumsq = 0.0;
    for (const auto& s : sums) {
        sum += s.sum;
        sumsq += s.sumsq;
    }
    const double n = static_cast<double>(n_samples);
    const double mean = sum / n;
    double variance = 0.0;
    if (n_samples > 1) variance = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(variance / n), n_samples};
}

}  // namespace pdmp

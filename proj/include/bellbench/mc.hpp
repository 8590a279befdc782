#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "bellbench/rng.hpp"

namespace bellbench {

// Base chunk size: the sample-to-chunk partition is a pure function of
// n_samples (never of the thread count), or determinism would be lost. For
// very large runs the chunk grows so the per-chunk bookkeeping stays bounded.
inline constexpr std::int64_t mc_chunk_samples = 1 << 14;
inline constexpr std::int64_t mc_max_chunks = 1 << 16;

inline std::int64_t mc_chunk_size_for(std::int64_t n_samples) {
    const std::int64_t needed = (n_samples + mc_max_chunks - 1) / mc_max_chunks;
    return std::max(mc_chunk_samples, needed);
}

struct MeanAccumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::int64_t count = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++count;
    }

    void merge(const MeanAccumulator& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        count += o.count;
    }

    double mean() const { return sum / static_cast<double>(count); }

    // Sample standard deviation of the mean.
    double std_error() const {
        if (count < 2) return 0.0;
        const double n = static_cast<double>(count);
        const double var = (sum_sq - sum * sum / n) / (n - 1.0);
        return std::sqrt(std::max(var, 0.0) / n);
    }
};

// Runs body(rng, acc) once per sample. Samples are split into fixed-size
// chunks; chunk c draws from RNG stream c of `seed` and fills its own
// accumulator slot, and slots are merged in chunk order. The result is
// therefore a pure function of (n_samples, seed, body) for any thread count.
template <typename Acc, typename Body>
Acc run_chunked(std::int64_t n_samples, std::uint64_t seed, unsigned n_threads, Body&& body) {
    if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");

    const std::int64_t chunk = mc_chunk_size_for(n_samples);
    const std::int64_t n_chunks = (n_samples + chunk - 1) / chunk;
    std::vector<Acc> slots(static_cast<std::size_t>(n_chunks));

    auto run_chunk = [&](std::int64_t c) {
        Xoshiro256pp rng(seed, static_cast<std::uint64_t>(c));
        Acc acc;
        const std::int64_t hi = std::min(n_samples, (c + 1) * chunk);
        for (std::int64_t i = c * chunk; i < hi; ++i) body(rng, acc);
        slots[static_cast<std::size_t>(c)] = acc;
    };

    unsigned workers = n_threads;
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<std::int64_t>(workers, n_chunks));

    if (workers <= 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::int64_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                std::int64_t c;
                while ((c = next.fetch_add(1)) < n_chunks) {
                    try {
                        run_chunk(c);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    Acc total;
    for (const auto& s : slots) total.merge(s);
    return total;
}

}  // namespace bellbench

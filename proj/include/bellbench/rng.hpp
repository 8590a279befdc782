#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace bellbench {

// SplitMix64: a counter-based generator. The state walks a 64-bit counter in
// steps of the golden-ratio increment; each output is a strong mix of the
// counter value, so any window of the counter sequence yields decorrelated
// words. Used here to expand (seed, stream) pairs into generator state.
class SplitMix64 {
  public:
    explicit constexpr SplitMix64(std::uint64_t state) : state_(state) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

// xoshiro256++ seeded from SplitMix64. Stream splitting: stream k of a master
// seed draws its four state words from the disjoint SplitMix64 counter window
// [4k, 4k+4). Chunked samplers key the stream index to the chunk index, which
// makes every Monte Carlo result bit-identical for any thread count.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) : Xoshiro256pp(seed, 0) {}

    Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) {
        SplitMix64 sm(seed + 4 * stream * 0x9E3779B97F4A7C15ull);
        for (auto& word : s_) word = sm.next();
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero state is invalid
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller.
    double next_gaussian() {
        const double u = 1.0 - next_unit();  // (0, 1], keeps the log finite
        const double v = next_unit();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
    }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_;
};

}  // namespace bellbench

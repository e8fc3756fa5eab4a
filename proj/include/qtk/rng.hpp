#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qtk {

/// Seeded pseudo-random source. Never global: every randomized operation takes
/// either a seed or an Rng explicitly.
///
/// Built on std::mt19937_64 and std::seed_seq, both of which are fully
/// specified by the standard, so streams are identical across toolchains.
/// uniform() derives doubles from the raw 64-bit output for the same reason.
class Rng {
   public:
    explicit Rng(uint64_t seed) : engine_(make_seq(seed, UINT64_MAX)) {
    }

    /// Child stream `index` of `seed`. Distinct indices give independent streams.
    static Rng split(uint64_t seed, uint64_t index) {
        return Rng(seed, index);
    }

    /// Seed of child stream `index`, for APIs that take a bare seed.
    static uint64_t split_seed(uint64_t seed, uint64_t index) {
        return Rng(seed, index).next_u64();
    }

    uint64_t next_u64() {
        return engine_();
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [lo, hi], by rejection.
    uint64_t uniform_int(uint64_t lo, uint64_t hi) {
        uint64_t span = hi - lo + 1;
        if (span == 0) {
            return engine_();
        }
        uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return lo + v % span;
    }

    /// Standard normal variate (Box-Muller).
    double normal() {
        double u1 = 1.0 - uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

   private:
    Rng(uint64_t seed, uint64_t index) : engine_(make_seq(seed, index)) {
    }

    static std::mt19937_64 make_seq(uint64_t seed, uint64_t index) {
        std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                          static_cast<uint32_t>(index), static_cast<uint32_t>(index >> 32)};
        return std::mt19937_64(seq);
    }

    std::mt19937_64 engine_;
};

}  // namespace qtk

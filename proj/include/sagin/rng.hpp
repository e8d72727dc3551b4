#pragma once

#include <cstdint>
#include <random>

namespace sagin {

/// Deterministic random source. std::mt19937_64 output is fixed by the
/// standard, and the value mappings below are written out explicitly so the
/// same seed yields byte-identical draws on every platform (the std::
/// distributions make no such promise).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform double in [lo, hi) from the top 53 bits.
    double uniform(double lo, double hi) {
        double u = (eng_() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    /// Uniform integer in [lo, hi], unbiased (Lemire multiply-shift rejection).
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t span = hi - lo + 1;
        if (span == 0) return eng_();  // [0, 2^64)
        __uint128_t m = static_cast<__uint128_t>(eng_()) * span;
        auto low = static_cast<std::uint64_t>(m);
        if (low < span) {
            std::uint64_t cutoff = (0 - span) % span;
            while (low < cutoff) {
                m = static_cast<__uint128_t>(eng_()) * span;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return lo + static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace sagin

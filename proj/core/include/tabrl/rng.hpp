#pragma once

#include <cmath>
#include <cstdint>

namespace tabrl {

/// Counter-based SplitMix64 stream with reproducible sub-stream derivation.
///
/// A stream is identified by its origin seed. `child(key)` derives a new
/// stream from the origin (not the current counter), so the derived sequence
/// depends only on (master seed, derivation path) and never on how many draws
/// the parent has made. Distinct derivation paths give independent streams.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : origin_(seed), state_(seed) {}

    // SplitMix64 finalizer (Steele, Lea & Flood 2014; Vigna's constants).
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix(state_);
    }

    /// Derive the sub-stream for `key`. Keys 0,1,2,... map to disjoint
    /// origins; chained calls encode a derivation path.
    RngStream child(std::uint64_t key) const {
        return RngStream(mix(origin_ + kGolden * (key + 1)));
    }

    std::uint64_t origin() const { return origin_; }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1].
    double uniform_open01() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t mask = ~std::uint64_t{0} >> __builtin_clzll((n - 1) | 1);
        for (;;) {
            std::uint64_t v = next_u64() & mask;
            if (v < n) return v;
        }
    }

    /// Exp(1) draw; finite because uniform_open01() is bounded away from 0.
    double exponential() { return -std::log(uniform_open01()); }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    std::uint64_t origin_;
    std::uint64_t state_;
};

}  // namespace tabrl

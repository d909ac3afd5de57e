#pragma once

// SplitMix64 in counter mode. A stream is keyed by hashing (seed, tags...)
// through the SplitMix64 finalizer; within a stream values are produced by
// the ordinary SplitMix64 recurrence. Streams for different tags are
// independent of the order in which they are created, so parallel work split
// by replicate index reproduces the serial result exactly.

#include <cstdint>

namespace spa {

inline constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Child key for `tag` under `key`.
constexpr std::uint64_t derive_key(std::uint64_t key, std::uint64_t tag) {
    return mix64(key ^ mix64(tag + kGolden64));
}

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t key) : state_(key) {}

    constexpr std::uint64_t next() {
        state_ += kGolden64;
        return mix64(state_);
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace spa

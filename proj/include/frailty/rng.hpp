#pragma once

// Counter-based random numbers: every (seed, stream) pair names an
// independent SplitMix64 sequence, so draws for cluster i depend only on the
// seed and i, never on which thread produced them.

#include <cmath>
#include <cstdint>

namespace frailty {

__extension__ using u128 = unsigned __int128;

inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class CounterRng {
public:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(mix64(seed ^ mix64(stream + kGolden))) {}

    std::uint64_t next() noexcept { return mix64(key_ + (++counter_) * kGolden); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) noexcept {
        return static_cast<std::uint64_t>((static_cast<u128>(next()) * n) >> 64);
    }

    std::uint64_t draws() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Derives a child seed for a named purpose (bootstrap, correlation check, ...).
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t purpose) noexcept {
    return mix64(seed + mix64(purpose ^ 0x5851f42d4c957f2dULL));
}

}  // namespace frailty

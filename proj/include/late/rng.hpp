#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace late {

/// Deterministic RNG wrapper. All randomness in the library flows through
/// this class so that a given seed reproduces a run bit-for-bit; the
/// uniform/bounded draws are hand-rolled on top of mt19937_64 rather than
/// <random> distributions, whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform integer in [0, n). Lemire multiply-shift with rejection.
    std::uint64_t bounded(std::uint64_t n) {
        using u128 = unsigned __int128;
        std::uint64_t x = eng_();
        u128 m = static_cast<u128>(x) * static_cast<u128>(n);
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t threshold = -n % n;
            while (lo < threshold) {
                x = eng_();
                m = static_cast<u128>(x) * static_cast<u128>(n);
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

/// Stream-splitting: derive an independent seed from (master, tag, index).
/// Used for per-replication and per-DGP streams so parallel callers never
/// share generator state.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index);

}  // namespace late

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace gumdp {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Hashes an ordered tuple of integers into a 64-bit stream seed.
/// Used to key streams by (master seed, experiment, iteration, trajectory).
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (std::uint64_t p : parts) h = detail::splitmix64(h ^ detail::splitmix64(p));
    return h;
}

/// Seeded random stream. Draws are bit-reproducible across platforms: only the
/// raw engine output is used, never the implementation-defined std distributions.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform index in [0, n).
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
    }

private:
    std::mt19937_64 engine_;
};

/// Inverse-CDF categorical draw. Category i owns [cdf[i-1], cdf[i]), so
/// zero-mass categories are never selected. The last entry of cdf must be 1.
inline std::size_t sample_from_cdf(std::span<const double> cdf, double u) {
    for (std::size_t i = 0; i < cdf.size(); ++i)
        if (u < cdf[i]) return i;
    // u < 1 always; reached only if the cdf tail fell short of 1 by rounding.
    for (std::size_t i = cdf.size(); i-- > 0;)
        if (i == 0 || cdf[i] > cdf[i - 1]) return i;
    return 0;
}

/// Cumulative sums with the tail pinned to exactly 1 from the last positive entry on.
template <typename Range>
void build_cdf(const Range& probs, std::span<double> out) {
    double acc = 0.0;
    std::size_t last_positive = 0;
    std::size_t i = 0;
    for (double p : probs) {
        acc += p;
        out[i] = acc;
        if (p > 0.0) last_positive = i;
        ++i;
    }
    for (std::size_t j = last_positive; j < out.size(); ++j) out[j] = 1.0;
}

}  // namespace gumdp

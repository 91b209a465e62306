#pragma once

#include <bit>
#include <cstdint>
#include <random>

namespace leocdn {

__extension__ using uint128 = unsigned __int128;

/// SplitMix64 finalizer; used to derive independent stream seeds from one root seed.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag,
                                    std::uint64_t index = 0) noexcept {
    return mix64(mix64(mix64(root) ^ tag) ^ index);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag, double t) noexcept {
    return derive_seed(root, tag, std::bit_cast<std::uint64_t>(t));
}

/// mt19937_64 with distribution code pinned here, so draws are identical across
/// standard libraries (std::uniform_*_distribution is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, n); n > 0. Lemire's multiply-and-reject.
    std::uint64_t uniform_index(std::uint64_t n) noexcept {
        uint128 m = static_cast<uint128>(engine_()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<uint128>(engine_()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace leocdn

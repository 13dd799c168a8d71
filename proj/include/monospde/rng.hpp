#pragma once

#include <cstdint>
#include <random>

namespace monospde {

using Rng = std::mt19937_64;

// Stream tags keep ensembles that share a master seed statistically independent.
enum class Stream : std::uint64_t {
    Paths = 1,
    PathsAlt = 2,
    Coupled = 3,
    Sampling = 4,
    Invariant = 5,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seed for path `index` of `stream`; depends only on its arguments, never on
/// which worker runs the path.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master ^ splitmix64(stream)) + index);
}

inline Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t index) {
    return Rng{derive_seed(master, static_cast<std::uint64_t>(stream), index)};
}

}  // namespace monospde

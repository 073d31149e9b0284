#pragma once

// Seeded random streams.
//
// Every random quantity in the library is drawn from an std::mt19937_64
// whose seed is derived from (master seed, purpose, index) through the
// SplitMix64 finalizer. Two streams with different purposes or indices are
// statistically independent, and a stream's values depend on nothing but its
// key, so work split across threads or row blocks reproduces exactly.

#include <cstdint>
#include <random>
#include <string_view>

namespace recal {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// FNV-1a; used only to turn a purpose label into a 64-bit tag.
constexpr std::uint64_t purpose_tag(std::string_view purpose) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : purpose) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose,
                                    std::uint64_t index = 0) noexcept {
    return splitmix64(splitmix64(splitmix64(seed) ^ purpose_tag(purpose)) + index);
}

inline Engine make_stream(std::uint64_t seed, std::string_view purpose, std::uint64_t index = 0) {
    return Engine(derive_seed(seed, purpose, index));
}

// Canonical uniform on [0,1) from the top 53 bits; independent of the
// standard library's distribution implementation.
inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Well-known purpose labels.
namespace stream {
inline constexpr std::string_view covariates = "covariates";
inline constexpr std::string_view outcomes = "outcomes";
inline constexpr std::string_view undersample = "undersample";
inline constexpr std::string_view noise = "noise";
} // namespace stream

} // namespace recal

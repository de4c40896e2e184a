#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

// Counter-based random numbers: every draw is a pure function of a key
// tuple, so results do not depend on iteration order or thread schedule.
// Mixing uses the SplitMix64 finalizer.
namespace gspec::rng {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t hash(std::uint64_t a) noexcept { return mix64(a); }

template <typename... Rest>
constexpr std::uint64_t hash(std::uint64_t a, std::uint64_t b, Rest... rest) noexcept {
    return hash(mix64(a) ^ (b + 0x632be59bd9b4e019ULL + (a << 6) + (a >> 2)), static_cast<std::uint64_t>(rest)...);
}

// Top 53 bits mapped to [0,1).
constexpr double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

template <typename... Keys>
constexpr double uniform(Keys... keys) noexcept {
    return to_unit(hash(static_cast<std::uint64_t>(keys)...));
}

// Standard normal via Box-Muller on two keyed uniforms.
template <typename... Keys>
inline double normal(Keys... keys) noexcept {
    const std::uint64_t base = hash(static_cast<std::uint64_t>(keys)...);
    const double u1 = 1.0 - to_unit(mix64(base ^ 0x1ULL));  // (0,1]
    const double u2 = to_unit(mix64(base ^ 0x2ULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Seed domains keep independent uses of the same user seed decorrelated.
enum Domain : std::uint64_t {
    kUniformBatch = 0x55aa0001,
    kEdges = 0x55aa0002,
    kReplication = 0x55aa0003,
    kLimitLaw = 0x55aa0004,
    kSolverStart = 0x55aa0005,
};

}  // namespace gspec::rng

#pragma once

#include <cstdint>

namespace ghzsense {

/// SplitMix64 finalizer. Used to derive statistically independent sub-seeds
/// from a master seed and a stream index, so each trajectory or repetition
/// owns its own engine regardless of which worker runs it.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(mix64(master + 0x9E3779B97F4A7C15ULL) + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

}  // namespace ghzsense

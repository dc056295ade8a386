#pragma once

#include <cstdint>

namespace credal_cert {

// SplitMix64 finalizer over (base, counter). Gives every Monte-Carlo trial or
// permutation its own stream so results do not depend on execution order.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t counter) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace credal_cert

#pragma once

#include <cstdint>
#include <random>

namespace pcnsim {

using Rng = std::mt19937_64;

// Independent stream tags so that topology, balances, transactions and trees
// never share a generator.
enum class Stream : std::uint64_t { topology = 1, balances = 2, transactions = 3, trees = 4 };

/// splitmix64 finaliser.
constexpr std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t index = 0) {
    return mix_seed(mix_seed(seed ^ mix_seed(static_cast<std::uint64_t>(stream))) + index);
}

}  // namespace pcnsim

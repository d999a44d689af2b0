#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ccs {

/// Hashes (seed, stream ids...) into a single 64-bit state so that parallel
/// trials draw from independent, reproducible generators.
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

std::mt19937_64 make_rng(std::uint64_t seed);
std::mt19937_64 make_rng(std::initializer_list<std::uint64_t> parts);

}  // namespace ccs

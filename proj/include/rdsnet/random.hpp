#pragma once

#include <cstdint>
#include <random>

namespace rdsnet {

using Rng = std::mt19937_64;

/// Independent stream for (master seed, stream index). Replicates and chains
/// take their stream from their index, never from scheduling order.
Rng make_stream(std::uint64_t master_seed, std::uint64_t stream_index);

/// Uniform double in the open interval (0, 1).
double uniform_open(Rng& rng);

/// Uniform integer in [0, bound).
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);

double standard_normal(Rng& rng);

/// Seed drawn from the operating system, for runs without --rng-seed.
std::uint64_t entropy_seed();

}  // namespace rdsnet

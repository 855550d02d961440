#include "rdsnet/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rdsnet {

Rng make_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32), 0x5eed5eedU};
  return Rng(seq);
}

double uniform_open(Rng& rng) {
  // 53 random bits, shifted off zero by half an ulp of the grid.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_index: empty range");
  // Reject the biased tail so the modulo is exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

double standard_normal(Rng& rng) {
  // Marsaglia polar method; the second variate is dropped so a draw only
  // depends on the stream position.
  double u, v, s;
  do {
    u = 2.0 * uniform_open(rng) - 1.0;
    v = 2.0 * uniform_open(rng) - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  return u * std::sqrt(-2.0 * std::log(s) / s);
}

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace rdsnet

#include "sinai/seeding.hpp"

#include <cmath>
#include <limits>

namespace sinai {

std::uint64_t probability_threshold(double p) noexcept {
  if (p <= 0.0) return 0;
  if (p >= 1.0) return std::numeric_limits<std::uint64_t>::max();
  // p * 2^64, rounded to nearest; exact for dyadic p such as 1/2.
  const long double scaled = std::ldexp(static_cast<long double>(p), 64);
  const long double rounded = std::nearbyint(scaled);
  if (rounded >= std::ldexp(1.0L, 64)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(rounded);
}

}  // namespace sinai

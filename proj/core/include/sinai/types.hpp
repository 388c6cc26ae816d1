#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sinai {

/// Lattice coordinate.
using Site = std::int64_t;

/// Inclusive range of lattice sites [lo, hi].
struct SiteRange {
  Site lo = 0;
  Site hi = 0;

  [[nodiscard]] constexpr bool contains(Site k) const noexcept { return lo <= k && k <= hi; }
  [[nodiscard]] constexpr bool contains(const SiteRange& other) const noexcept {
    return lo <= other.lo && other.hi <= hi;
  }
  [[nodiscard]] constexpr std::size_t size() const noexcept {
    return hi < lo ? 0 : static_cast<std::size_t>(hi - lo + 1);
  }
  friend constexpr bool operator==(const SiteRange&, const SiteRange&) = default;
};

/// Invalid model parameters (p = 1/2, eta0 outside (0, 1/2), ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation called outside its domain (T > n, shrinking window, ...).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Iterated natural logarithms: log2(n) = log log n, log3(n) = log log log n.
[[nodiscard]] inline double log_n(double n) { return std::log(n); }
[[nodiscard]] inline double log2_n(double n) { return std::log(std::log(n)); }
[[nodiscard]] inline double log3_n(double n) { return std::log(std::log(std::log(n))); }

/// Depth threshold of the basic valley: log n + gamma * log log n.
[[nodiscard]] inline double capital_gamma(double n, double gamma) { return log_n(n) + gamma * log2_n(n); }

/// Smallest n for which log log log n > 0 (n > e^e).
inline constexpr std::uint64_t kMinimumSteps = 16;

/// Tie-break rule used throughout: smaller |k| wins, and between +k and -k the
/// nonnegative one wins.
[[nodiscard]] constexpr bool closer_to_origin(Site a, Site b) noexcept {
  const Site abs_a = a < 0 ? -a : a;
  const Site abs_b = b < 0 ? -b : b;
  if (abs_a != abs_b) return abs_a < abs_b;
  return a > b;
}

}  // namespace sinai

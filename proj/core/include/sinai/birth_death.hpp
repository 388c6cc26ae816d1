#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "sinai/environment.hpp"
#include "sinai/types.hpp"

namespace sinai {

/// S_to - S_from = sum_{from < i <= to} eps_i (sign-flipped when to < from).
[[nodiscard]] double potential_difference(const Environment& env, Site from, Site to);

/// E_m[L(k, T_m)] by the closed form
///   (alpha_m / beta_k) e^{-(S_k - S_m)} a_{k,m},
///   a_{k,m} = (sum_{m<i<k} e^{S_i} + e^{S_k}) / (sum_{m<i<k} e^{S_i} + e^{S_m}),
/// for k > m; k < m uses the same expression on the chain reflected about m,
/// and k = m returns 1. This is evaluated literally; see
/// expected_local_time_green for the first-principles value.
[[nodiscard]] double expected_local_time_paper(const Environment& env, Site m, Site k);

/// Expected number of visits to k during times 1..T_m for the chain started
/// at m (T_m the first return), from the linear system
///   h(x) = 1{x = k} + alpha_x h(x+1) + beta_x h(x-1),  x != m,  h(m) = 0,
/// on [m - half_width, m + half_width] with reflecting ends; the result is
/// alpha_m h(m+1) + beta_m h(m-1) (+1 when k = m, the returning visit).
/// Requires half_width >= 1 and k inside the interval.
[[nodiscard]] double expected_local_time_green(const Environment& env, Site m, Site k, Site half_width);

/// Same, on the smallest interval that leaves the answer unchanged.
[[nodiscard]] double expected_local_time_green(const Environment& env, Site m, Site k);

/// 2 E^2 e^{S_{M_k} - S_m} |k - m| / beta_k with E from the Green solve and
/// S_{M_k} the maximum of S strictly between m and k (S_m when that range is
/// empty). k < m is handled on the reflected chain. Requires k != m.
[[nodiscard]] double variance_bound(const Environment& env, Site m, Site k);

struct EllipticityBand {
  double value = 0.0;  // (alpha_m / beta_k) a_{k,m}
  double lower = 0.0;  // eta0 / (1 - eta0)
  double upper = 0.0;  // 1 / eta0
  bool ok = false;
};

[[nodiscard]] EllipticityBand ellipticity_band(const Environment& env, Site m, Site k);

/// sum_{l in A} E_m[L(l, T_m)], by one tridiagonal solve with the indicator
/// of A on the right-hand side.
[[nodiscard]] double sa_weight(const Environment& env, Site m, std::span<const Site> sites);
[[nodiscard]] double sa_weight(const Environment& env, Site m, SiteRange sites);

struct ExcursionStats {
  std::uint64_t reps = 0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  double variance = 0.0;         // unbiased sample variance
  double stderr_variance = 0.0;  // delta-method standard error of `variance`
  std::uint64_t capped = 0;      // excursions stopped at the step cap
};

struct ExcursionOptions {
  /// Reflecting interval [m - w, m + w]; default is the tightest interval
  /// [min(m,k) - 1, max(m,k) + 1], which leaves the law of L(k, T_m) intact.
  std::optional<Site> half_width;
  std::uint64_t step_cap = 1'000'000'000;
  unsigned threads = 1;
};

/// Monte Carlo over `reps` independent excursions from m, counting visits to
/// k at times 1..T_m (a returning visit to m counts when k = m).
[[nodiscard]] ExcursionStats mc_excursion_local_time(const Environment& env, Site m, Site k, std::uint64_t reps,
                                                     std::uint64_t seed, const ExcursionOptions& options = {});

/// One row of an oracle sweep: closed form, Green value, bound and band,
/// with optional Monte Carlo arbitration.
struct OracleRecord {
  Site m = 0;
  Site k = 0;
  double expected_paper = 0.0;
  double expected_green = 0.0;
  std::optional<ExcursionStats> mc;
  std::optional<double> variance_bound;  // absent when k = m
  std::optional<EllipticityBand> band;   // absent when k = m
};

/// Evaluates every oracle quantity at (m, k); `mc_reps` = 0 skips Monte Carlo.
[[nodiscard]] OracleRecord oracle_record(const Environment& env, Site m, Site k, std::uint64_t mc_reps,
                                         std::uint64_t seed, const ExcursionOptions& options = {});

}  // namespace sinai

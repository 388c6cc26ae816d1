#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sinai/environment.hpp"
#include "sinai/types.hpp"
#include "sinai/walk.hpp"

namespace sinai {

/// Sites visited at least `threshold` times during T_{k*}..n.
struct LGammaSet {
  FavoriteSites favorites;
  Site k_star = 0;
  std::uint64_t t_k_star = 0;
  double threshold = 0.0;  // (log n)^gamma, or the override
  bool overridden = false;
  std::vector<Site> sites;  // ascending
  SiteCounts post_counts;   // visits during T_{k*}..n
};

/// Two passes over the run: the ledger gives F_n, k* and T_{k*}; a replay from
/// T_{k*} gives the post-hit counts. `threshold_override` replaces (log n)^gamma
/// by an absolute count. Requires n >= kMinimumSteps and gamma > 0.
[[nodiscard]] LGammaSet l_gamma_set(const WalkRun& run, double gamma,
                                    std::optional<double> threshold_override = std::nullopt);

struct EstimateRow {
  Site k = 0;
  std::uint64_t l_kn = 0;        // L(k, n)
  std::uint64_t post_count = 0;  // visits during T_{k*}..n
  bool in_l_gamma = false;
  double s_hat = 0.0;            // log L(k, n) / log n
};

struct EstimateTable {
  std::uint64_t n = 0;
  double gamma = 0.0;
  double c0 = 0.0;
  double u_n = 0.0;
  double threshold = 0.0;
  Site k_star = 0;
  std::uint64_t t_k_star = 0;
  std::vector<EstimateRow> rows;  // visited sites only, ascending
  std::vector<Site> l_gamma;      // ascending

  [[nodiscard]] const EstimateRow* row(Site k) const;
};

/// c0 log log log n / log n.
[[nodiscard]] double error_half_width(std::uint64_t n, double c0);

[[nodiscard]] EstimateTable estimate_table(const WalkRun& run, double gamma, double c0,
                                           std::optional<double> threshold_override = std::nullopt);

/// S^n_k = 1 - (S_k - S_{m_n}) / log n over the potential's window.
class TargetProfile {
 public:
  TargetProfile(const PotentialPath& s, Site m_n, std::uint64_t n);
  [[nodiscard]] Site m_n() const noexcept { return m_n_; }
  [[nodiscard]] std::uint64_t n() const noexcept { return n_; }
  [[nodiscard]] SiteRange window() const noexcept { return window_; }
  [[nodiscard]] double operator()(Site k) const { return values_.at(static_cast<std::size_t>(k - window_.lo)); }

 private:
  SiteRange window_;
  Site m_n_ = 0;
  std::uint64_t n_ = 0;
  std::vector<double> values_;
};

[[nodiscard]] TargetProfile target_profile(const PotentialPath& s, Site m_n, std::uint64_t n);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares of y on x. A single point (or constant x) gives
/// slope 0 and the mean of y as intercept. Requires equal, nonempty inputs.
[[nodiscard]] LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

struct SiteDifference {
  Site k = 0;
  double target = 0.0;
  double s_hat = 0.0;
  double diff = 0.0;  // target - s_hat
};

struct ReconstructionReport {
  bool empty = true;
  double sup_error = 0.0;  // max |diff| over L_n^gamma; 0 when empty
  double u_n = 0.0;
  bool within_band = false;
  std::vector<SiteDifference> diffs;  // over L_n^gamma, ascending
  LinearFit fit;
  double coverage = 0.0;  // L(L_n^gamma, n) / n
  std::size_t l_gamma_size = 0;
  double l_size_ratio = 0.0;  // |L_n^gamma| / (log n)^2
  bool connected = false;     // L_n^gamma is an integer interval
  Site m_n_to_kstar_distance = 0;
};

/// Compares the estimate with the profile on L_n^gamma. Sites of L_n^gamma
/// outside the profile window throw UsageError.
[[nodiscard]] ReconstructionReport reconstruction_error(const EstimateTable& table, const TargetProfile& profile);

struct BottomLocalization {
  Site k_star = 0;
  std::uint64_t t_k_star = 0;
  std::optional<Site> max_favorite_distance;  // max_{x in F_n} |m_n - x|
  std::optional<std::uint64_t> t_gap;         // |T_{m_n} - T_{k*}|
  bool m_n_visited = false;
  double distance_bound = 0.0;  // (log log n)^2
  double time_bound = 0.0;      // (log n)^3
  [[nodiscard]] bool distance_ok() const noexcept {
    return max_favorite_distance && static_cast<double>(*max_favorite_distance) <= distance_bound;
  }
  [[nodiscard]] bool time_ok() const noexcept { return t_gap && static_cast<double>(*t_gap) <= time_bound; }
};

[[nodiscard]] BottomLocalization localize_bottom(const WalkRun& run, std::optional<Site> true_m_n = std::nullopt);

}  // namespace sinai

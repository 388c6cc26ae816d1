#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sinai/environment.hpp"
#include "sinai/types.hpp"

namespace sinai {

/// Sites {M', m, M''} with M' <= m <= M''.
struct ValleyTriple {
  Site left = 0;
  Site bottom = 0;
  Site right = 0;
  friend constexpr bool operator==(const ValleyTriple&, const ValleyTriple&) = default;
};

/// S_{M'} = max_[M',m] S, S_{M''} = max_[m,M''] S and S_m = min_[M',M''] S,
/// compared exactly.
[[nodiscard]] bool is_valley(const PotentialPath& s, const ValleyTriple& v);

/// min(S_{M'} - S_m, S_{M''} - S_m). Throws UsageError if `v` is not a valley.
[[nodiscard]] double depth(const PotentialPath& s, const ValleyTriple& v);

/// Result of a refinement: the deepest descent inside one flank of a valley.
struct Refinement {
  Site bottom = 0;    // m1
  Site barrier = 0;   // M1
  double drop = 0.0;  // S_{M1} - S_{m1}
  bool degenerate = false;
};

/// Maximizes S_{t'} - S_{t''} over m <= t' <= t'' <= M'' and returns
/// (m1, M1) = (t'', t') with m <= M1 < m1 <= M''. Ties: smallest |m1|, then
/// smallest |M1|. A flank without any descent gives {m, m, 0, degenerate}.
[[nodiscard]] Refinement refine_right(const PotentialPath& s, const ValleyTriple& v);
/// Mirror of refine_right on [M', m]: M' <= m1 < M1 <= m.
[[nodiscard]] Refinement refine_left(const PotentialPath& s, const ValleyTriple& v);

/// Evaluation of the three conditions for "contains 0 and has depth >= Gamma_n".
struct DepthConditions {
  bool contains_origin = false;
  bool deep_enough = false;
  bool side_condition = false;
  double depth = 0.0;
  /// m < 0: S_{M''} - max_[m,0] S; m > 0: S_{M'} - max_[0,m] S; +inf when m = 0.
  double side_margin = 0.0;
  [[nodiscard]] bool all() const noexcept { return contains_origin && deep_enough && side_condition; }
};

[[nodiscard]] DepthConditions evaluate_conditions(const PotentialPath& s, const ValleyTriple& v,
                                                  std::uint64_t n, double gamma);

struct BasicValley {
  ValleyTriple triple;  // {M_n', m_n, M_n}
  std::uint64_t n = 0;
  double gamma = 0.0;
  double capital_gamma_n = 0.0;
  double depth = 0.0;
  bool side_condition_ok = false;
  double side_margin = 0.0;
};

struct ValleySearch {
  std::optional<BasicValley> valley;
  std::string failure;  // empty on success
  [[nodiscard]] explicit operator bool() const noexcept { return valley.has_value(); }
};

/// Bottom-anchored barriers: M_n' and M_n computed from a candidate bottom by
/// the sign-split first-passage formulas. nullopt when either set is empty
/// inside the potential window.
[[nodiscard]] std::optional<ValleyTriple> barriers_from_bottom(const PotentialPath& s, Site bottom,
                                                               std::uint64_t n, double gamma);

/// Smallest valley containing 0 with depth >= Gamma_n = log n + gamma log log n.
///
/// (a) scan outward from 0 to the first Gamma_n rise above the running minimum
///     on each side and take the lowest site between them as the candidate
///     bottom, moving to a lower site whenever the bottom-anchored barriers
///     reveal one;
/// (b) replace the valley by any left/right refinement sub-valley that still
///     satisfies the three conditions, then by its bottom-anchored barriers,
///     until neither step changes it;
/// (c) return {M_n', m_n, M_n}.
/// Fails (no valley) when a scan leaves the potential window.
[[nodiscard]] ValleySearch find_basic_valley(const PotentialPath& s, std::uint64_t n, double gamma);

struct ValleyCheck {
  bool ok = false;
  bool minimality_checked = false;
  std::string reason;
  [[nodiscard]] explicit operator bool() const noexcept { return ok; }
};

/// Independent brute-force checker: valley equalities, bottom tie rule,
/// conditions 1-3, barrier formulas, and (for valleys up to
/// `exhaustive_limit` sites wide) that no refinement sub-valley over all
/// maximal-drop pairs also satisfies conditions 1-3.
[[nodiscard]] ValleyCheck is_valid_basic_valley(const PotentialPath& s, const BasicValley& bv, std::uint64_t n,
                                                double gamma, std::size_t exhaustive_limit = 5000);

/// V_n^gamma: sites k in [M_n', M_n] whose barrier max over [k, m_n] (or
/// [m_n, k]) minus S_{m_n} is below log n - (gamma/2) log log n, plus m_n.
/// Ascending.
[[nodiscard]] std::vector<Site> v_gamma_set(const PotentialPath& s, const BasicValley& bv, std::uint64_t n,
                                            double gamma);

/// Maximal runs of consecutive sites in an ascending site list.
[[nodiscard]] std::vector<SiteRange> site_runs(const std::vector<Site>& sites);

/// d0 (log log n log n / sigma)^2, the valley window scale.
[[nodiscard]] double valley_window_bound(std::uint64_t n, double sigma, double d0);

struct GoodEnvReport {
  bool basic_valley_exists = false;
  bool window_bound_ok = false;
  bool sa_weight_ok = false;
  double sa_weight = 0.0;        // sum over W_n of E_{m_n}[L(l, T_{m_n})]
  double sa_weight_bound = 0.0;  // d1 (log log n)^2
  double window_bound = 0.0;     // d0 (log log n log n / sigma)^2
  double d0 = 0.0;
  double d1 = 0.0;
  std::optional<BasicValley> valley;
  [[nodiscard]] bool good() const noexcept { return basic_valley_exists && window_bound_ok && sa_weight_ok; }
};

/// Evaluates the good-environment properties for one environment. The valley
/// is searched in a window twice the size of the bound so that the bound
/// itself is a meaningful check; the environment is extended as needed.
[[nodiscard]] GoodEnvReport good_environment_check(const Environment& env, std::uint64_t n, double gamma, double d0,
                                                   double d1);

}  // namespace sinai

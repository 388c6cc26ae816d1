#include "sinai/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sinai/birth_death.hpp"

namespace sinai {
namespace {

bool in_window(const PotentialPath& s, const ValleyTriple& v) {
  const SiteRange w = s.window();
  return v.left <= v.bottom && v.bottom <= v.right && w.contains(v.left) && w.contains(v.right);
}

double max_over(const PotentialPath& s, Site a, Site b) {
  double m = -std::numeric_limits<double>::infinity();
  for (Site t = a; t <= b; ++t) m = std::max(m, s[t]);
  return m;
}

/// Lowest site of [a, b]; ties go to the site closest to 0.
Site argmin_over(const PotentialPath& s, Site a, Site b) {
  Site best = a;
  for (Site t = a + 1; t <= b; ++t) {
    if (s[t] < s[best] || (s[t] == s[best] && closer_to_origin(t, best))) best = t;
  }
  return best;
}

/// Deepest descent walking away from `from` towards `to` (step +1 or -1):
/// barrier is the running argmax between `from` and the bottom.
Refinement refine_flank(const PotentialPath& s, Site from, Site to) {
  const Site dir = to >= from ? 1 : -1;
  Refinement best{from, from, 0.0, true};
  Site argmax = from;
  for (Site t = from;; t += dir) {
    if (s[t] > s[argmax] || (s[t] == s[argmax] && closer_to_origin(t, argmax))) argmax = t;
    const double drop = s[argmax] - s[t];
    if (drop > 0.0 && argmax != t) {
      const bool better = best.degenerate || drop > best.drop ||
                          (drop == best.drop && (closer_to_origin(t, best.bottom) ||
                                                 (t == best.bottom && closer_to_origin(argmax, best.barrier))));
      if (better) best = {t, argmax, drop, false};
    }
    if (t == to) break;
  }
  return best;
}

/// Valley with the bottom re-chosen by the tie rule; nullopt if that breaks
/// the valley equalities.
std::optional<ValleyTriple> normalized(const PotentialPath& s, ValleyTriple v) {
  v.bottom = argmin_over(s, v.left, v.right);
  if (!is_valley(s, v)) return std::nullopt;
  return v;
}

}  // namespace

bool is_valley(const PotentialPath& s, const ValleyTriple& v) {
  if (!in_window(s, v)) return false;
  double lo = std::numeric_limits<double>::infinity();
  for (Site t = v.left; t <= v.right; ++t) lo = std::min(lo, s[t]);
  return s[v.left] == max_over(s, v.left, v.bottom) && s[v.right] == max_over(s, v.bottom, v.right) &&
         s[v.bottom] == lo;
}

double depth(const PotentialPath& s, const ValleyTriple& v) {
  if (!is_valley(s, v)) throw UsageError("depth: triple is not a valley of this potential");
  return std::min(s[v.left] - s[v.bottom], s[v.right] - s[v.bottom]);
}

Refinement refine_right(const PotentialPath& s, const ValleyTriple& v) {
  if (!is_valley(s, v)) throw UsageError("refine_right: triple is not a valley of this potential");
  if (v.bottom == v.right) return {v.bottom, v.bottom, 0.0, true};
  return refine_flank(s, v.bottom, v.right);
}

Refinement refine_left(const PotentialPath& s, const ValleyTriple& v) {
  if (!is_valley(s, v)) throw UsageError("refine_left: triple is not a valley of this potential");
  if (v.bottom == v.left) return {v.bottom, v.bottom, 0.0, true};
  return refine_flank(s, v.bottom, v.left);
}

DepthConditions evaluate_conditions(const PotentialPath& s, const ValleyTriple& v, std::uint64_t n,
                                    double gamma) {
  DepthConditions c;
  if (!in_window(s, v)) return c;
  const double nn = static_cast<double>(n);
  c.contains_origin = v.left <= 0 && 0 <= v.right;
  c.depth = std::min(s[v.left] - s[v.bottom], s[v.right] - s[v.bottom]);
  c.deep_enough = c.depth >= capital_gamma(nn, gamma);
  if (v.bottom == 0) {
    c.side_margin = std::numeric_limits<double>::infinity();
  } else if (!s.window().contains(0)) {
    c.side_margin = -std::numeric_limits<double>::infinity();
  } else if (v.bottom < 0) {
    c.side_margin = s[v.right] - max_over(s, v.bottom, 0);
  } else {
    c.side_margin = s[v.left] - max_over(s, 0, v.bottom);
  }
  c.side_condition = c.side_margin >= gamma * log2_n(nn);
  return c;
}

std::optional<ValleyTriple> barriers_from_bottom(const PotentialPath& s, Site bottom, std::uint64_t n,
                                                 double gamma) {
  const SiteRange w = s.window();
  if (!w.contains(bottom) || !w.contains(0)) return std::nullopt;
  const double nn = static_cast<double>(n);
  const double big = capital_gamma(nn, gamma);
  const double margin = gamma * log2_n(nn);
  const double sm = s[bottom];

  ValleyTriple v{0, bottom, 0};
  bool found_left = false;
  bool found_right = false;
  if (bottom > 0) {
    const double top = max_over(s, 0, bottom);
    for (Site l = 0; l >= w.lo && !found_left; --l) {
      if (s[l] - sm >= big && s[l] - top >= margin) v.left = l, found_left = true;
    }
    for (Site l = bottom + 1; l <= w.hi && !found_right; ++l) {
      if (s[l] - sm >= big) v.right = l, found_right = true;
    }
  } else if (bottom < 0) {
    const double top = max_over(s, bottom, 0);
    for (Site l = bottom - 1; l >= w.lo && !found_left; --l) {
      if (s[l] - sm >= big) v.left = l, found_left = true;
    }
    for (Site l = 0; l <= w.hi && !found_right; ++l) {
      if (s[l] - sm >= big && s[l] - top >= margin) v.right = l, found_right = true;
    }
  } else {
    for (Site l = -1; l >= w.lo && !found_left; --l) {
      if (s[l] - sm >= big) v.left = l, found_left = true;
    }
    for (Site l = 1; l <= w.hi && !found_right; ++l) {
      if (s[l] - sm >= big) v.right = l, found_right = true;
    }
  }
  if (!found_left || !found_right) return std::nullopt;
  return v;
}

ValleySearch find_basic_valley(const PotentialPath& s, std::uint64_t n, double gamma) {
  if (n < kMinimumSteps) throw UsageError("find_basic_valley needs n >= 16 so that log log log n > 0");
  if (!(gamma > 0.0)) throw UsageError("find_basic_valley needs gamma > 0");
  const SiteRange w = s.window();
  if (!w.contains(0)) throw UsageError("potential window must contain 0");
  const double big = capital_gamma(static_cast<double>(n), gamma);

  // (a) first Gamma_n rise above the running minimum on each side.
  std::optional<Site> right_rise;
  std::optional<Site> left_rise;
  double running_min = s[0];
  for (Site l = 1; l <= w.hi; ++l) {
    running_min = std::min(running_min, s[l]);
    if (s[l] - running_min >= big) {
      right_rise = l;
      break;
    }
  }
  running_min = s[0];
  for (Site l = -1; l >= w.lo; --l) {
    running_min = std::min(running_min, s[l]);
    if (s[l] - running_min >= big) {
      left_rise = l;
      break;
    }
  }
  if (!right_rise || !left_rise) return {std::nullopt, "window cap exceeded during the outward scan"};

  Site bottom = argmin_over(s, *left_rise, *right_rise);
  ValleyTriple current;
  for (;;) {
    const auto anchored = barriers_from_bottom(s, bottom, n, gamma);
    if (!anchored) return {std::nullopt, "window cap exceeded while locating the valley barriers"};
    const Site lowest = argmin_over(s, anchored->left, anchored->right);
    if (lowest == bottom) {
      current = *anchored;
      break;
    }
    bottom = lowest;  // strictly lower, or equally low and closer to 0
  }

  // (b) refine until no sub-valley keeps the three conditions.
  for (;;) {
    std::optional<ValleyTriple> next;
    for (const bool right_side : {true, false}) {
      const Refinement r = right_side ? refine_right(s, current) : refine_left(s, current);
      if (r.degenerate) continue;
      const ValleyTriple outer = right_side ? ValleyTriple{current.left, current.bottom, r.barrier}
                                            : ValleyTriple{r.barrier, current.bottom, current.right};
      const ValleyTriple inner = right_side ? ValleyTriple{r.barrier, r.bottom, current.right}
                                            : ValleyTriple{current.left, r.bottom, r.barrier};
      for (const ValleyTriple& candidate : {inner, outer}) {
        const auto v = normalized(s, candidate);
        if (!v || !evaluate_conditions(s, *v, n, gamma).all()) continue;
        if (!next || s[v->bottom] < s[next->bottom]) next = v;
      }
      if (next) break;
    }
    if (!next) {
      const auto anchored = barriers_from_bottom(s, current.bottom, n, gamma);
      if (anchored && *anchored != current && is_valley(s, *anchored) &&
          evaluate_conditions(s, *anchored, n, gamma).all()) {
        next = anchored;
      }
    }
    if (!next) break;
    current = *next;
  }

  const DepthConditions cond = evaluate_conditions(s, current, n, gamma);
  BasicValley bv;
  bv.triple = current;
  bv.n = n;
  bv.gamma = gamma;
  bv.capital_gamma_n = big;
  bv.depth = cond.depth;
  bv.side_condition_ok = cond.side_condition;
  bv.side_margin = cond.side_margin;
  return {bv, {}};
}

ValleyCheck is_valid_basic_valley(const PotentialPath& s, const BasicValley& bv, std::uint64_t n, double gamma,
                                  std::size_t exhaustive_limit) {
  ValleyCheck check;
  const ValleyTriple& v = bv.triple;
  const SiteRange w = s.window();
  const auto fail = [&](std::string why) {
    check.ok = false;
    check.reason = std::move(why);
    return check;
  };
  if (!(v.left <= v.bottom && v.bottom <= v.right) || !w.contains(v.left) || !w.contains(v.right))
    return fail("triple out of order or outside the potential window");

  // Valley equalities, recomputed from scratch.
  double hi_left = s[v.left], hi_right = s[v.right], lo = s[v.bottom];
  bool valley = true;
  for (Site t = v.left; t <= v.right; ++t) {
    if (t <= v.bottom && s[t] > hi_left) valley = false;
    if (t >= v.bottom && s[t] > hi_right) valley = false;
    if (s[t] < lo) valley = false;
    if (s[t] == lo && t != v.bottom && closer_to_origin(t, v.bottom)) return fail("bottom violates the tie rule");
  }
  if (!valley) return fail("triple is not a valley");

  const double nn = static_cast<double>(n);
  const double big = capital_gamma(nn, gamma);
  const double margin = gamma * log2_n(nn);
  if (!(v.left <= 0 && 0 <= v.right)) return fail("condition 1: valley does not contain 0");
  if (std::min(s[v.left], s[v.right]) - lo < big) return fail("condition 2: depth below Gamma_n");
  if (v.bottom < 0 || v.bottom > 0) {
    double top = -std::numeric_limits<double>::infinity();
    for (Site t = std::min<Site>(v.bottom, 0); t <= std::max<Site>(v.bottom, 0); ++t) top = std::max(top, s[t]);
    const double side = (v.bottom < 0 ? s[v.right] : s[v.left]) - top;
    if (side < margin) return fail("condition 3: side margin below gamma log log n");
  }

  // Barrier formulas by direct set enumeration.
  std::vector<Site> left_set, right_set;
  double top = -std::numeric_limits<double>::infinity();
  for (Site t = std::min<Site>(v.bottom, 0); t <= std::max<Site>(v.bottom, 0); ++t) top = std::max(top, s[t]);
  for (Site l = w.lo; l <= std::min<Site>(0, v.bottom - 1); ++l) {
    const bool side_ok = v.bottom > 0 ? s[l] - top >= margin : true;
    if (s[l] - lo >= big && side_ok) left_set.push_back(l);
  }
  for (Site l = std::max<Site>(0, v.bottom + 1); l <= w.hi; ++l) {
    const bool side_ok = v.bottom < 0 ? s[l] - top >= margin : true;
    if (s[l] - lo >= big && side_ok) right_set.push_back(l);
  }
  if (left_set.empty() || left_set.back() != v.left) return fail("M_n' differs from its defining supremum");
  if (right_set.empty() || right_set.front() != v.right) return fail("M_n differs from its defining infimum");

  if (static_cast<std::size_t>(v.right - v.left + 1) > exhaustive_limit) {
    check.ok = true;
    check.reason = "minimality unchecked: valley wider than the exhaustive limit";
    return check;
  }

  // Every maximal-drop pair on each flank, and both sub-valleys it induces.
  const auto sub_valley_ok = [&](const ValleyTriple& sub) {
    if (!(sub.left <= 0 && 0 <= sub.right)) return false;
    double sub_lo = s[sub.bottom];
    for (Site t = sub.left; t <= sub.right; ++t) {
      if (t <= sub.bottom && s[t] > s[sub.left]) return false;
      if (t >= sub.bottom && s[t] > s[sub.right]) return false;
      if (s[t] < sub_lo) return false;
    }
    if (std::min(s[sub.left], s[sub.right]) - sub_lo < big) return false;
    if (sub.bottom != 0) {
      double sub_top = -std::numeric_limits<double>::infinity();
      for (Site t = std::min<Site>(sub.bottom, 0); t <= std::max<Site>(sub.bottom, 0); ++t)
        sub_top = std::max(sub_top, s[t]);
      if ((sub.bottom < 0 ? s[sub.right] : s[sub.left]) - sub_top < margin) return false;
    }
    return true;
  };
  const auto check_flank = [&](bool right_side) -> bool {
    const Site a = right_side ? v.bottom : v.left;
    const Site b = right_side ? v.right : v.bottom;
    double best = 0.0;
    for (Site i = a; i <= b; ++i)
      for (Site j = i; j <= b; ++j) {
        const double d = right_side ? s[i] - s[j] : s[j] - s[i];
        best = std::max(best, d);
      }
    if (best <= 0.0) return true;
    for (Site i = a; i <= b; ++i)
      for (Site j = i + 1; j <= b; ++j) {
        const double d = right_side ? s[i] - s[j] : s[j] - s[i];
        if (d != best) continue;
        // right: barrier i, bottom j; left: bottom i, barrier j
        const ValleyTriple outer = right_side ? ValleyTriple{v.left, v.bottom, i} : ValleyTriple{j, v.bottom, v.right};
        const ValleyTriple inner = right_side ? ValleyTriple{i, j, v.right} : ValleyTriple{v.left, i, j};
        if (sub_valley_ok(outer) || sub_valley_ok(inner)) return false;
      }
    return true;
  };
  check.minimality_checked = true;
  if (!check_flank(true)) return fail("not minimal: a right refinement keeps conditions 1-3");
  if (!check_flank(false)) return fail("not minimal: a left refinement keeps conditions 1-3");
  check.ok = true;
  return check;
}

std::vector<Site> v_gamma_set(const PotentialPath& s, const BasicValley& bv, std::uint64_t n, double gamma) {
  const double nn = static_cast<double>(n);
  const double limit = log_n(nn) - 0.5 * gamma * log2_n(nn);
  const ValleyTriple& v = bv.triple;
  const double sm = s.at(v.bottom);
  std::vector<Site> left, sites;
  double barrier = sm;
  for (Site k = v.bottom - 1; k >= v.left; --k) {
    barrier = std::max(barrier, s.at(k));
    if (barrier - sm < limit) left.push_back(k);
  }
  sites.assign(left.rbegin(), left.rend());
  sites.push_back(v.bottom);
  barrier = sm;
  for (Site k = v.bottom + 1; k <= v.right; ++k) {
    barrier = std::max(barrier, s.at(k));
    if (barrier - sm < limit) sites.push_back(k);
  }
  return sites;
}

std::vector<SiteRange> site_runs(const std::vector<Site>& sites) {
  std::vector<SiteRange> runs;
  for (Site k : sites) {
    if (!runs.empty() && runs.back().hi + 1 == k) {
      runs.back().hi = k;
    } else {
      runs.push_back({k, k});
    }
  }
  return runs;
}

double valley_window_bound(std::uint64_t n, double sigma, double d0) {
  const double nn = static_cast<double>(n);
  const double scale = log2_n(nn) * log_n(nn) / sigma;
  return d0 * scale * scale;
}

GoodEnvReport good_environment_check(const Environment& env, std::uint64_t n, double gamma, double d0, double d1) {
  GoodEnvReport report;
  report.d0 = d0;
  report.d1 = d1;
  double sigma2;
  if (env.spec()) {
    sigma2 = hypothesis_diagnostics(*env.spec()).sigma2;
  } else {
    double sum = 0.0, sq = 0.0;
    for (double e : env.epsilons()) sum += e, sq += e * e;
    const double count = static_cast<double>(env.epsilons().size());
    sigma2 = sq / count - (sum / count) * (sum / count);
  }
  if (!(sigma2 > 0.0)) throw ConfigError("good_environment_check: environment has zero potential variance");
  report.window_bound = valley_window_bound(n, std::sqrt(sigma2), d0);
  report.sa_weight_bound = d1 * log2_n(static_cast<double>(n)) * log2_n(static_cast<double>(n));

  const auto reach = static_cast<Site>(std::ceil(2.0 * report.window_bound));
  const SiteRange search{std::min(env.window().lo, -reach), std::max(env.window().hi, reach)};
  const Environment wide = env.extended(search);
  const PotentialPath s = potential(wide);
  const ValleySearch found = find_basic_valley(s, n, gamma);
  if (!found) return report;

  report.basic_valley_exists = true;
  report.valley = found.valley;
  const ValleyTriple& v = found.valley->triple;
  report.window_bound_ok = static_cast<double>(v.left) >= -report.window_bound &&
                           static_cast<double>(v.right) <= report.window_bound;
  report.sa_weight = sa_weight(wide, v.bottom, SiteRange{v.left, v.right});
  report.sa_weight_ok = report.sa_weight <= report.sa_weight_bound;
  return report;
}

}  // namespace sinai

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sinai/environment.hpp"
#include "sinai/landscape.hpp"

using namespace sinai;

namespace {

PotentialPath path(Site lo, std::vector<double> values) {
  const SiteRange w{lo, lo + static_cast<Site>(values.size()) - 1};
  return PotentialPath(w, std::move(values));
}

PotentialPath v_shape(Site center, Site lo, Site hi) {
  std::vector<double> v;
  for (Site k = lo; k <= hi; ++k) v.push_back(static_cast<double>(std::abs(k - center)));
  return path(lo, std::move(v));
}

/// O(len^2) scan of all pairs t' <= t'' on one flank.
Refinement brute_refine(const PotentialPath& s, Site from, Site to) {
  Refinement best{from, from, 0.0, true};
  const Site lo = std::min(from, to), hi = std::max(from, to);
  for (Site a = lo; a <= hi; ++a) {
    for (Site b = lo; b <= hi; ++b) {
      // barrier a is between `from` and bottom b
      if (to >= from ? a > b : a < b) continue;
      const double drop = s[a] - s[b];
      if (!(drop > 0.0)) continue;
      const bool better = best.degenerate || drop > best.drop ||
                          (drop == best.drop && (closer_to_origin(b, best.bottom) ||
                                                 (b == best.bottom && closer_to_origin(a, best.barrier))));
      if (better) best = {b, a, drop, false};
    }
  }
  return best;
}

PotentialPath random_lattice_path(std::mt19937_64& rng, Site half) {
  std::vector<double> v(static_cast<std::size_t>(2 * half + 1));
  v[static_cast<std::size_t>(half)] = 0.0;
  for (Site k = 1; k <= half; ++k) {
    v[static_cast<std::size_t>(half + k)] = v[static_cast<std::size_t>(half + k - 1)] + ((rng() & 1) ? 1.0 : -1.0);
    v[static_cast<std::size_t>(half - k)] = v[static_cast<std::size_t>(half - k + 1)] + ((rng() & 1) ? 1.0 : -1.0);
  }
  return path(-half, std::move(v));
}

}  // namespace

TEST(Valley, DepthExamples) {
  const auto s = path(-2, {3, 1, 0, 2, 5});
  EXPECT_TRUE(is_valley(s, {-2, 0, 2}));
  EXPECT_DOUBLE_EQ(depth(s, {-2, 0, 2}), 3.0);
  EXPECT_DOUBLE_EQ(depth(s, {-1, 0, 2}), 1.0);
  EXPECT_FALSE(is_valley(s, {-2, -1, 2}));
  EXPECT_THROW((void)depth(s, {-2, -1, 2}), UsageError);
  EXPECT_FALSE(is_valley(s, {-3, 0, 2}));
}

TEST(Valley, RefinementMatchesBruteForce) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> v(41);
    for (auto& x : v) x = static_cast<double>(rng() % 7);
    // force a valley around the lowest point
    v.front() = 20.0;
    v.back() = 20.0;
    const auto s = path(-20, v);
    Site bottom = -20;
    for (Site k = -20; k <= 20; ++k)
      if (s[k] < s[bottom] || (s[k] == s[bottom] && closer_to_origin(k, bottom))) bottom = k;
    const ValleyTriple tri{-20, bottom, 20};
    ASSERT_TRUE(is_valley(s, tri));
    const auto r = refine_right(s, tri), br = brute_refine(s, bottom, 20);
    EXPECT_EQ(r.bottom, br.bottom);
    EXPECT_EQ(r.barrier, br.barrier);
    EXPECT_EQ(r.degenerate, br.degenerate);
    EXPECT_DOUBLE_EQ(r.drop, br.drop);
    const auto l = refine_left(s, tri), bl = brute_refine(s, bottom, -20);
    EXPECT_EQ(l.bottom, bl.bottom);
    EXPECT_EQ(l.barrier, bl.barrier);
    EXPECT_EQ(l.degenerate, bl.degenerate);
    if (!r.degenerate) {
      EXPECT_LE(bottom, r.barrier);
      EXPECT_LT(r.barrier, r.bottom);
    }
    if (!l.degenerate) {
      EXPECT_LT(l.bottom, l.barrier);
      EXPECT_LE(l.barrier, bottom);
    }
  }
}

TEST(Valley, RefinementMirrors) {
  const auto s = path(-3, {4, 0, 2, 1, 3, 0, 5});
  const ValleyTriple tri{-3, 0, 3};
  ASSERT_FALSE(is_valley(s, tri));  // S_0 = 1 is not the minimum
  const ValleyTriple ok{-3, -2, 3};
  ASSERT_TRUE(is_valley(s, ok));
  const auto m = s.mirrored();
  const ValleyTriple mok{-3, 2, 3};
  ASSERT_TRUE(is_valley(m, mok));
  const auto r = refine_right(s, ok), l = refine_left(m, mok);
  EXPECT_EQ(r.bottom, -l.bottom);
  EXPECT_EQ(r.barrier, -l.barrier);
  EXPECT_DOUBLE_EQ(r.drop, l.drop);
}

TEST(Valley, DegenerateFlank) {
  const auto s = v_shape(0, -4, 4);
  const auto r = refine_right(s, {-4, 0, 4});
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.bottom, 0);
  EXPECT_EQ(r.barrier, 0);
}

TEST(BasicValley, CapitalGamma) {
  EXPECT_NEAR(capital_gamma(5e5, 7.0), 31.14, 0.01);
  EXPECT_NEAR(capital_gamma(5e5, 7.0), std::log(5e5) + 7 * std::log(std::log(5e5)), 1e-12);
}

TEST(BasicValley, HandBuiltVShape) {
  const auto s = v_shape(-5, -60, 60);
  const std::uint64_t n = 500000;
  const auto found = find_basic_valley(s, n, 7.0);
  ASSERT_TRUE(found) << found.failure;
  const auto& v = *found.valley;
  EXPECT_EQ(v.triple.bottom, -5);
  // left: first |k + 5| >= 31.14; right also needs a 18.02 margin over max_[m,0] S = 5
  EXPECT_EQ(v.triple.left, -37);
  EXPECT_EQ(v.triple.right, 27);
  EXPECT_DOUBLE_EQ(v.depth, 32.0);
  EXPECT_TRUE(v.side_condition_ok);
  EXPECT_TRUE(is_valid_basic_valley(s, v, n, 7.0).ok);

  const auto vg = v_gamma_set(s, v, n, 7.0);
  // log n - 3.5 log log n = 4.11
  EXPECT_EQ(vg, (std::vector<Site>{-9, -8, -7, -6, -5, -4, -3, -2, -1}));
  EXPECT_EQ(site_runs(vg).size(), 1u);
}

TEST(BasicValley, WindowTooSmallFails) {
  const auto s = v_shape(0, -20, 20);
  const auto found = find_basic_valley(s, 500000, 7.0);
  EXPECT_FALSE(found);
  EXPECT_FALSE(found.failure.empty());
}

TEST(BasicValley, ArgumentChecks) {
  const auto s = v_shape(0, -60, 60);
  EXPECT_THROW((void)find_basic_valley(s, 10, 1.0), UsageError);
  EXPECT_THROW((void)find_basic_valley(s, 1000, 0.0), UsageError);
  EXPECT_THROW((void)find_basic_valley(v_shape(0, 1, 60), 1000, 1.0), UsageError);
}

TEST(BasicValley, RandomPathsAreValid) {
  std::mt19937_64 rng(5);
  int found_count = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_lattice_path(rng, 400);
    const std::uint64_t n = 1000 + rng() % 50000;
    const double gamma = 0.25 + static_cast<double>(rng() % 8) * 0.5;
    const auto found = find_basic_valley(s, n, gamma);
    if (!found) continue;
    ++found_count;
    const auto check = is_valid_basic_valley(s, *found.valley, n, gamma);
    EXPECT_TRUE(check.ok) << check.reason << " trial " << trial;
  }
  EXPECT_GT(found_count, 100);
}

TEST(BasicValley, CheckerRejectsShallowAndSideViolations) {
  const auto s = v_shape(-5, -60, 60);
  const std::uint64_t n = 500000;
  const auto good = *find_basic_valley(s, n, 7.0).valley;

  auto shallow = good;
  shallow.triple = {-35, -5, 25};  // depth 30 < Gamma_n
  EXPECT_FALSE(is_valid_basic_valley(s, shallow, n, 7.0).ok);
  EXPECT_FALSE(evaluate_conditions(s, shallow.triple, n, 7.0).deep_enough);

  const auto tall = path(-60, [] {
    std::vector<double> v;
    for (Site k = -60; k <= 60; ++k) v.push_back(k <= -5 ? std::abs(k + 5.0) : (k <= 0 ? (k + 5.0) * 8.0 : 40.0));
    return v;
  }());
  // S rises to 40 at 0 then stays flat; bottom -5 with a right barrier only flat above the max
  const ValleyTriple flat{-45, -5, 0};
  const auto fc = evaluate_conditions(tall, flat, n, 7.0);
  EXPECT_TRUE(fc.deep_enough);
  EXPECT_FALSE(fc.side_condition);
  EXPECT_DOUBLE_EQ(fc.side_margin, 0.0);
}

TEST(VGamma, MatchesBruteForce) {
  std::mt19937_64 rng(9);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_lattice_path(rng, 400);
    const std::uint64_t n = 5000;
    const double gamma = 0.5;
    const auto found = find_basic_valley(s, n, gamma);
    if (!found) continue;
    const auto& v = found.valley->triple;
    const double limit = std::log(5000.0) - 0.25 * std::log(std::log(5000.0));
    std::vector<Site> expect;
    for (Site k = v.left; k <= v.right; ++k) {
      double top = s[v.bottom];
      for (Site t = std::min(k, v.bottom); t <= std::max(k, v.bottom); ++t) top = std::max(top, s[t]);
      if (k == v.bottom || top - s[v.bottom] < limit) expect.push_back(k);
    }
    EXPECT_EQ(v_gamma_set(s, *found.valley, n, gamma), expect);
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(VGamma, FlatBottomKeepsWholeValleyBelowLimit) {
  std::vector<double> v(121, 0.0);
  for (Site k = -60; k <= 60; ++k) {
    if (k < -10) v[static_cast<std::size_t>(k + 60)] = static_cast<double>(-10 - k);
    if (k > 10) v[static_cast<std::size_t>(k + 60)] = static_cast<double>(k - 10);
  }
  const auto s = path(-60, v);
  const auto found = find_basic_valley(s, 1000, 1.0);
  ASSERT_TRUE(found) << found.failure;
  EXPECT_EQ(found.valley->triple.bottom, 0);
  const auto vg = v_gamma_set(s, *found.valley, 1000, 1.0);
  // limit = log 1000 - 0.5 log log 1000 = 5.94: sites with |k| <= 15
  EXPECT_EQ(vg.front(), -15);
  EXPECT_EQ(vg.back(), 15);
  EXPECT_EQ(vg.size(), 31u);
}

TEST(SiteRuns, Splits) {
  const auto runs = site_runs({-3, -2, 0, 1, 2, 7});
  ASSERT_EQ(runs.size(), 3u);
  EXPECT_EQ(runs[0], (SiteRange{-3, -2}));
  EXPECT_EQ(runs[1], (SiteRange{0, 2}));
  EXPECT_EQ(runs[2], (SiteRange{7, 7}));
  EXPECT_TRUE(site_runs({}).empty());
}

TEST(GoodEnvironment, SampledTwoPoint) {
  const auto env = sample_environment(EnvironmentSpec{TwoPoint{0.3}, 3}, {-100, 100});
  const auto r = good_environment_check(env, 100000, 0.25, 4.0, 16.0);
  EXPECT_TRUE(r.basic_valley_exists);
  const double ll = std::log(std::log(1e5));
  EXPECT_NEAR(r.window_bound, 4.0 * std::pow(ll * std::log(1e5), 2) / 0.7179, 0.5);
  EXPECT_NEAR(r.sa_weight_bound, 16.0 * ll * ll, 1e-9);
  EXPECT_GE(r.sa_weight, 1.0);
}

TEST(GoodEnvironment, AbsentValley) {
  // Explicit environments extend with alpha = 1/2, which gives a flat potential.
  const auto env = Environment::from_alpha(-2, {0.3, 0.7, 0.3, 0.7, 0.3});
  const auto r = good_environment_check(env, 100000, 1.0, 4.0, 16.0);
  EXPECT_FALSE(r.basic_valley_exists);
  EXPECT_FALSE(r.good());
  EXPECT_FALSE(r.valley.has_value());
}

TEST(GoodEnvironment, FlatEnvironmentRejected) {
  const auto env = Environment::from_alpha(-2, {0.5, 0.5, 0.5});
  EXPECT_THROW((void)good_environment_check(env, 100000, 1.0, 4.0, 16.0), ConfigError);
}

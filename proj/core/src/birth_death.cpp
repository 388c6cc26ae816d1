#include "sinai/birth_death.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "sinai/parallel.hpp"
#include "sinai/seeding.hpp"

namespace sinai {
namespace {

/// The environment itself when it covers `range`, otherwise an extended copy.
Environment covering(const Environment& env, SiteRange range) {
  const SiteRange w = env.window();
  if (w.contains(range)) return env;
  return env.extended({std::min(w.lo, range.lo), std::max(w.hi, range.hi)});
}

/// Per-site alpha/eps accessors for the chain seen from m towards k > m; for
/// k < m the chain is reflected about m (x -> 2m - x swaps alpha and beta).
struct OrientedChain {
  const Environment& env;
  Site m;
  bool reflected;

  [[nodiscard]] double alpha(Site x) const { return reflected ? env.beta(2 * m - x) : env.alpha(x); }
  [[nodiscard]] double beta(Site x) const { return 1.0 - alpha(x); }
  [[nodiscard]] double epsilon(Site x) const { return reflected ? -env.epsilon(2 * m - x) : env.epsilon(x); }
};

struct ClosedFormTerms {
  double ratio = 1.0;      // alpha_m / beta_k
  double a = 1.0;          // a_{k,m}
  double rise = 0.0;       // S_k - S_m
  double barrier = 0.0;    // max_{m<j<k} S_j - S_m, or 0 when empty
};

ClosedFormTerms closed_form_terms(const OrientedChain& chain, Site k) {
  const Site m = chain.m;
  ClosedFormTerms t;
  double rel = 0.0;
  double interior = 0.0;
  bool any_interior = false;
  double barrier = -std::numeric_limits<double>::infinity();
  for (Site i = m + 1; i < k; ++i) {
    rel += chain.epsilon(i);
    interior += std::exp(rel);
    barrier = std::max(barrier, rel);
    any_interior = true;
  }
  rel += chain.epsilon(k);
  t.rise = rel;
  t.a = (interior + std::exp(rel)) / (interior + 1.0);
  t.ratio = chain.alpha(m) / chain.beta(k);
  t.barrier = any_interior ? barrier : 0.0;
  return t;
}

OrientedChain orient(const Environment& env, Site m, Site k) { return {env, m, k < m}; }
Site oriented_target(Site m, Site k) { return k < m ? 2 * m - k : k; }

/// Sum over l of weight(l) * E_m[L(l, T_m)] on [lo, hi] with reflecting ends.
/// Elimination runs inward from each reflecting end, where the increments
/// d_x = h(x) - h(x-1) satisfy d_hi = w(hi), d_x = (w(x) + alpha_x d_{x+1}) / beta_x.
double green_sum(const Environment& env, Site m, SiteRange interval, const std::function<double(Site)>& weight) {
  if (!(interval.lo < m && m < interval.hi)) throw UsageError("green solve needs m strictly inside the interval");
  double right = weight(interval.hi);
  for (Site x = interval.hi - 1; x > m; --x) right = (weight(x) + env.alpha(x) * right) / env.beta(x);
  double left = weight(interval.lo);
  for (Site x = interval.lo + 1; x < m; ++x) left = (weight(x) + env.beta(x) * left) / env.alpha(x);
  return env.alpha(m) * right + env.beta(m) * left + weight(m);
}

}  // namespace

double potential_difference(const Environment& env, Site from, Site to) {
  double sum = 0.0;
  if (to >= from) {
    for (Site i = from + 1; i <= to; ++i) sum += env.epsilon(i);
    return sum;
  }
  for (Site i = to + 1; i <= from; ++i) sum += env.epsilon(i);
  return -sum;
}

double expected_local_time_paper(const Environment& env, Site m, Site k) {
  if (k == m) return 1.0;
  const Environment local = covering(env, {std::min(m, k), std::max(m, k)});
  const ClosedFormTerms t = closed_form_terms(orient(local, m, k), oriented_target(m, k));
  return t.ratio * std::exp(-t.rise) * t.a;
}

double expected_local_time_green(const Environment& env, Site m, Site k, Site half_width) {
  if (half_width < 1) throw UsageError("green oracle needs half_width >= 1");
  const SiteRange interval{m - half_width, m + half_width};
  if (!interval.contains(k)) throw UsageError("target site outside the green oracle interval");
  const Environment local = covering(env, interval);
  return green_sum(local, m, interval, [k](Site x) { return x == k ? 1.0 : 0.0; });
}

double expected_local_time_green(const Environment& env, Site m, Site k) {
  return expected_local_time_green(env, m, k, std::max<Site>(1, (k > m ? k - m : m - k) + 1));
}

double variance_bound(const Environment& env, Site m, Site k) {
  if (k == m) throw UsageError("variance_bound needs k != m");
  const Environment local = covering(env, {std::min(m, k) - 1, std::max(m, k) + 1});
  const ClosedFormTerms t = closed_form_terms(orient(local, m, k), oriented_target(m, k));
  const double e = expected_local_time_green(local, m, k);
  const double distance = static_cast<double>(k > m ? k - m : m - k);
  const double beta_k = orient(local, m, k).beta(oriented_target(m, k));
  return 2.0 * e * e * std::exp(t.barrier) * distance / beta_k;
}

EllipticityBand ellipticity_band(const Environment& env, Site m, Site k) {
  if (k == m) throw UsageError("ellipticity_band needs k != m");
  const Environment local = covering(env, {std::min(m, k), std::max(m, k)});
  const ClosedFormTerms t = closed_form_terms(orient(local, m, k), oriented_target(m, k));
  const double eta = env.eta0();
  EllipticityBand band;
  band.value = t.ratio * t.a;
  band.lower = eta / (1.0 - eta);
  band.upper = 1.0 / eta;
  // k = m + 1 with alpha_m = eta0, alpha_k = 1 - eta0 sits exactly on the lower edge.
  constexpr double kRelTol = 1e-12;
  band.ok = band.value >= band.lower * (1 - kRelTol) && band.value <= band.upper * (1 + kRelTol);
  return band;
}

double sa_weight(const Environment& env, Site m, std::span<const Site> sites) {
  if (sites.empty()) return 0.0;
  auto [lo_it, hi_it] = std::minmax_element(sites.begin(), sites.end());
  const SiteRange interval{std::min(*lo_it, m) - 1, std::max(*hi_it, m) + 1};
  std::vector<double> indicator(interval.size(), 0.0);
  for (Site l : sites) indicator[static_cast<std::size_t>(l - interval.lo)] = 1.0;
  const Environment local = covering(env, interval);
  return green_sum(local, m, interval,
                   [&](Site x) { return indicator[static_cast<std::size_t>(x - interval.lo)]; });
}

double sa_weight(const Environment& env, Site m, SiteRange sites) {
  if (sites.size() == 0) return 0.0;
  const SiteRange interval{std::min(sites.lo, m) - 1, std::max(sites.hi, m) + 1};
  const Environment local = covering(env, interval);
  return green_sum(local, m, interval, [sites](Site x) { return sites.contains(x) ? 1.0 : 0.0; });
}

ExcursionStats mc_excursion_local_time(const Environment& env, Site m, Site k, std::uint64_t reps,
                                       std::uint64_t seed, const ExcursionOptions& options) {
  if (reps < 1) throw UsageError("mc_excursion_local_time needs reps >= 1");
  SiteRange interval{std::min(m, k) - 1, std::max(m, k) + 1};
  if (options.half_width) {
    if (*options.half_width < 1) throw UsageError("half_width must be >= 1");
    interval = {m - *options.half_width, m + *options.half_width};
    if (!interval.contains(k)) throw UsageError("target site outside the excursion interval");
  }
  const Environment local = covering(env, interval);
  std::vector<std::uint64_t> threshold;
  for (Site x = interval.lo; x <= interval.hi; ++x) {
    // Reflecting ends: always step back inside.
    const double a = x == interval.lo ? 1.0 : x == interval.hi ? 0.0 : local.alpha(x);
    threshold.push_back(a >= 1.0 ? ~std::uint64_t{0} : probability_threshold(a));
  }
  const auto up = [&](std::mt19937_64& rng, Site x) {
    const std::uint64_t t = threshold[static_cast<std::size_t>(x - interval.lo)];
    return t == ~std::uint64_t{0} || rng() < t;
  };

  constexpr std::uint64_t kChunk = 1 << 16;
  const std::uint64_t chunks = (reps + kChunk - 1) / kChunk;
  struct Moments {
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    std::uint64_t capped = 0;
  };
  std::vector<Moments> partial(chunks);
  parallel_for(chunks, options.threads, [&](std::size_t c) {
    std::mt19937_64 rng(derive_seed(seed, "excursion-chunk", c));
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(reps, begin + kChunk);
    Moments acc;
    for (std::uint64_t r = begin; r < end; ++r) {
      Site pos = m;
      std::uint64_t visits = 0;
      std::uint64_t steps = 0;
      do {
        pos += up(rng, pos) ? 1 : -1;
        ++steps;
        if (pos == k) ++visits;
      } while (pos != m && steps < options.step_cap);
      if (pos != m) ++acc.capped;
      const double v = static_cast<double>(visits);
      acc.s1 += v;
      acc.s2 += v * v;
      acc.s3 += v * v * v;
      acc.s4 += v * v * v * v;
    }
    partial[c] = acc;
  });

  Moments total;
  for (const Moments& p : partial) {
    total.s1 += p.s1;
    total.s2 += p.s2;
    total.s3 += p.s3;
    total.s4 += p.s4;
    total.capped += p.capped;
  }
  const double count = static_cast<double>(reps);
  ExcursionStats stats;
  stats.reps = reps;
  stats.capped = total.capped;
  stats.mean = total.s1 / count;
  const double mu = stats.mean;
  const double central2 = total.s2 / count - mu * mu;
  const double central4 =
      total.s4 / count - 4 * mu * total.s3 / count + 6 * mu * mu * total.s2 / count - 3 * mu * mu * mu * mu;
  stats.variance = reps > 1 ? central2 * count / (count - 1) : 0.0;
  stats.stderr_mean = std::sqrt(std::max(0.0, stats.variance) / count);
  stats.stderr_variance = std::sqrt(std::max(0.0, central4 - central2 * central2) / count);
  return stats;
}

}  // namespace sinai

namespace sinai {

OracleRecord oracle_record(const Environment& env, Site m, Site k, std::uint64_t mc_reps, std::uint64_t seed,
                           const ExcursionOptions& options) {
  OracleRecord r;
  r.m = m;
  r.k = k;
  r.expected_paper = expected_local_time_paper(env, m, k);
  r.expected_green = expected_local_time_green(env, m, k);
  if (k != m) {
    r.variance_bound = variance_bound(env, m, k);
    r.band = ellipticity_band(env, m, k);
  }
  if (mc_reps > 0) r.mc = mc_excursion_local_time(env, m, k, mc_reps, seed, options);
  return r;
}

}  // namespace sinai

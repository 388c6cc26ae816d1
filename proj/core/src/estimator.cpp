#include "sinai/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace sinai {

LGammaSet l_gamma_set(const WalkRun& run, double gamma, std::optional<double> threshold_override) {
  if (run.n < kMinimumSteps) throw UsageError("l_gamma_set needs n >= 16");
  if (!(gamma > 0.0)) throw UsageError("l_gamma_set needs gamma > 0");
  LGammaSet out;
  out.favorites = favorite_sites(run);
  out.k_star = out.favorites.k_star;
  out.t_k_star = *hitting_time(run, out.k_star);
  out.overridden = threshold_override.has_value();
  out.threshold = threshold_override ? *threshold_override : std::pow(log_n(static_cast<double>(run.n)), gamma);
  out.post_counts = post_hit_counts(run, out.t_k_star);
  if (!out.post_counts.empty()) {
    const SiteRange r = out.post_counts.range();
    for (Site k = r.lo; k <= r.hi; ++k) {
      const auto c = out.post_counts[k];
      if (c > 0 && static_cast<double>(c) >= out.threshold) out.sites.push_back(k);
    }
  }
  return out;
}

const EstimateRow* EstimateTable::row(Site k) const {
  auto it = std::lower_bound(rows.begin(), rows.end(), k, [](const EstimateRow& r, Site v) { return r.k < v; });
  return it != rows.end() && it->k == k ? &*it : nullptr;
}

double error_half_width(std::uint64_t n, double c0) {
  const auto x = static_cast<double>(n);
  return c0 * log3_n(x) / log_n(x);
}

EstimateTable estimate_table(const WalkRun& run, double gamma, double c0, std::optional<double> threshold_override) {
  const LGammaSet l = l_gamma_set(run, gamma, threshold_override);
  EstimateTable t;
  t.n = run.n;
  t.gamma = gamma;
  t.c0 = c0;
  t.u_n = error_half_width(run.n, c0);
  t.threshold = l.threshold;
  t.k_star = l.k_star;
  t.t_k_star = l.t_k_star;
  t.l_gamma = l.sites;
  const double log_total = log_n(static_cast<double>(run.n));
  for (Site k : run.ledger.visited_sites()) {
    EstimateRow row;
    row.k = k;
    row.l_kn = run.ledger.count(k);
    row.post_count = l.post_counts[k];
    row.in_l_gamma = std::binary_search(l.sites.begin(), l.sites.end(), k);
    row.s_hat = std::log(static_cast<double>(row.l_kn)) / log_total;
    t.rows.push_back(row);
  }
  return t;
}

TargetProfile::TargetProfile(const PotentialPath& s, Site m_n, std::uint64_t n)
    : window_(s.window()), m_n_(m_n), n_(n) {
  if (!window_.contains(m_n)) throw UsageError("m_n outside the potential window");
  if (n < kMinimumSteps) throw UsageError("target_profile needs n >= 16");
  const double log_total = log_n(static_cast<double>(n));
  const double base = s[m_n];
  values_.reserve(window_.size());
  for (Site k = window_.lo; k <= window_.hi; ++k) values_.push_back(k == m_n ? 1.0 : 1.0 - (s[k] - base) / log_total);
}

TargetProfile target_profile(const PotentialPath& s, Site m_n, std::uint64_t n) { return {s, m_n, n}; }

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.empty() || x.size() != y.size()) throw UsageError("least_squares needs equal nonempty inputs");
  const auto count = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) return {0.0, my};
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

ReconstructionReport reconstruction_error(const EstimateTable& table, const TargetProfile& profile) {
  ReconstructionReport r;
  r.u_n = table.u_n;
  r.l_gamma_size = table.l_gamma.size();
  const double log_total = log_n(static_cast<double>(table.n));
  r.l_size_ratio = static_cast<double>(r.l_gamma_size) / (log_total * log_total);
  r.m_n_to_kstar_distance = std::abs(profile.m_n() - table.k_star);
  r.empty = table.l_gamma.empty();
  if (r.empty) return r;

  std::uint64_t covered = 0;
  std::vector<double> xs;
  std::vector<double> ys;
  for (Site k : table.l_gamma) {
    const EstimateRow* row = table.row(k);
    if (!profile.window().contains(k)) throw UsageError("L_n^gamma site outside the profile window");
    SiteDifference d{k, profile(k), row->s_hat, profile(k) - row->s_hat};
    r.sup_error = std::max(r.sup_error, std::abs(d.diff));
    covered += row->l_kn;
    xs.push_back(static_cast<double>(k));
    ys.push_back(d.diff);
    r.diffs.push_back(d);
  }
  r.within_band = r.sup_error < r.u_n;
  r.fit = least_squares(xs, ys);
  r.coverage = static_cast<double>(covered) / static_cast<double>(table.n);
  r.connected = table.l_gamma.back() - table.l_gamma.front() + 1 == static_cast<Site>(table.l_gamma.size());
  return r;
}

BottomLocalization localize_bottom(const WalkRun& run, std::optional<Site> true_m_n) {
  const FavoriteSites f = favorite_sites(run);
  BottomLocalization b;
  b.k_star = f.k_star;
  b.t_k_star = *hitting_time(run, f.k_star);
  const auto x = static_cast<double>(run.n);
  b.distance_bound = log2_n(x) * log2_n(x);
  b.time_bound = std::pow(log_n(x), 3);
  if (!true_m_n) return b;
  Site worst = 0;
  for (Site s : f.sites) worst = std::max(worst, std::abs(*true_m_n - s));
  b.max_favorite_distance = worst;
  if (const auto t = hitting_time(run, *true_m_n)) {
    b.m_n_visited = true;
    b.t_gap = *t > b.t_k_star ? *t - b.t_k_star : b.t_k_star - *t;
  }
  return b;
}

}  // namespace sinai

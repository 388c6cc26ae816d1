#include "sinai/walk.hpp"

#include <algorithm>
#include <random>

#include "sinai/seeding.hpp"

namespace sinai {

PackedSteps PackedSteps::from_words(std::vector<std::uint64_t> words, std::uint64_t size) {
  if (words.size() != (size + 63) / 64) throw UsageError("packed step words do not match step count");
  PackedSteps steps;
  steps.words_ = std::move(words);
  steps.size_ = size;
  if (size % 64 != 0) steps.words_.back() &= (std::uint64_t{1} << (size % 64)) - 1;
  return steps;
}

PackedSteps PackedSteps::from_string(std::string_view pattern) {
  PackedSteps steps;
  steps.reserve(pattern.size());
  for (char c : pattern) {
    if (c == 'U' || c == 'u' || c == '+') {
      steps.push_back(true);
    } else if (c == 'D' || c == 'd' || c == '-') {
      steps.push_back(false);
    } else {
      throw UsageError(std::string("invalid step character '") + c + "'");
    }
  }
  return steps;
}

void PackedSteps::push_back(bool up) {
  if ((size_ & 63) == 0) words_.push_back(0);
  if (up) words_.back() |= std::uint64_t{1} << (size_ & 63);
  ++size_;
}

void SiteCounts::grow_to(Site k) {
  if (counts_.empty()) {
    lo_ = k;
    counts_.assign(1, 0);
    return;
  }
  const Site hi = lo_ + static_cast<Site>(counts_.size()) - 1;
  if (k < lo_) {
    const auto extra = static_cast<std::size_t>(std::max<Site>(lo_ - k, static_cast<Site>(counts_.size())));
    counts_.insert(counts_.begin(), extra, 0);
    lo_ -= static_cast<Site>(extra);
  } else if (k > hi) {
    const auto extra = static_cast<std::size_t>(std::max<Site>(k - hi, static_cast<Site>(counts_.size())));
    counts_.resize(counts_.size() + extra, 0);
  }
}

void SiteCounts::add(Site k, std::uint64_t amount) {
  if (counts_.empty() || k < lo_ || k >= lo_ + static_cast<Site>(counts_.size())) grow_to(k);
  counts_[static_cast<std::size_t>(k - lo_)] += amount;
}

std::uint64_t SiteCounts::operator[](Site k) const noexcept {
  if (counts_.empty() || k < lo_ || k >= lo_ + static_cast<Site>(counts_.size())) return 0;
  return counts_[static_cast<std::size_t>(k - lo_)];
}

std::uint64_t SiteCounts::total() const noexcept {
  std::uint64_t sum = 0;
  for (auto c : counts_) sum += c;
  return sum;
}

bool operator==(const SiteCounts& a, const SiteCounts& b) {
  if (a.empty() || b.empty()) return a.total() == 0 && b.total() == 0;
  const SiteRange ra = a.range();
  const SiteRange rb = b.range();
  for (Site k = std::min(ra.lo, rb.lo); k <= std::max(ra.hi, rb.hi); ++k) {
    if (a[k] != b[k]) return false;
  }
  return true;
}

void LocalTimeLedger::record(Site k, std::uint64_t time) {
  counts_.add(k);
  if (first_hit_[k] == 0) first_hit_.add(k, time);
  max_count_ = std::max(max_count_, counts_[k]);
}

std::optional<std::uint64_t> LocalTimeLedger::first_hit(Site k) const noexcept {
  const auto t = first_hit_[k];
  if (t == 0) return std::nullopt;
  return t;
}

std::vector<Site> LocalTimeLedger::argmax_sites() const {
  std::vector<Site> sites;
  if (max_count_ == 0) return sites;
  const SiteRange r = counts_.range();
  for (Site k = r.lo; k <= r.hi; ++k) {
    if (counts_[k] == max_count_) sites.push_back(k);
  }
  return sites;
}

std::vector<Site> LocalTimeLedger::visited_sites() const {
  std::vector<Site> sites;
  if (counts_.empty()) return sites;
  const SiteRange r = counts_.range();
  for (Site k = r.lo; k <= r.hi; ++k) {
    if (counts_[k] > 0) sites.push_back(k);
  }
  return sites;
}

LocalTimeLedger replay_ledger(const PackedSteps& steps) {
  LocalTimeLedger ledger;
  Site pos = 0;
  for (std::uint64_t t = 0; t < steps.size(); ++t) {
    pos += steps[t] ? 1 : -1;
    ledger.record(pos, t + 1);
  }
  return ledger;
}

WalkRun WalkRun::from_steps(PackedSteps steps, std::uint64_t env_identity, std::uint64_t walk_seed) {
  WalkRun run;
  run.n = steps.size();
  run.env_identity = env_identity;
  run.walk_seed = walk_seed;
  run.ledger = replay_ledger(steps);
  Site pos = 0;
  for (std::uint64_t t = 0; t < steps.size(); ++t) pos += steps[t] ? 1 : -1;
  run.final_position = pos;
  run.steps = std::move(steps);
  return run;
}

WalkRun run_walk(const Environment& start, std::uint64_t n, std::uint64_t walk_seed) {
  if (n < 1) throw UsageError("run_walk needs n >= 1");

  Environment env = start.window().contains(0)
                        ? start
                        : start.extended({std::min<Site>(start.window().lo, 0), std::max<Site>(start.window().hi, 0)});
  std::vector<std::uint64_t> threshold;
  const auto rebuild = [&] {
    threshold.clear();
    threshold.reserve(env.window().size());
    for (double a : env.alphas()) threshold.push_back(probability_threshold(a));
  };
  rebuild();

  std::mt19937_64 rng(walk_seed);
  WalkRun run;
  run.n = n;
  run.walk_seed = walk_seed;
  run.env_identity = env.identity();
  run.steps.reserve(n);

  Site pos = 0;
  Site lo = env.window().lo;
  Site hi = env.window().hi;
  for (std::uint64_t t = 1; t <= n; ++t) {
    if (pos < lo || pos > hi) {
      const Site width = std::max<Site>(64, hi - lo + 1);
      env = env.extended({pos < lo ? lo - width : lo, pos > hi ? hi + width : hi});
      lo = env.window().lo;
      hi = env.window().hi;
      rebuild();
    }
    const bool up = rng() < threshold[static_cast<std::size_t>(pos - lo)];
    pos += up ? 1 : -1;
    run.steps.push_back(up);
    run.ledger.record(pos, t);
  }
  run.final_position = pos;
  run.env = std::make_shared<const Environment>(std::move(env));
  return run;
}

std::uint64_t local_time(const WalkRun& run, Site k, std::uint64_t T) {
  if (T > run.n) throw UsageError("local_time: T exceeds the number of steps");
  if (T == run.n) return run.ledger.count(k);
  std::uint64_t count = 0;
  Site pos = 0;
  for (std::uint64_t t = 0; t < T; ++t) {
    pos += run.steps[t] ? 1 : -1;
    if (pos == k) ++count;
  }
  return count;
}

FavoriteSites favorite_sites(const WalkRun& run) {
  if (run.n < 1) throw UsageError("favorite_sites needs n >= 1");
  FavoriteSites fav;
  fav.l_star = run.ledger.max_count();
  fav.sites = run.ledger.argmax_sites();
  fav.k_star = *std::min_element(fav.sites.begin(), fav.sites.end(), closer_to_origin);
  fav.sign_tie = fav.k_star != 0 && std::binary_search(fav.sites.begin(), fav.sites.end(), -fav.k_star);
  return fav;
}

std::optional<std::uint64_t> hitting_time(const WalkRun& run, Site x) { return run.ledger.first_hit(x); }

SiteCounts post_hit_counts(const WalkRun& run, std::uint64_t t0) {
  if (t0 < 1 || t0 > run.n) throw UsageError("post_hit_counts: t0 must lie in [1, n]");
  SiteCounts counts(run.ledger.counts().range());
  Site pos = 0;
  for (std::uint64_t t = 1; t <= run.n; ++t) {
    pos += run.steps[t - 1] ? 1 : -1;
    if (t >= t0) counts.add(pos);
  }
  return counts;
}

}  // namespace sinai

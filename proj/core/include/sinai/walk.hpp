#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "sinai/environment.hpp"
#include "sinai/types.hpp"

namespace sinai {

/// One bit per step: 1 = step right (+1), 0 = step left (-1).
class PackedSteps {
 public:
  PackedSteps() = default;
  static PackedSteps from_words(std::vector<std::uint64_t> words, std::uint64_t size);
  /// Parses a string of 'U'/'D' (or '+'/'-') characters.
  static PackedSteps from_string(std::string_view pattern);

  void push_back(bool up);
  void reserve(std::uint64_t steps) { words_.reserve((steps + 63) / 64); }
  [[nodiscard]] bool operator[](std::uint64_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  [[nodiscard]] std::uint64_t size() const noexcept { return size_; }
  [[nodiscard]] const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  friend bool operator==(const PackedSteps&, const PackedSteps&) = default;

 private:
  std::vector<std::uint64_t> words_;
  std::uint64_t size_ = 0;
};

/// Dense per-site counters over a contiguous, growable range of sites.
class SiteCounts {
 public:
  SiteCounts() = default;
  explicit SiteCounts(SiteRange range) : lo_(range.lo), counts_(range.size(), 0) {}

  void add(Site k, std::uint64_t amount = 1);
  [[nodiscard]] std::uint64_t operator[](Site k) const noexcept;
  [[nodiscard]] bool empty() const noexcept { return counts_.empty(); }
  /// Range covered by storage (may include zero entries).
  [[nodiscard]] SiteRange range() const noexcept {
    return {lo_, lo_ + static_cast<Site>(counts_.size()) - 1};
  }
  [[nodiscard]] std::uint64_t total() const noexcept;

  /// Equal when every site has the same count, regardless of storage range.
  friend bool operator==(const SiteCounts& a, const SiteCounts& b);

 private:
  void grow_to(Site k);
  Site lo_ = 0;
  std::vector<std::uint64_t> counts_;
};

/// Local times L(k, n) = #{1 <= i <= n : X_i = k} and first hitting times
/// T_k = min{i >= 1 : X_i = k}.
class LocalTimeLedger {
 public:
  void record(Site k, std::uint64_t time);

  [[nodiscard]] std::uint64_t count(Site k) const noexcept { return counts_[k]; }
  [[nodiscard]] std::optional<std::uint64_t> first_hit(Site k) const noexcept;
  [[nodiscard]] std::uint64_t max_count() const noexcept { return max_count_; }
  /// Sites achieving max_count, ascending.
  [[nodiscard]] std::vector<Site> argmax_sites() const;
  /// Sites with a nonzero count, ascending.
  [[nodiscard]] std::vector<Site> visited_sites() const;
  [[nodiscard]] std::uint64_t total() const noexcept { return counts_.total(); }
  [[nodiscard]] const SiteCounts& counts() const noexcept { return counts_; }

  friend bool operator==(const LocalTimeLedger& a, const LocalTimeLedger& b) {
    return a.counts_ == b.counts_ && a.first_hit_ == b.first_hit_ && a.max_count_ == b.max_count_;
  }

 private:
  SiteCounts counts_;
  SiteCounts first_hit_;  // 0 = never visited
  std::uint64_t max_count_ = 0;
};

/// A quenched trajectory X_0 = 0, X_1, ..., X_n.
struct WalkRun {
  std::uint64_t n = 0;
  /// Environment the walk ran in, grown to cover every visited site; null for
  /// runs rebuilt from a bare step stream.
  std::shared_ptr<const Environment> env;
  std::uint64_t env_identity = 0;
  std::uint64_t walk_seed = 0;
  PackedSteps steps;
  Site final_position = 0;
  LocalTimeLedger ledger;

  /// Rebuilds positions and the ledger by replaying `steps` from X_0 = 0.
  static WalkRun from_steps(PackedSteps steps, std::uint64_t env_identity = 0, std::uint64_t walk_seed = 0);
};

/// Simulates n steps of the chain P[X_{t+1} = i+1 | X_t = i] = alpha_i from
/// X_0 = 0, growing the environment window whenever the walk leaves it.
[[nodiscard]] WalkRun run_walk(const Environment& env, std::uint64_t n, std::uint64_t walk_seed);

/// Replays a step stream into a fresh ledger.
[[nodiscard]] LocalTimeLedger replay_ledger(const PackedSteps& steps);

/// L(k, T) for 0 <= T <= n; ledger lookup when T = n, replay otherwise.
[[nodiscard]] std::uint64_t local_time(const WalkRun& run, Site k, std::uint64_t T);

struct FavoriteSites {
  std::uint64_t l_star = 0;   // max_k L(k, n)
  std::vector<Site> sites;    // F_n, ascending
  Site k_star = 0;            // element of F_n closest to 0
  bool sign_tie = false;      // both +|k*| and -|k*| were favorites
};

[[nodiscard]] FavoriteSites favorite_sites(const WalkRun& run);

/// First time t >= 1 with X_t = x, or nullopt when x is not visited in 1..n.
[[nodiscard]] std::optional<std::uint64_t> hitting_time(const WalkRun& run, Site x);

/// Visits to each site during times t0..n, by a second pass over the steps.
[[nodiscard]] SiteCounts post_hit_counts(const WalkRun& run, std::uint64_t t0);

}  // namespace sinai

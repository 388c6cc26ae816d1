#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sinai/birth_death.hpp"
#include "sinai/environment.hpp"
#include "sinai/estimator.hpp"
#include "sinai/landscape.hpp"

namespace sinai {

[[nodiscard]] const std::vector<std::string>& experiment_names();

struct ExperimentConfig {
  std::string experiment = "theorem1";
  std::uint64_t n = 500'000;
  double gamma = 4.0;
  double c0 = 10.0;
  double d0 = 4.0;
  double d1 = 16.0;
  std::string env_family = "two-point";
  double env_param = 0.3;
  std::uint64_t reps = 1;
  std::uint64_t master_seed = 0;
  std::optional<double> threshold_override;
  std::string out;
  unsigned threads = 1;
  // oracle sweep
  std::uint64_t excursions = 1'000'000;
  std::uint64_t band_samples = 1000;

  /// Throws ConfigError: unknown experiment, reps < 1, n < 10^4, gamma <= 0,
  /// bad family parameters, ...
  void validate() const;

  /// Canonical JSON of every field that affects results (not `out`, `threads`).
  [[nodiscard]] std::string canonical_json() const;
  [[nodiscard]] std::uint64_t hash() const;

  /// Overlays the keys present in a JSON object onto `base`.
  [[nodiscard]] static ExperimentConfig from_json(const std::string& text, ExperimentConfig base);
  [[nodiscard]] static ExperimentConfig from_json(const std::string& text);

  [[nodiscard]] EnvironmentSpec env_spec(std::uint64_t seed) const;
};

struct ReplicationSeeds {
  std::uint64_t replication = 0;
  std::uint64_t environment = 0;
  std::uint64_t walk = 0;
};

[[nodiscard]] ReplicationSeeds replication_seeds(std::uint64_t master_seed, std::uint64_t index);

/// Everything measured on one (environment, trajectory) pair.
struct ReplicationRecord {
  std::uint64_t index = 0;
  ReplicationSeeds seeds;
  std::uint64_t n = 0;
  Site final_position = 0;

  bool valley_found = false;
  std::string valley_failure;
  ValleyTriple valley;
  double valley_depth = 0.0;
  bool window_bound_ok = false;
  bool sa_weight_ok = false;
  double sa_weight = 0.0;

  Site k_star = 0;
  std::uint64_t t_k_star = 0;
  bool sign_tie = false;
  std::size_t favorites = 0;
  std::uint64_t l_star = 0;

  double threshold = 0.0;
  std::size_t l_size = 0;
  Site l_lo = 0;
  Site l_hi = 0;
  bool connected = false;
  double coverage = 0.0;
  double l_size_ratio = 0.0;
  bool favorites_applicable = false;  // L*(n) >= threshold
  bool favorites_in_l = false;

  double u_n = 0.0;
  bool band_evaluated = false;  // valley found and L nonempty
  double sup_error = 0.0;
  bool within_band = false;
  double slope = 0.0;
  double intercept = 0.0;

  std::optional<Site> max_favorite_distance;
  std::optional<std::uint64_t> t_gap;
  bool distance_ok = false;
  bool time_ok = false;

  std::size_t v_size = 0;
  bool contained = false;  // L subset of V (vacuous when L is empty)

  /// Kept for figure emission only.
  std::vector<SiteDifference> diffs;
};

/// Runs the full pipeline for replication `index` of `config`: sample the
/// environment, find the basic valley, simulate the walk, estimate, compare.
[[nodiscard]] ReplicationRecord run_replication(const ExperimentConfig& config, std::uint64_t index);

struct AcceptanceCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool ok = false;
};

struct ExperimentReport {
  std::string experiment;
  ExperimentConfig config;
  std::vector<ReplicationRecord> replications;  // walk experiments
  std::vector<OracleRecord> oracle_records;     // oracle sweep
  std::vector<std::pair<std::string, double>> aggregates;
  std::vector<AcceptanceCheck> checks;

  [[nodiscard]] bool passed() const;
  [[nodiscard]] std::optional<double> aggregate(const std::string& key) const;
  /// Deterministic JSON: provenance, aggregates, checks and per-replication records.
  [[nodiscard]] std::string json() const;
  /// One row per replication (walk experiments) or per oracle record.
  [[nodiscard]] std::string records_csv() const;
};

[[nodiscard]] ExperimentReport exp_theorem1(const ExperimentConfig& config);
[[nodiscard]] ExperimentReport exp_prop1(const ExperimentConfig& config);
[[nodiscard]] ExperimentReport exp_prop2(const ExperimentConfig& config);
[[nodiscard]] ExperimentReport exp_lemma_containment(const ExperimentConfig& config);
[[nodiscard]] ExperimentReport exp_oracle(const ExperimentConfig& config);

/// Dispatches on config.experiment.
[[nodiscard]] ExperimentReport run_experiment(const ExperimentConfig& config);

/// Aggregates computed serially from stored records, so the result does not
/// depend on how the records were produced.
[[nodiscard]] std::vector<std::pair<std::string, double>> aggregate_replications(
    const std::vector<ReplicationRecord>& records);

enum class FigureKind { reconstruction, difference };

/// CSV for the first replication: (k, target, s_hat_minus_un, s_hat_plus_un)
/// or (k, diff, fitted), over L_n^gamma.
[[nodiscard]] std::string figure_csv(const ExperimentReport& report, FigureKind which);

/// Writes <name>_report.json, <name>_records.csv and, for walk experiments,
/// <name>_reconstruction.csv and <name>_difference.csv into `dir`.
std::vector<std::filesystem::path> write_report(const ExperimentReport& report, const std::filesystem::path& dir);

/// Median (mean of the two middle values for even sizes); NaN when empty.
[[nodiscard]] double median(std::vector<double> values);

[[nodiscard]] std::string version();

}  // namespace sinai

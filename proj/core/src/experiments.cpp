#include "sinai/experiments.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "json.hpp"
#include "sinai/io.hpp"
#include "sinai/parallel.hpp"
#include "sinai/seeding.hpp"

#ifndef SINAI_VERSION
#define SINAI_VERSION "0.0.0"
#endif

namespace sinai {
namespace {

using ojson = nlohmann::ordered_json;

constexpr Site kInitialHalfWidth = 1024;

std::string hex64(std::uint64_t x) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, x);
  return buf;
}

double fraction(std::size_t hits, std::size_t total) {
  return total == 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(hits) / static_cast<double>(total);
}

ojson to_json(const ReplicationRecord& r) {
  ojson j;
  j["index"] = r.index;
  j["seeds"] = {{"replication", r.seeds.replication}, {"environment", r.seeds.environment}, {"walk", r.seeds.walk}};
  j["final_position"] = r.final_position;
  j["valley_found"] = r.valley_found;
  if (r.valley_found) {
    j["valley"] = {r.valley.left, r.valley.bottom, r.valley.right};
    j["depth"] = r.valley_depth;
    j["window_bound_ok"] = r.window_bound_ok;
    j["sa_weight"] = r.sa_weight;
    j["sa_weight_ok"] = r.sa_weight_ok;
  } else {
    j["valley_failure"] = r.valley_failure;
  }
  j["k_star"] = r.k_star;
  j["t_k_star"] = r.t_k_star;
  j["sign_tie"] = r.sign_tie;
  j["favorites"] = r.favorites;
  j["l_star"] = r.l_star;
  j["l_size"] = r.l_size;
  if (r.l_size > 0) j["l_range"] = {r.l_lo, r.l_hi};
  j["connected"] = r.connected;
  j["coverage"] = r.coverage;
  j["l_size_ratio"] = r.l_size_ratio;
  j["favorites_applicable"] = r.favorites_applicable;
  j["favorites_in_l"] = r.favorites_in_l;
  j["band_evaluated"] = r.band_evaluated;
  if (r.band_evaluated) {
    j["sup_error"] = r.sup_error;
    j["within_band"] = r.within_band;
    j["slope"] = r.slope;
    j["intercept"] = r.intercept;
  }
  if (r.max_favorite_distance) j["max_favorite_distance"] = *r.max_favorite_distance;
  if (r.t_gap) j["t_gap"] = *r.t_gap;
  j["distance_ok"] = r.distance_ok;
  j["time_ok"] = r.time_ok;
  j["v_size"] = r.v_size;
  j["contained"] = r.contained;
  return j;
}

ojson to_json(const OracleRecord& r) {
  ojson j;
  j["m"] = r.m;
  j["k"] = r.k;
  j["expected_paper"] = r.expected_paper;
  j["expected_green"] = r.expected_green;
  if (r.mc) {
    j["mc_mean"] = r.mc->mean;
    j["mc_stderr"] = r.mc->stderr_mean;
    j["mc_variance"] = r.mc->variance;
    j["mc_variance_stderr"] = r.mc->stderr_variance;
    j["mc_capped"] = r.mc->capped;
  }
  if (r.variance_bound) j["variance_bound"] = *r.variance_bound;
  if (r.band) j["band"] = {{"value", r.band->value}, {"lower", r.band->lower}, {"upper", r.band->upper}, {"ok", r.band->ok}};
  return j;
}

ojson config_json(const ExperimentConfig& c) {
  ojson j;
  j["experiment"] = c.experiment;
  j["n"] = c.n;
  j["gamma"] = c.gamma;
  j["c0"] = c.c0;
  j["d0"] = c.d0;
  j["d1"] = c.d1;
  j["env_family"] = c.env_family;
  j["env_param"] = c.env_param;
  j["reps"] = c.reps;
  j["seed"] = c.master_seed;
  j["threshold_override"] = c.threshold_override ? ojson(*c.threshold_override) : ojson(nullptr);
  j["excursions"] = c.excursions;
  j["band_samples"] = c.band_samples;
  return j;
}

AcceptanceCheck at_least(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value >= threshold};
}

AcceptanceCheck at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}

ExperimentReport walk_experiment(const ExperimentConfig& config, const std::string& name) {
  ExperimentConfig c = config;
  c.experiment = name;
  c.validate();
  ExperimentReport report;
  report.experiment = name;
  report.config = c;
  report.replications.resize(c.reps);
  parallel_for(c.reps, c.threads, [&](std::size_t i) { report.replications[i] = run_replication(c, i); });
  report.aggregates = aggregate_replications(report.replications);
  return report;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"theorem1", "prop1", "prop2", "lemma_containment", "oracle"};
  return names;
}

void ExperimentConfig::validate() const {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end()) {
    throw ConfigError("unknown experiment '" + experiment + "'");
  }
  if (reps < 1) throw ConfigError("reps must be >= 1");
  if (n < 10'000) throw ConfigError("n must be >= 10000");
  if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
  if (!(c0 > 0.0)) throw ConfigError("c0 must be > 0");
  if (!(d0 > 0.0) || !(d1 > 0.0)) throw ConfigError("d0 and d1 must be > 0");
  if (threshold_override && !(*threshold_override > 0.0)) throw ConfigError("threshold override must be > 0");
  if (excursions < 1) throw ConfigError("excursions must be >= 1");
  env_spec(0).validate();
}

std::string ExperimentConfig::canonical_json() const { return config_json(*this).dump(); }

std::uint64_t ExperimentConfig::hash() const { return splitmix64(label_hash(canonical_json())); }

ExperimentConfig ExperimentConfig::from_json(const std::string& text, ExperimentConfig base) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      const auto& v = it.value();
      if (key == "experiment") base.experiment = v.get<std::string>();
      else if (key == "n") base.n = v.get<std::uint64_t>();
      else if (key == "gamma") base.gamma = v.get<double>();
      else if (key == "c0") base.c0 = v.get<double>();
      else if (key == "d0") base.d0 = v.get<double>();
      else if (key == "d1") base.d1 = v.get<double>();
      else if (key == "env_family") base.env_family = v.get<std::string>();
      else if (key == "env_param") base.env_param = v.get<double>();
      else if (key == "reps") base.reps = v.get<std::uint64_t>();
      else if (key == "seed") base.master_seed = v.get<std::uint64_t>();
      else if (key == "threshold_override") base.threshold_override = v.is_null() ? std::nullopt : std::optional(v.get<double>());
      else if (key == "out") base.out = v.get<std::string>();
      else if (key == "threads") base.threads = v.get<unsigned>();
      else if (key == "excursions") base.excursions = v.get<std::uint64_t>();
      else if (key == "band_samples") base.band_samples = v.get<std::uint64_t>();
      else if (key.rfind("_", 0) == 0) continue;  // comments
      else throw ConfigError("config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return base;
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) { return from_json(text, ExperimentConfig{}); }

EnvironmentSpec ExperimentConfig::env_spec(std::uint64_t seed) const {
  return EnvironmentSpec::from_name(env_family, env_param, seed);
}

ReplicationSeeds replication_seeds(std::uint64_t master_seed, std::uint64_t index) {
  ReplicationSeeds s;
  s.replication = derive_seed(master_seed, "replication", index);
  s.environment = derive_seed(s.replication, "environment");
  s.walk = derive_seed(s.replication, "walk");
  return s;
}

ReplicationRecord run_replication(const ExperimentConfig& config, std::uint64_t index) {
  ReplicationRecord rec;
  rec.index = index;
  rec.n = config.n;
  rec.seeds = replication_seeds(config.master_seed, index);

  const Environment env =
      Environment::sample(config.env_spec(rec.seeds.environment), {-kInitialHalfWidth, kInitialHalfWidth});
  const GoodEnvReport good = good_environment_check(env, config.n, config.gamma, config.d0, config.d1);
  const WalkRun run = run_walk(env, config.n, rec.seeds.walk);
  rec.final_position = run.final_position;

  const FavoriteSites fav = favorite_sites(run);
  rec.sign_tie = fav.sign_tie;
  rec.favorites = fav.sites.size();
  rec.l_star = fav.l_star;

  const EstimateTable table = estimate_table(run, config.gamma, config.c0, config.threshold_override);
  rec.k_star = table.k_star;
  rec.t_k_star = table.t_k_star;
  rec.threshold = table.threshold;
  rec.u_n = table.u_n;
  rec.l_size = table.l_gamma.size();
  const double log_total = log_n(static_cast<double>(config.n));
  rec.l_size_ratio = static_cast<double>(rec.l_size) / (log_total * log_total);
  std::uint64_t covered = 0;
  for (Site k : table.l_gamma) covered += run.ledger.count(k);
  rec.coverage = static_cast<double>(covered) / static_cast<double>(config.n);
  if (rec.l_size > 0) {
    rec.l_lo = table.l_gamma.front();
    rec.l_hi = table.l_gamma.back();
    rec.connected = rec.l_hi - rec.l_lo + 1 == static_cast<Site>(rec.l_size);
  }
  rec.favorites_applicable = static_cast<double>(fav.l_star) >= table.threshold;
  rec.favorites_in_l = std::all_of(fav.sites.begin(), fav.sites.end(), [&](Site k) {
    return std::binary_search(table.l_gamma.begin(), table.l_gamma.end(), k);
  });

  if (!good.basic_valley_exists) {
    rec.valley_failure = "no basic valley inside the search window";
    return rec;
  }
  const BasicValley& bv = *good.valley;
  rec.valley_found = true;
  rec.valley = bv.triple;
  rec.valley_depth = bv.depth;
  rec.window_bound_ok = good.window_bound_ok;
  rec.sa_weight = good.sa_weight;
  rec.sa_weight_ok = good.sa_weight_ok;

  const SiteRange walked = run.env->window();
  const Environment wide = run.env->extended({std::min(walked.lo, bv.triple.left), std::max(walked.hi, bv.triple.right)});
  const PotentialPath s = potential(wide);
  const TargetProfile profile = target_profile(s, bv.triple.bottom, config.n);
  const ReconstructionReport recon = reconstruction_error(table, profile);
  rec.band_evaluated = !recon.empty;
  if (!recon.empty) {
    rec.sup_error = recon.sup_error;
    rec.within_band = recon.within_band;
    rec.slope = recon.fit.slope;
    rec.intercept = recon.fit.intercept;
    rec.diffs = recon.diffs;
  }

  const BottomLocalization loc = localize_bottom(run, bv.triple.bottom);
  rec.max_favorite_distance = loc.max_favorite_distance;
  rec.t_gap = loc.t_gap;
  rec.distance_ok = loc.distance_ok();
  rec.time_ok = loc.time_ok();

  const std::vector<Site> v = v_gamma_set(s, bv, config.n, config.gamma);
  rec.v_size = v.size();
  rec.contained = std::all_of(table.l_gamma.begin(), table.l_gamma.end(),
                              [&](Site k) { return std::binary_search(v.begin(), v.end(), k); });
  return rec;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<std::pair<std::string, double>> aggregate_replications(const std::vector<ReplicationRecord>& records) {
  std::size_t valley = 0, good = 0, band_eval = 0, band_ok = 0, empty = 0, size_ok = 0, connected = 0;
  std::size_t fav_applicable = 0, fav_in = 0, dist_ok = 0, time_ok = 0, both_ok = 0, contained = 0, ties = 0;
  std::vector<double> sup, slope, coverage, sizes;
  for (const ReplicationRecord& r : records) {
    valley += r.valley_found;
    good += r.valley_found && r.window_bound_ok && r.sa_weight_ok;
    empty += r.l_size == 0;
    size_ok += r.l_size_ratio >= 0.1 && r.l_size_ratio <= 10.0;
    connected += r.l_size > 0 && r.connected;
    if (r.favorites_applicable) {
      ++fav_applicable;
      fav_in += r.favorites_in_l;
    }
    if (r.band_evaluated) {
      ++band_eval;
      band_ok += r.within_band;
      sup.push_back(r.sup_error);
      slope.push_back(std::abs(r.slope));
    }
    dist_ok += r.distance_ok;
    time_ok += r.time_ok;
    both_ok += r.distance_ok && r.time_ok;
    contained += r.valley_found && r.contained;
    ties += r.sign_tie;
    coverage.push_back(r.coverage);
    sizes.push_back(static_cast<double>(r.l_size));
  }
  const std::size_t total = records.size();
  const double nn = records.empty() ? 0.0 : static_cast<double>(records.front().n);
  std::vector<std::pair<std::string, double>> a{
      {"reps", static_cast<double>(total)},
      {"n", nn},
      {"threshold", records.empty() ? 0.0 : records.front().threshold},
      {"u_n", records.empty() ? 0.0 : records.front().u_n},
      {"distance_bound", log2_n(nn) * log2_n(nn)},
      {"time_bound", std::pow(log_n(nn), 3)},
      {"valley_found_fraction", fraction(valley, total)},
      {"good_environment_fraction", fraction(good, total)},
      {"empty_l_fraction", fraction(empty, total)},
      {"band_success_fraction", fraction(band_ok, total)},
      {"band_success_given_evaluated", fraction(band_ok, band_eval)},
      {"median_sup_error", median(sup)},
      {"median_abs_slope", median(slope)},
      {"median_coverage", median(coverage)},
      {"median_l_size", median(sizes)},
      {"l_size_in_range_fraction", fraction(size_ok, total)},
      {"connected_fraction", fraction(connected, total)},
      {"favorites_applicable_fraction", fraction(fav_applicable, total)},
      {"favorites_in_l_fraction", fraction(fav_in, fav_applicable)},
      {"distance_ok_fraction", fraction(dist_ok, total)},
      {"time_ok_fraction", fraction(time_ok, total)},
      {"prop1_fraction", fraction(both_ok, total)},
      {"containment_fraction", fraction(contained, total)},
      {"sign_ties", static_cast<double>(ties)},
  };
  return a;
}

bool ExperimentReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AcceptanceCheck& c) { return c.ok; });
}

std::optional<double> ExperimentReport::aggregate(const std::string& key) const {
  for (const auto& [k, v] : aggregates) {
    if (k == key) return v;
  }
  return std::nullopt;
}

ExperimentReport exp_theorem1(const ExperimentConfig& config) {
  ExperimentReport r = walk_experiment(config, "theorem1");
  r.checks.push_back(at_least("band_success_fraction", *r.aggregate("band_success_fraction"), 0.9));
  r.checks.push_back(at_most("median_abs_slope", *r.aggregate("median_abs_slope"), 1e-3));
  return r;
}

ExperimentReport exp_prop1(const ExperimentConfig& config) {
  ExperimentReport r = walk_experiment(config, "prop1");
  r.checks.push_back(at_least("prop1_fraction", *r.aggregate("prop1_fraction"), 0.9));
  return r;
}

ExperimentReport exp_prop2(const ExperimentConfig& config) {
  ExperimentReport r = walk_experiment(config, "prop2");
  r.checks.push_back(at_least("median_coverage", *r.aggregate("median_coverage"), 0.8));
  r.checks.push_back(at_least("l_size_in_range_fraction", *r.aggregate("l_size_in_range_fraction"), 0.8));
  return r;
}

ExperimentReport exp_lemma_containment(const ExperimentConfig& config) {
  ExperimentReport r = walk_experiment(config, "lemma_containment");
  r.checks.push_back(at_least("containment_fraction", *r.aggregate("containment_fraction"), 0.9));
  return r;
}

ExperimentReport exp_oracle(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.experiment = "oracle";
  c.validate();
  ExperimentReport report;
  report.experiment = "oracle";
  report.config = c;

  ExcursionOptions options;
  options.threads = c.threads;

  // Sweep: one random (env, m, k) per replication with 2 <= |k - m| <= 6.
  std::size_t mc_violations = 0, var_violations = 0, capped = 0;
  double worst_var_ratio = 0.0;
  for (std::uint64_t e = 0; e < c.reps; ++e) {
    const std::uint64_t seed = derive_seed(c.master_seed, "oracle-env", e);
    const Environment env = Environment::sample(c.env_spec(seed), {-64, 64});
    std::mt19937_64 pick(derive_seed(seed, "oracle-site"));
    const Site m = std::uniform_int_distribution<Site>(-32, 32)(pick);
    const Site d = std::uniform_int_distribution<Site>(2, 6)(pick);
    const Site k = std::uniform_int_distribution<int>(0, 1)(pick) == 0 ? m - d : m + d;
    OracleRecord rec = oracle_record(env, m, k, c.excursions, derive_seed(seed, "oracle-mc"), options);
    mc_violations += std::abs(rec.mc->mean - rec.expected_green) > 4.0 * rec.mc->stderr_mean;
    var_violations += rec.mc->variance > *rec.variance_bound + 4.0 * rec.mc->stderr_variance;
    worst_var_ratio = std::max(worst_var_ratio, rec.mc->variance / *rec.variance_bound);
    capped += rec.mc->capped;
    report.oracle_records.push_back(std::move(rec));
  }

  // Return visit: E[L(m, T_m)] = 1.
  const Environment env0 = Environment::sample(c.env_spec(derive_seed(c.master_seed, "oracle-env", 0)), {-64, 64});
  OracleRecord self = oracle_record(env0, 0, 0, c.excursions, derive_seed(c.master_seed, "oracle-self"), options);
  const double self_mean = self.mc->mean;
  report.oracle_records.push_back(std::move(self));

  // Closed form versus first principles on alpha = 0.7, 0.6, 0.8.
  const Environment explicit_env = Environment::from_alpha(0, {0.7, 0.6, 0.8});
  OracleRecord disc =
      oracle_record(explicit_env, 0, 2, c.excursions, derive_seed(c.master_seed, "oracle-discrepancy"), options);
  const double disc_green = disc.expected_green;
  const double disc_paper = disc.expected_paper;
  const double disc_z = std::abs(disc.mc->mean - disc.expected_green) / disc.mc->stderr_mean;
  const double disc_z_paper = std::abs(disc.mc->mean - disc.expected_paper) / disc.mc->stderr_mean;
  report.oracle_records.push_back(std::move(disc));

  // Ellipticity band over random (env, m, k).
  std::size_t band_violations = 0;
  for (std::uint64_t i = 0; i < c.band_samples; ++i) {
    const std::uint64_t seed = derive_seed(c.master_seed, "band-env", i);
    const Environment env = Environment::sample(c.env_spec(seed), {-16, 16});
    std::mt19937_64 pick(derive_seed(seed, "band-site"));
    const Site m = std::uniform_int_distribution<Site>(-8, 8)(pick);
    const Site d = std::uniform_int_distribution<Site>(1, 6)(pick);
    const Site k = std::uniform_int_distribution<int>(0, 1)(pick) == 0 ? m - d : m + d;
    band_violations += !ellipticity_band(env, m, k).ok;
  }

  report.aggregates = {
      {"sweep_size", static_cast<double>(c.reps)},
      {"excursions", static_cast<double>(c.excursions)},
      {"mc_agreement_violations", static_cast<double>(mc_violations)},
      {"variance_bound_violations", static_cast<double>(var_violations)},
      {"max_variance_to_bound_ratio", worst_var_ratio},
      {"capped_excursions", static_cast<double>(capped)},
      {"return_visit_mean", self_mean},
      {"discrepancy_green", disc_green},
      {"discrepancy_paper", disc_paper},
      {"discrepancy_mc_z_green", disc_z},
      {"discrepancy_mc_z_paper", disc_z_paper},
      {"band_samples", static_cast<double>(c.band_samples)},
      {"band_violations", static_cast<double>(band_violations)},
  };
  report.checks.push_back(at_most("mc_agreement_violations", static_cast<double>(mc_violations), 0));
  report.checks.push_back(at_most("variance_bound_violations", static_cast<double>(var_violations), 0));
  report.checks.push_back(at_most("band_violations", static_cast<double>(band_violations), 0));
  report.checks.push_back(at_most("return_visit_relative_error", std::abs(self_mean - 1.0), 0.01));
  report.checks.push_back(at_most("discrepancy_mc_z_green", disc_z, 3.0));
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  if (config.experiment == "theorem1") return exp_theorem1(config);
  if (config.experiment == "prop1") return exp_prop1(config);
  if (config.experiment == "prop2") return exp_prop2(config);
  if (config.experiment == "lemma_containment") return exp_lemma_containment(config);
  if (config.experiment == "oracle") return exp_oracle(config);
  throw ConfigError("unknown experiment '" + config.experiment + "'");
}

std::string ExperimentReport::json() const {
  ojson j;
  j["experiment"] = experiment;
  j["provenance"] = {{"version", version()},
                     {"config_hash", hex64(config.hash())},
                     {"master_seed", config.master_seed},
                     {"seed_derivation", "splitmix64(parent ^ splitmix64(fnv1a(label) + index))"},
                     {"config", config_json(config)}};
  ojson agg = ojson::object();
  for (const auto& [k, v] : aggregates) agg[k] = std::isnan(v) ? ojson(nullptr) : ojson(v);
  j["aggregates"] = agg;
  ojson checks_json = ojson::array();
  for (const AcceptanceCheck& c : checks) {
    checks_json.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"ok", c.ok}});
  }
  j["acceptance"] = {{"passed", passed()}, {"checks", checks_json}};
  ojson recs = ojson::array();
  for (const ReplicationRecord& r : replications) recs.push_back(to_json(r));
  for (const OracleRecord& r : oracle_records) recs.push_back(to_json(r));
  j["records"] = recs;
  return j.dump(2) + "\n";
}

std::string ExperimentReport::records_csv() const {
  if (experiment == "oracle") return oracle_csv(oracle_records);
  std::string out =
      "index,replication_seed,environment_seed,walk_seed,valley_found,M_n_prime,m_n,M_n,depth,window_bound_ok,"
      "sa_weight,sa_weight_ok,k_star,t_k_star,sign_tie,favorites,l_star,threshold,l_size,l_lo,l_hi,connected,"
      "coverage,l_size_ratio,favorites_applicable,favorites_in_l,band_evaluated,sup_error,within_band,slope,"
      "intercept,max_favorite_distance,t_gap,distance_ok,time_ok,v_size,contained\n";
  const auto b = [](bool x) { return std::string(x ? "1" : "0"); };
  for (const ReplicationRecord& r : replications) {
    out += std::to_string(r.index) + "," + hex64(r.seeds.replication) + "," + hex64(r.seeds.environment) + "," +
           hex64(r.seeds.walk) + "," + b(r.valley_found) + ",";
    if (r.valley_found) {
      out += std::to_string(r.valley.left) + "," + std::to_string(r.valley.bottom) + "," +
             std::to_string(r.valley.right) + "," + format_real(r.valley_depth) + "," + b(r.window_bound_ok) + "," +
             format_real(r.sa_weight) + "," + b(r.sa_weight_ok) + ",";
    } else {
      out += ",,,,,,,";
    }
    out += std::to_string(r.k_star) + "," + std::to_string(r.t_k_star) + "," + b(r.sign_tie) + "," +
           std::to_string(r.favorites) + "," + std::to_string(r.l_star) + "," + format_real(r.threshold) + "," +
           std::to_string(r.l_size) + ",";
    out += r.l_size > 0 ? std::to_string(r.l_lo) + "," + std::to_string(r.l_hi) + "," : std::string(",,");
    out += b(r.connected) + "," + format_real(r.coverage) + "," + format_real(r.l_size_ratio) + "," +
           b(r.favorites_applicable) + "," + b(r.favorites_in_l) + "," + b(r.band_evaluated) + ",";
    if (r.band_evaluated) {
      out += format_real(r.sup_error) + "," + b(r.within_band) + "," + format_real(r.slope) + "," +
             format_real(r.intercept) + ",";
    } else {
      out += ",,,,";
    }
    out += (r.max_favorite_distance ? std::to_string(*r.max_favorite_distance) : std::string()) + ",";
    out += (r.t_gap ? std::to_string(*r.t_gap) : std::string()) + ",";
    out += b(r.distance_ok) + "," + b(r.time_ok) + "," + std::to_string(r.v_size) + "," + b(r.contained) + "\n";
  }
  return out;
}

std::string figure_csv(const ExperimentReport& report, FigureKind which) {
  std::string out = which == FigureKind::reconstruction ? "k,target,s_hat_minus_un,s_hat_plus_un\n" : "k,diff,fitted\n";
  if (report.replications.empty()) return out;
  const ReplicationRecord& r = report.replications.front();
  for (const SiteDifference& d : r.diffs) {
    out += std::to_string(d.k) + ",";
    if (which == FigureKind::reconstruction) {
      out += format_real(d.target) + "," + format_real(d.s_hat - r.u_n) + "," + format_real(d.s_hat + r.u_n) + "\n";
    } else {
      const double fitted = r.intercept + r.slope * static_cast<double>(d.k);
      out += format_real(d.diff) + "," + format_real(fitted) + "\n";
    }
  }
  return out;
}

std::vector<std::filesystem::path> write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  const auto emit = [&](const std::string& name, const std::string& text) {
    written.push_back(dir / (report.experiment + "_" + name));
    write_text(written.back(), text);
  };
  emit("report.json", report.json());
  emit("records.csv", report.records_csv());
  if (report.experiment != "oracle") {
    emit("reconstruction.csv", figure_csv(report, FigureKind::reconstruction));
    emit("difference.csv", figure_csv(report, FigureKind::difference));
  }
  return written;
}

std::string version() { return SINAI_VERSION; }

}  // namespace sinai

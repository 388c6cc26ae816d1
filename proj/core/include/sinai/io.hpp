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
#include "sinai/walk.hpp"

namespace sinai {

/// Shortest decimal text that round-trips (17 significant digits at most).
[[nodiscard]] std::string format_real(double x);

/// `# {json header}` line followed by `site,alpha,epsilon,S` rows; alpha is
/// printed with 17 significant digits.
[[nodiscard]] std::string environment_csv(const Environment& env);
void write_environment_csv(const std::filesystem::path& path, const Environment& env);
/// Re-samples from the header spec when present (and checks every alpha
/// against the file); explicit environments come back through from_alpha.
[[nodiscard]] Environment read_environment_csv(const std::filesystem::path& path);
[[nodiscard]] Environment parse_environment_csv(const std::string& text);

struct RunHeader {
  std::uint64_t env_hash = 0;
  std::uint64_t n = 0;
  std::uint64_t walk_seed = 0;
  std::optional<EnvironmentSpec> spec;
};

/// Text header line (JSON) followed by the packed step words, 16 hex digits per line.
[[nodiscard]] std::string run_artifact(const WalkRun& run);
void write_run_artifact(const std::filesystem::path& path, const WalkRun& run);
struct LoadedRun {
  RunHeader header;
  WalkRun run;
};
[[nodiscard]] LoadedRun parse_run_artifact(const std::string& text);
[[nodiscard]] LoadedRun read_run_artifact(const std::filesystem::path& path);

/// site,count,first_hit_time for visited sites.
[[nodiscard]] std::string ledger_csv(const LocalTimeLedger& ledger);

[[nodiscard]] std::string valley_json(const BasicValley& valley, const std::vector<Site>& v_gamma);

/// k,L_kn,post_count,in_L_gamma,s_hat,target,diff; target and diff are empty
/// without a profile or outside its window.
[[nodiscard]] std::string estimate_csv(const EstimateTable& table, const TargetProfile* profile = nullptr);

[[nodiscard]] std::string oracle_csv(const std::vector<OracleRecord>& records);

[[nodiscard]] std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace sinai

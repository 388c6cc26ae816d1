#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sinai/types.hpp"

namespace sinai {

/// alpha_i = p or 1 - p with probability 1/2 each.
struct TwoPoint {
  double p = 0.3;
};

/// alpha_i uniform on [eta0, 1 - eta0].
struct UniformElliptic {
  double eta0 = 0.1;
};

using EnvironmentFamily = std::variant<TwoPoint, UniformElliptic>;

/// Law of the i.i.d. environment plus the seed that fixes its realization.
/// Both families are symmetric about 1/2, so E[log((1-a)/a)] = 0 holds exactly.
struct EnvironmentSpec {
  EnvironmentFamily family = TwoPoint{};
  std::uint64_t master_seed = 0;

  /// Throws ConfigError when the family parameter is out of range.
  void validate() const;

  [[nodiscard]] std::string family_name() const;  // "two-point" | "uniform"
  [[nodiscard]] double parameter() const;         // p or eta0
  [[nodiscard]] std::uint64_t hash() const;       // stable identity of (family, parameter, seed)

  /// Builds a spec from a CLI-style family name and parameter.
  static EnvironmentSpec from_name(const std::string& family, double parameter, std::uint64_t seed);
};

struct HypothesisReport {
  double mean_eps = 0.0;
  double sigma2 = 0.0;
  double eta0 = 0.0;
};

/// Exact moments of eps = log((1-a)/a) for the family (no sampling).
[[nodiscard]] HypothesisReport hypothesis_diagnostics(const EnvironmentSpec& spec);

/// A realized environment over a finite window of the lattice.
///
/// Sampled environments draw alpha_i from a counter-based stream keyed by
/// (master_seed, sign of i, |i|), so growing the window never changes sites
/// that were already drawn, whatever the order of extensions. Explicit
/// environments (built from a vector of alphas) fill sites outside the given
/// values with a constant background probability.
class Environment {
 public:
  static Environment sample(const EnvironmentSpec& spec, SiteRange window);
  static Environment from_alpha(Site lo, std::vector<double> alpha, double background = 0.5);

  /// New environment over `window`, which must contain the current window.
  [[nodiscard]] Environment extended(SiteRange window) const;

  [[nodiscard]] SiteRange window() const noexcept { return window_; }
  [[nodiscard]] double alpha(Site i) const { return alpha_[index(i)]; }
  [[nodiscard]] double beta(Site i) const { return 1.0 - alpha_[index(i)]; }
  [[nodiscard]] double epsilon(Site i) const { return epsilon_[index(i)]; }
  [[nodiscard]] std::span<const double> alphas() const noexcept { return alpha_; }
  [[nodiscard]] std::span<const double> epsilons() const noexcept { return epsilon_; }
  [[nodiscard]] const std::optional<EnvironmentSpec>& spec() const noexcept { return spec_; }

  /// Ellipticity constant: the family's eta0, or min(alpha, 1 - alpha) over
  /// the window (and background) for explicit environments.
  [[nodiscard]] double eta0() const;

  /// Integer step (+1/-1) of the potential at site i for two-point
  /// environments; empty for other environments.
  [[nodiscard]] std::optional<int> lattice_step(Site i) const;
  /// Unit of the two-point potential, log((1-p)/p).
  [[nodiscard]] std::optional<double> lattice_unit() const;

  /// Identity of the environment law and realization source (not the window).
  [[nodiscard]] std::uint64_t identity() const;

 private:
  Environment() = default;
  [[nodiscard]] std::size_t index(Site i) const;
  void fill(Site from, Site to, std::vector<double>& alpha, std::vector<double>& eps,
            std::vector<std::int8_t>& steps) const;

  SiteRange window_{};
  std::vector<double> alpha_;
  std::vector<double> epsilon_;
  std::vector<std::int8_t> steps_;  // two-point only
  std::optional<EnvironmentSpec> spec_;
  double background_ = 0.5;
};

[[nodiscard]] Environment sample_environment(const EnvironmentSpec& spec, SiteRange window);
[[nodiscard]] Environment extend_environment(const Environment& env, SiteRange new_window);

/// The random potential S over the environment window: S_0 = 0 and
/// S_k - S_{k-1} = eps_k, so S_k = sum_{1<=i<=k} eps_i for k > 0 and
/// S_k = -sum_{k+1<=i<=0} eps_i for k < 0.
class PotentialPath {
 public:
  PotentialPath(SiteRange window, std::vector<double> values);

  [[nodiscard]] SiteRange window() const noexcept { return window_; }
  [[nodiscard]] double operator[](Site k) const { return s_[static_cast<std::size_t>(k - window_.lo)]; }
  [[nodiscard]] double at(Site k) const;
  [[nodiscard]] std::span<const double> values() const noexcept { return s_; }

  /// Mirror image k -> -k (values S'_k = S_{-k}).
  [[nodiscard]] PotentialPath mirrored() const;

 private:
  SiteRange window_;
  std::vector<double> s_;
};

/// Two-point environments use exact integer heights times the lattice unit,
/// so equal heights give bit-identical S values.
[[nodiscard]] PotentialPath potential(const Environment& env);

}  // namespace sinai

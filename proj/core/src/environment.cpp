#include "sinai/environment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sinai/seeding.hpp"

namespace sinai {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::uint64_t site_bits(std::uint64_t master_seed, Site i) {
  // Separate sub-streams for the two half-lattices; site 0 belongs to the right one.
  const std::uint64_t half = derive_seed(master_seed, "environment", i < 0 ? 1 : 0);
  const auto magnitude = static_cast<std::uint64_t>(i < 0 ? -i : i);
  return splitmix64(half ^ splitmix64(magnitude));
}

}  // namespace

void EnvironmentSpec::validate() const {
  std::visit(Overloaded{
                 [](const TwoPoint& f) {
                   if (!(f.p > 0.0 && f.p < 1.0))
                     throw ConfigError("two-point parameter p must lie in (0, 1)");
                   if (f.p == 0.5)
                     throw ConfigError("two-point parameter p = 1/2 gives sigma^2 = 0 (simple random walk)");
                 },
                 [](const UniformElliptic& f) {
                   if (!(f.eta0 > 0.0 && f.eta0 < 0.5))
                     throw ConfigError("uniform parameter eta0 must lie in (0, 1/2)");
                 },
             },
             family);
}

std::string EnvironmentSpec::family_name() const {
  return std::holds_alternative<TwoPoint>(family) ? "two-point" : "uniform";
}

double EnvironmentSpec::parameter() const {
  return std::visit(Overloaded{[](const TwoPoint& f) { return f.p; },
                               [](const UniformElliptic& f) { return f.eta0; }},
                    family);
}

std::uint64_t EnvironmentSpec::hash() const {
  std::uint64_t h = label_hash(family_name());
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(parameter()));
  return splitmix64(h ^ master_seed);
}

EnvironmentSpec EnvironmentSpec::from_name(const std::string& family, double parameter,
                                           std::uint64_t seed) {
  EnvironmentSpec spec;
  spec.master_seed = seed;
  if (family == "two-point" || family == "twopoint" || family == "TwoPoint") {
    spec.family = TwoPoint{parameter};
  } else if (family == "uniform" || family == "UniformElliptic") {
    spec.family = UniformElliptic{parameter};
  } else {
    throw ConfigError("unknown environment family '" + family + "' (expected two-point or uniform)");
  }
  spec.validate();
  return spec;
}

HypothesisReport hypothesis_diagnostics(const EnvironmentSpec& spec) {
  spec.validate();
  return std::visit(
      Overloaded{
          [](const TwoPoint& f) {
            const double unit = std::log((1.0 - f.p) / f.p);
            return HypothesisReport{0.0, unit * unit, std::min(f.p, 1.0 - f.p)};
          },
          [](const UniformElliptic& f) {
            // Var = 2/(1-2 eta0) * int_{eta0}^{1/2} log^2((1-a)/a) da by symmetry about 1/2.
            auto integrand = [](double a) {
              const double e = std::log((1.0 - a) / a);
              return e * e;
            };
            const double half = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                integrand, f.eta0, 0.5, 15, 1e-14);
            return HypothesisReport{0.0, 2.0 * half / (1.0 - 2.0 * f.eta0), f.eta0};
          },
      },
      spec.family);
}

Environment Environment::sample(const EnvironmentSpec& spec, SiteRange window) {
  spec.validate();
  if (!window.contains(0)) throw UsageError("environment window must contain site 0");
  Environment env;
  env.spec_ = spec;
  env.window_ = window;
  env.fill(window.lo, window.hi, env.alpha_, env.epsilon_, env.steps_);
  return env;
}

Environment Environment::from_alpha(Site lo, std::vector<double> alpha, double background) {
  if (alpha.empty()) throw UsageError("explicit environment needs at least one site");
  for (double a : alpha) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("explicit alpha values must lie in (0, 1)");
  }
  if (!(background > 0.0 && background < 1.0)) throw ConfigError("background alpha must lie in (0, 1)");
  Environment env;
  env.window_ = {lo, lo + static_cast<Site>(alpha.size()) - 1};
  env.background_ = background;
  env.epsilon_.reserve(alpha.size());
  for (double a : alpha) env.epsilon_.push_back(std::log((1.0 - a) / a));
  env.alpha_ = std::move(alpha);
  return env;
}

void Environment::fill(Site from, Site to, std::vector<double>& alpha, std::vector<double>& eps,
                       std::vector<std::int8_t>& steps) const {
  for (Site i = from; i <= to; ++i) {
    if (!spec_) {
      alpha.push_back(background_);
      eps.push_back(std::log((1.0 - background_) / background_));
      continue;
    }
    const double u = unit_interval(site_bits(spec_->master_seed, i));
    std::visit(Overloaded{
                   [&](const TwoPoint& f) {
                     const int step = u < 0.5 ? +1 : -1;
                     const double unit = std::log((1.0 - f.p) / f.p);
                     alpha.push_back(step > 0 ? f.p : 1.0 - f.p);
                     eps.push_back(step * unit);
                     steps.push_back(static_cast<std::int8_t>(step));
                   },
                   [&](const UniformElliptic& f) {
                     const double a = f.eta0 + (1.0 - 2.0 * f.eta0) * u;
                     alpha.push_back(a);
                     eps.push_back(std::log((1.0 - a) / a));
                   },
               },
               spec_->family);
  }
}

Environment Environment::extended(SiteRange window) const {
  if (!window.contains(window_)) throw UsageError("extension must not shrink the environment window");
  if (window == window_) return *this;
  Environment env;
  env.spec_ = spec_;
  env.background_ = background_;
  env.window_ = window;
  const std::size_t total = window.size();
  env.alpha_.reserve(total);
  env.epsilon_.reserve(total);
  fill(window.lo, window_.lo - 1, env.alpha_, env.epsilon_, env.steps_);
  env.alpha_.insert(env.alpha_.end(), alpha_.begin(), alpha_.end());
  env.epsilon_.insert(env.epsilon_.end(), epsilon_.begin(), epsilon_.end());
  env.steps_.insert(env.steps_.end(), steps_.begin(), steps_.end());
  fill(window_.hi + 1, window.hi, env.alpha_, env.epsilon_, env.steps_);
  return env;
}

std::size_t Environment::index(Site i) const {
  if (!window_.contains(i)) {
    std::ostringstream msg;
    msg << "site " << i << " outside environment window [" << window_.lo << ", " << window_.hi << "]";
    throw UsageError(msg.str());
  }
  return static_cast<std::size_t>(i - window_.lo);
}

double Environment::eta0() const {
  if (spec_) {
    return std::visit(Overloaded{[](const TwoPoint& f) { return std::min(f.p, 1.0 - f.p); },
                                 [](const UniformElliptic& f) { return f.eta0; }},
                      spec_->family);
  }
  double eta = std::min(background_, 1.0 - background_);
  for (double a : alpha_) eta = std::min(eta, std::min(a, 1.0 - a));
  return eta;
}

std::optional<int> Environment::lattice_step(Site i) const {
  if (steps_.empty()) return std::nullopt;
  return steps_[index(i)];
}

std::optional<double> Environment::lattice_unit() const {
  if (!spec_) return std::nullopt;
  if (const auto* f = std::get_if<TwoPoint>(&spec_->family)) return std::log((1.0 - f->p) / f->p);
  return std::nullopt;
}

std::uint64_t Environment::identity() const {
  if (spec_) return spec_->hash();
  std::uint64_t h = label_hash("explicit");
  h = splitmix64(h ^ static_cast<std::uint64_t>(window_.lo));
  for (double a : alpha_) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(a));
  return splitmix64(h ^ std::bit_cast<std::uint64_t>(background_));
}

Environment sample_environment(const EnvironmentSpec& spec, SiteRange window) {
  return Environment::sample(spec, window);
}

Environment extend_environment(const Environment& env, SiteRange new_window) {
  return env.extended(new_window);
}

PotentialPath::PotentialPath(SiteRange window, std::vector<double> values)
    : window_(window), s_(std::move(values)) {
  if (s_.size() != window_.size()) throw UsageError("potential values do not match window size");
}

double PotentialPath::at(Site k) const {
  if (!window_.contains(k)) throw UsageError("site outside potential window");
  return (*this)[k];
}

PotentialPath PotentialPath::mirrored() const {
  std::vector<double> values(s_.rbegin(), s_.rend());
  return PotentialPath({-window_.hi, -window_.lo}, std::move(values));
}

PotentialPath potential(const Environment& env) {
  const SiteRange w = env.window();
  if (!w.contains(0)) throw UsageError("potential needs an environment window containing 0");
  std::vector<double> s(w.size(), 0.0);
  const auto at = [&](Site k) -> double& { return s[static_cast<std::size_t>(k - w.lo)]; };

  if (const auto unit = env.lattice_unit(); unit && env.lattice_step(0)) {
    std::vector<std::int64_t> h(w.size(), 0);
    const auto height = [&](Site k) -> std::int64_t& { return h[static_cast<std::size_t>(k - w.lo)]; };
    for (Site k = 1; k <= w.hi; ++k) height(k) = height(k - 1) + *env.lattice_step(k);
    for (Site k = -1; k >= w.lo; --k) height(k) = height(k + 1) - *env.lattice_step(k + 1);
    for (Site k = w.lo; k <= w.hi; ++k) at(k) = static_cast<double>(height(k)) * *unit;
  } else {
    for (Site k = 1; k <= w.hi; ++k) at(k) = at(k - 1) + env.epsilon(k);
    for (Site k = -1; k >= w.lo; --k) at(k) = at(k + 1) - env.epsilon(k + 1);
  }
  return PotentialPath(w, std::move(s));
}

}  // namespace sinai

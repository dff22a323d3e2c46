#ifndef BELLCHSH_SCENARIOS_HPP
#define BELLCHSH_SCENARIOS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bellchsh/correlators.hpp"
#include "bellchsh/errors.hpp"
#include "bellchsh/observables.hpp"
#include "bellchsh/optimizer.hpp"
#include "bellchsh/states.hpp"
#include "bellchsh/tensor.hpp"

namespace bellchsh {

/// State parameters a scenario may read; unused fields are ignored.
struct ScenarioParams {
  long long n = 10;
  SpinJ j{2};
  double lambda = 0.5;
  double eta = 1.0;
  double sigma = 1.0;
  double phi = std::numbers::pi;
  double r = 0.5;
};

namespace detail {

inline std::vector<Interval> phase_domain(std::size_t d) { return std::vector<Interval>(d, Interval::phase()); }

/// theta, alpha, theta', alpha', omega, beta, omega', beta'.
inline std::vector<Interval> polar_chsh_domain() {
  std::vector<Interval> d(8, Interval::phase());
  for (std::size_t i = 0; i < 8; i += 2) d[i] = Interval::polar(i + 1);
  return d;
}

inline std::vector<std::string> polar_chsh_names() {
  return {"theta", "alpha", "theta'", "alpha'", "omega", "beta", "omega'", "beta'"};
}

inline std::vector<std::string> phase_chsh_names() { return {"alpha", "alpha'", "beta", "beta'"}; }

inline ChshPolar polar_from(std::span<const double> x) {
  return {x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7]};
}

inline ChshPhases phases_from(std::span<const double> x) { return {x[0], x[1], x[2], x[3]}; }

/// CHSH of a two-qubit state with polar observables, through the dense matrices.
inline double chsh_matrix_polar(const StateVector& psi, std::span<const double> x) {
  const std::array<DenseOperator, 2> alice{polar_observable(PolarSetting(x[0], x[1])),
                                           polar_observable(PolarSetting(x[2], x[3]))};
  const std::array<DenseOperator, 2> bob{polar_observable(PolarSetting(x[4], x[5])),
                                         polar_observable(PolarSetting(x[6], x[7]))};
  return chsh_combination([&](int i, int k) { return expectation(alice[i], bob[k], psi).real(); });
}

}  // namespace detail

inline Scenario phi0_phase_scenario() {
  return {"phi0-phase", [](std::span<const double> x) { return chsh_phi0_phase(detail::phases_from(x)); },
          detail::phase_domain(4), {}, detail::phase_chsh_names(), kChshBounds};
}

inline Scenario phi0_polar_scenario() {
  return {"phi0-polar", [](std::span<const double> x) { return chsh_phi0_polar(detail::polar_from(x)); },
          detail::polar_chsh_domain(), {}, detail::polar_chsh_names(), kChshBounds};
}

inline Scenario gisin_scenario(long long n) {
  if (n < 3) throw DomainError("gisin: N must be >= 3, got " + std::to_string(n));
  return {"gisin",
          [n](std::span<const double> x) { return chsh_gisin(n, detail::polar_from(x)); },
          detail::polar_chsh_domain(),
          {{"N", static_cast<double>(n)}},
          detail::polar_chsh_names(),
          kChshBounds};
}

inline Scenario spin_scenario(SpinJ j) {
  const std::size_t pairs = j.dim() / 2;
  std::vector<std::string> names;
  for (const char* base : {"alpha", "alpha'", "beta", "beta'"}) {
    for (std::size_t k = 0; k < pairs; ++k) names.push_back(std::string(base) + "_" + std::to_string(k + 1));
  }
  return {"spin",
          [j, pairs](std::span<const double> x) {
            SpinPairAngles a;
            a.alpha.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(pairs));
            a.alpha_p.assign(x.begin() + static_cast<std::ptrdiff_t>(pairs),
                             x.begin() + static_cast<std::ptrdiff_t>(2 * pairs));
            a.beta.assign(x.begin() + static_cast<std::ptrdiff_t>(2 * pairs),
                          x.begin() + static_cast<std::ptrdiff_t>(3 * pairs));
            a.beta_p.assign(x.begin() + static_cast<std::ptrdiff_t>(3 * pairs), x.end());
            return chsh_spin_j(j, a);
          },
          detail::phase_domain(4 * pairs),
          {{"j", j.value()}},
          std::move(names),
          kChshBounds};
}

inline Scenario coherent_scenario(double eta, double sigma, double phi) {
  (void)coherent_omega(eta, sigma, phi);  // reject the degenerate point up front
  return {"coherent",
          [=](std::span<const double> x) { return chsh_coherent(eta, sigma, phi, detail::phases_from(x)); },
          detail::phase_domain(4),
          {{"eta", eta}, {"sigma", sigma}, {"phi", phi}},
          detail::phase_chsh_names(),
          kChshBounds};
}

inline Scenario squeezed_scenario(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw DomainError("squeezed: lambda must lie in (0, 1), got " + std::to_string(lambda));
  }
  return {"squeezed",
          [lambda](std::span<const double> x) { return chsh_squeezed(lambda, detail::phases_from(x)); },
          detail::phase_domain(4),
          {{"lambda", lambda}},
          detail::phase_chsh_names(),
          kChshBounds};
}

inline Scenario mermin3_scenario() {
  return {"mermin3",
          [](std::span<const double> x) { return mermin3_ghz({x[0], x[1], x[2], x[3], x[4], x[5]}); },
          detail::phase_domain(6),
          {{"parties", 3.0}},
          {"alpha", "alpha'", "beta", "beta'", "gamma", "gamma'"},
          kMermin3Bounds};
}

inline Scenario mermin4_scenario() {
  return {"mermin4",
          [](std::span<const double> x) {
            MerminPhases4 p{};
            std::copy(x.begin(), x.end(), p.begin());
            return mermin4_ghz(p);
          },
          detail::phase_domain(8),
          {{"parties", 4.0}},
          {"alpha", "alpha'", "beta", "beta'", "gamma", "gamma'", "delta", "delta'"},
          kMermin4Bounds};
}

/// |+-> with general qubit observables; evaluated through the dense matrices.
inline Scenario product_polar_scenario() {
  const StateVector psi({0.0, 1.0, 0.0, 0.0}, {2, 2});
  return {"product-polar",
          [psi](std::span<const double> x) { return detail::chsh_matrix_polar(psi, x); },
          detail::polar_chsh_domain(), {}, detail::polar_chsh_names(), kChshBounds};
}

/// (|+-> + r|-+>)/sqrt(1 + r^2) with general qubit observables.
inline Scenario r_state_scenario(double r) {
  const StateVector psi = r_state(r);
  return {"r-state",
          [psi](std::span<const double> x) { return detail::chsh_matrix_polar(psi, x); },
          detail::polar_chsh_domain(),
          {{"r", r}},
          detail::polar_chsh_names(),
          kChshBounds};
}

/// Names accepted by make_scenario.
inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"phi0-phase", "phi0-polar", "gisin",   "spin",
                                              "coherent",   "squeezed",   "mermin3", "mermin4",
                                              "product-polar", "r-state"};
  return names;
}

inline Scenario make_scenario(const std::string& name, const ScenarioParams& p = {}) {
  static const std::map<std::string, std::function<Scenario(const ScenarioParams&)>> registry{
      {"phi0-phase", [](const ScenarioParams&) { return phi0_phase_scenario(); }},
      {"phi0-polar", [](const ScenarioParams&) { return phi0_polar_scenario(); }},
      {"gisin", [](const ScenarioParams& q) { return gisin_scenario(q.n); }},
      {"spin", [](const ScenarioParams& q) { return spin_scenario(q.j); }},
      {"coherent", [](const ScenarioParams& q) { return coherent_scenario(q.eta, q.sigma, q.phi); }},
      {"squeezed", [](const ScenarioParams& q) { return squeezed_scenario(q.lambda); }},
      {"mermin3", [](const ScenarioParams&) { return mermin3_scenario(); }},
      {"mermin4", [](const ScenarioParams&) { return mermin4_scenario(); }},
      {"product-polar", [](const ScenarioParams&) { return product_polar_scenario(); }},
      {"r-state", [](const ScenarioParams& q) { return r_state_scenario(q.r); }},
  };
  const auto it = registry.find(name);
  if (it == registry.end()) {
    std::string valid;
    for (const auto& n : scenario_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw DomainError("unknown scenario '" + name + "' (valid: " + valid + ")");
  }
  return it->second(p);
}

inline constexpr std::size_t kDefaultRestarts = 8;

struct GisinRow {
  long long n;
  double max_value;
  OptimizationResult result;
};

/// Maximal CHSH value of the N-family for each N.
inline std::vector<GisinRow> table_gisin(std::span<const long long> ns, std::size_t restarts = kDefaultRestarts,
                                         std::uint64_t seed = 0, const OptimizerOptions& opt = {}) {
  for (const long long n : ns) {
    if (n < 3) throw DomainError("table_gisin: N must be >= 3, got " + std::to_string(n));
  }
  std::vector<GisinRow> rows;
  rows.reserve(ns.size());
  for (const long long n : ns) {
    auto res = maximize_violation(gisin_scenario(n), restarts, seed, opt);
    rows.push_back({n, res.best_value, std::move(res)});
  }
  return rows;
}

}  // namespace bellchsh

#endif  // BELLCHSH_SCENARIOS_HPP

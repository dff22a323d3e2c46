#ifndef BELLCHSH_CORRELATORS_HPP
#define BELLCHSH_CORRELATORS_HPP

#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bellchsh/errors.hpp"
#include "bellchsh/observables.hpp"
#include "bellchsh/states.hpp"
#include "bellchsh/tensor.hpp"
#include "bellchsh/tolerances.hpp"

namespace bellchsh {

inline constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;

/// Classical (local) and quantum ceilings for one family of inequalities.
struct Bounds {
  double classical;
  double quantum;
};

inline constexpr Bounds kChshBounds{2.0, kTsirelson};
inline constexpr Bounds kMermin3Bounds{2.0, 4.0};
inline constexpr Bounds kMermin4Bounds{2.0, 4.0 * std::numbers::sqrt2};

/// Named observable parameters, in the order the scenario defines them.
struct AngleSet {
  std::vector<std::string> names;
  std::vector<double> values;

  void add(std::string name, double value) {
    names.push_back(std::move(name));
    values.push_back(value);
  }
  std::size_t size() const noexcept { return values.size(); }
};

struct CorrelatorReport {
  double value = 0.0;
  double classical_bound = 2.0;
  double quantum_bound = kTsirelson;
  bool violated = false;
  AngleSet settings;
};

/// Classifies a correlator value. A violation is a strict |value| > classical
/// bound; a value beyond the quantum ceiling is a logic error upstream.
inline CorrelatorReport make_report(double value, Bounds bounds, AngleSet settings = {}) {
  if (!std::isfinite(value)) throw NumericGuardError("correlator value is not finite");
  if (std::fabs(value) > bounds.quantum + tol::kOracle) {
    throw std::logic_error("correlator value " + std::to_string(value) +
                           " exceeds the quantum bound " + std::to_string(bounds.quantum));
  }
  CorrelatorReport r;
  r.value = value;
  r.classical_bound = bounds.classical;
  r.quantum_bound = bounds.quantum;
  r.violated = std::fabs(value) > bounds.classical;
  r.settings = std::move(settings);
  return r;
}

/// <psi|O|psi> with the bound classification; O must be Hermitian.
inline CorrelatorReport generic_correlator(const StateVector& psi, const DenseOperator& op,
                                           Bounds bounds = kChshBounds, AngleSet settings = {}) {
  if (!op.hermitian()) throw DomainError("generic_correlator: operator is not Hermitian");
  const cplx v = expectation(op, psi);
  return make_report(v.real(), bounds, std::move(settings));
}

/// Phases (alpha, alpha', beta, beta') of two-party flip observables.
struct ChshPhases {
  double alpha = 0.0;
  double alpha_p = 0.0;
  double beta = 0.0;
  double beta_p = 0.0;

  AngleSet as_angle_set() const {
    AngleSet s;
    s.add("alpha", alpha);
    s.add("alpha'", alpha_p);
    s.add("beta", beta);
    s.add("beta'", beta_p);
    return s;
  }
};

/// Alice: (theta, alpha), (theta', alpha'); Bob: (omega, beta), (omega', beta').
struct ChshPolar {
  double theta = std::numbers::pi / 2;
  double alpha = 0.0;
  double theta_p = std::numbers::pi / 2;
  double alpha_p = 0.0;
  double omega = std::numbers::pi / 2;
  double beta = 0.0;
  double omega_p = std::numbers::pi / 2;
  double beta_p = 0.0;

  static ChshPolar from_phases(const ChshPhases& p) {
    ChshPolar out;
    out.alpha = p.alpha;
    out.alpha_p = p.alpha_p;
    out.beta = p.beta;
    out.beta_p = p.beta_p;
    return out;
  }

  AngleSet as_angle_set() const {
    AngleSet s;
    s.add("theta", theta);
    s.add("alpha", alpha);
    s.add("theta'", theta_p);
    s.add("alpha'", alpha_p);
    s.add("omega", omega);
    s.add("beta", beta);
    s.add("omega'", omega_p);
    s.add("beta'", beta_p);
    return s;
  }
};

/// The textbook optimum alpha = 0, alpha' = pi/2, beta = -pi/4, beta' = pi/4.
inline constexpr ChshPhases kStandardChshPhases{0.0, std::numbers::pi / 2, -std::numbers::pi / 4,
                                                std::numbers::pi / 4};

/// Generic CHSH combination E(a,b) + E(a',b) + E(a,b') - E(a',b') of a pair
/// correlation E taking Alice's then Bob's setting index (0 unprimed, 1 primed).
template <typename PairCorrelation>
double chsh_combination(PairCorrelation&& e) {
  return e(0, 0) + e(1, 0) + e(0, 1) - e(1, 1);
}

// ---- two qubits in phi0 -------------------------------------------------

inline double chsh_phi0_phase(const ChshPhases& a) {
  return std::cos(a.alpha + a.beta) + std::cos(a.alpha_p + a.beta) +
         std::cos(a.alpha + a.beta_p) - std::cos(a.alpha_p + a.beta_p);
}

/// <phi0|A (x) B|phi0> for polar observables.
inline double phi0_polar_correlation(double theta, double alpha, double omega, double beta) {
  return std::cos(theta) * std::cos(omega) + std::sin(theta) * std::sin(omega) * std::cos(alpha + beta);
}

inline double chsh_phi0_polar(const ChshPolar& p) {
  const std::array<std::pair<double, double>, 2> alice{{{p.theta, p.alpha}, {p.theta_p, p.alpha_p}}};
  const std::array<std::pair<double, double>, 2> bob{{{p.omega, p.beta}, {p.omega_p, p.beta_p}}};
  return chsh_combination([&](int i, int j) {
    return phi0_polar_correlation(alice[i].first, alice[i].second, bob[j].first, bob[j].second);
  });
}

// ---- the N-family (|++> + |+-> + |-+> + sqrt(N-3)|-->)/sqrt(N) ----------

/// <psi_N|A (x) B|psi_N> for polar observables.
inline double gisin_pair_correlation(long long n, double theta, double alpha, double omega,
                                     double beta) {
  if (n < 3) throw DomainError("chsh_gisin: N must be >= 3, got " + std::to_string(n));
  const double nn = static_cast<double>(n);
  const double root = std::sqrt(nn - 3.0);
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const double co = std::cos(omega);
  const double so = std::sin(omega);
  return ct * co * (nn - 4.0) / nn + 2.0 * ct * so * (1.0 - root) * std::cos(beta) / nn +
         2.0 * st * co * (1.0 - root) * std::cos(alpha) / nn +
         2.0 * st * so * (root * std::cos(alpha + beta) + std::cos(alpha - beta)) / nn;
}

inline double chsh_gisin(long long n, const ChshPolar& p) {
  const std::array<std::pair<double, double>, 2> alice{{{p.theta, p.alpha}, {p.theta_p, p.alpha_p}}};
  const std::array<std::pair<double, double>, 2> bob{{{p.omega, p.beta}, {p.omega_p, p.beta_p}}};
  return chsh_combination([&](int i, int j) {
    return gisin_pair_correlation(n, alice[i].first, alice[i].second, bob[j].first, bob[j].second);
  });
}

// ---- spin-j singlets with pairing observables ---------------------------

/// Spin-1 singlet with the |0>-fixing flip observables:
/// (2/3)(1 + cos(a-b) + cos(a'-b) + cos(a-b') - cos(a'-b')).
inline double chsh_spin1(const ChshPhases& a) {
  return (2.0 / 3.0) * (1.0 + std::cos(a.alpha - a.beta) + std::cos(a.alpha_p - a.beta) +
                        std::cos(a.alpha - a.beta_p) - std::cos(a.alpha_p - a.beta_p));
}

/// One phase per pair (|m>, |-m>), m = j, j-1, ... > 0, for each observable.
struct SpinPairAngles {
  std::vector<double> alpha;
  std::vector<double> alpha_p;
  std::vector<double> beta;
  std::vector<double> beta_p;

  /// The same four phases on every pair.
  static SpinPairAngles uniform(SpinJ j, const ChshPhases& p) {
    const std::size_t k = j.dim() / 2;
    return {std::vector<double>(k, p.alpha), std::vector<double>(k, p.alpha_p),
            std::vector<double>(k, p.beta), std::vector<double>(k, p.beta_p)};
  }

  AngleSet as_angle_set() const {
    AngleSet s;
    const std::array<std::pair<const char*, const std::vector<double>*>, 4> groups{
        {{"alpha", &alpha}, {"alpha'", &alpha_p}, {"beta", &beta}, {"beta'", &beta_p}}};
    for (const auto& [name, v] : groups) {
      for (std::size_t k = 0; k < v->size(); ++k) s.add(std::string(name) + "_" + std::to_string(k + 1), (*v)[k]);
    }
    return s;
  }
};

/// CHSH value of the spin-j singlet. Each pair contributes
/// 2(-1)^{2j}/(2j+1) [cos(a-b) + cos(a'-b) + cos(a-b') - cos(a'-b')] and, for
/// integer j, the fixed |0>(x)|0> component adds 2/(2j+1).
inline double chsh_spin_j(SpinJ j, const SpinPairAngles& a) {
  const std::size_t pairs = j.dim() / 2;
  if (a.alpha.size() != pairs || a.alpha_p.size() != pairs || a.beta.size() != pairs ||
      a.beta_p.size() != pairs) {
    throw DomainError("chsh_spin_j: spin " + j.str() + " needs " + std::to_string(pairs) +
                      " phases per observable");
  }
  const double d = static_cast<double>(j.dim());
  const double sign = j.is_integer() ? 1.0 : -1.0;
  double total = j.is_integer() ? 2.0 / d : 0.0;
  for (std::size_t k = 0; k < pairs; ++k) {
    const double bracket = std::cos(a.alpha[k] - a.beta[k]) + std::cos(a.alpha_p[k] - a.beta[k]) +
                           std::cos(a.alpha[k] - a.beta_p[k]) -
                           std::cos(a.alpha_p[k] - a.beta_p[k]);
    total += 2.0 * sign / d * bracket;
  }
  return total;
}

/// Largest |CHSH| reachable with pairing observables on the spin-j singlet:
/// 2 sqrt 2 for half-integer j, (2/(2j+1))(1 + 2j sqrt 2) for integer j.
inline double chsh_spin_j_max(SpinJ j) {
  if (!j.is_integer()) return kTsirelson;
  const double jj = j.value();
  return 2.0 / (2.0 * jj + 1.0) * (1.0 + 2.0 * jj * std::numbers::sqrt2);
}

// ---- entangled coherent states ------------------------------------------

/// sum_{n,m} eta^{4n+1} sigma^{4m+1} / sqrt((2n)!(2n+1)!(2m)!(2m+1)!), with
/// n, m <= max_index. The double sum factorizes into two single sums, each
/// stopped once a term drops below 1e-15 of its partial sum.
inline double coherent_delta(double eta, double sigma, std::size_t max_index = 60) {
  auto single = [max_index](double x) {
    // term_n = x^{4n+1} / sqrt((2n)!(2n+1)!)
    double term = x;
    double sum = 0.0;
    for (std::size_t n = 0; n <= max_index; ++n) {
      sum += term;
      const double a = static_cast<double>(2 * n + 1);
      const double b = static_cast<double>(2 * n + 2);
      const double c = static_cast<double>(2 * n + 3);
      // (2n+2)!(2n+3)! / ((2n)!(2n+1)!) = (2n+1)(2n+2)^2(2n+3)
      term *= x * x * x * x / std::sqrt(a * b * b * c);
      if (std::fabs(term) < 1e-15 * std::fabs(sum)) break;
    }
    return sum;
  };
  return single(eta) * single(sigma);
}

/// exp(-(eta^2 + sigma^2)) / (1 + cos(phi) exp(-2(eta^2 + sigma^2))).
inline double coherent_omega(double eta, double sigma, double phi) {
  const double s = eta * eta + sigma * sigma;
  const double denom = 1.0 + std::cos(phi) * std::exp(-2.0 * s);
  if (!(denom > 0.0)) {
    throw DegenerateStateError("chsh_coherent: normalization undefined (phi = pi, eta = sigma = 0)");
  }
  return std::exp(-s) / denom;
}

/// <psi_a|A (x) B|psi_a> = 4 Omega (cos a cos b - cos phi sin a sin b) Delta.
inline double coherent_pair_correlation(double eta, double sigma, double phi, double alpha,
                                        double beta, std::size_t max_index = 60) {
  return 4.0 * coherent_omega(eta, sigma, phi) * coherent_delta(eta, sigma, max_index) *
         (std::cos(alpha) * std::cos(beta) - std::cos(phi) * std::sin(alpha) * std::sin(beta));
}

/// CHSH value of N[|eta>|sigma> + e^{i phi}|-eta>|-sigma>] with pseudospin flip
/// observables. `max_index` truncates the Delta series (0 keeps only n = m = 0).
inline double chsh_coherent(double eta, double sigma, double phi, const ChshPhases& a,
                            std::size_t max_index = 60) {
  const double pre = 4.0 * coherent_omega(eta, sigma, phi) * coherent_delta(eta, sigma, max_index);
  const double cp = std::cos(phi);
  const std::array<double, 2> al{a.alpha, a.alpha_p};
  const std::array<double, 2> be{a.beta, a.beta_p};
  return pre * chsh_combination([&](int i, int j) {
           return std::cos(al[i]) * std::cos(be[j]) - cp * std::sin(al[i]) * std::sin(be[j]);
         });
}

// ---- two-mode squeezed state --------------------------------------------

/// 2 lambda / (1 + lambda^2) (cos(a+b) + cos(a'+b) + cos(a+b') - cos(a'+b')).
inline double chsh_squeezed(double lambda, const ChshPhases& a) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw DomainError("chsh_squeezed: lambda must lie in (0, 1), got " + std::to_string(lambda));
  }
  return 2.0 * lambda / (1.0 + lambda * lambda) * chsh_phi0_phase(a);
}

// ---- GHZ states and Mermin operators ------------------------------------

/// <GHZ_n| O_1 (x) ... (x) O_n |GHZ_n> for flip observables with phases
/// theta_k, where GHZ_n = (|+...+> - |-...->)/sqrt 2. The relative minus sign
/// of the GHZ state makes this -cos(theta_1 + ... + theta_n).
inline double ghz_product_correlation(std::span<const double> phases) {
  double s = 0.0;
  for (const double p : phases) s += p;
  return -std::cos(s);
}

/// Phases (alpha, alpha', beta, beta', gamma, gamma').
struct MerminPhases3 {
  double alpha = 0.0;
  double alpha_p = 0.0;
  double beta = 0.0;
  double beta_p = 0.0;
  double gamma = 0.0;
  double gamma_p = 0.0;

  AngleSet as_angle_set() const {
    AngleSet s;
    s.add("alpha", alpha);
    s.add("alpha'", alpha_p);
    s.add("beta", beta);
    s.add("beta'", beta_p);
    s.add("gamma", gamma);
    s.add("gamma'", gamma_p);
    return s;
  }
};

/// alpha = 0, alpha' = pi/2, beta = gamma = -pi/4, beta' = gamma' = pi/4.
inline constexpr MerminPhases3 kStandardMermin3Phases{
    0.0, std::numbers::pi / 2, -std::numbers::pi / 4, std::numbers::pi / 4,
    -std::numbers::pi / 4, std::numbers::pi / 4};

/// <GHZ|M3|GHZ> = -[cos(a'+b+g) + cos(a+b'+g) + cos(a+b+g') - cos(a'+b'+g')].
inline double mermin3_ghz(const MerminPhases3& p) {
  return -(std::cos(p.alpha_p + p.beta + p.gamma) + std::cos(p.alpha + p.beta_p + p.gamma) +
           std::cos(p.alpha + p.beta + p.gamma_p) - std::cos(p.alpha_p + p.beta_p + p.gamma_p));
}

/// Phases for four parties, unprimed then primed per party:
/// (alpha, alpha', beta, beta', gamma, gamma', delta, delta').
using MerminPhases4 = std::array<double, 8>;

/// Settings at which <GHZ4|M4|GHZ4> = 4 sqrt 2: every primed phase trails its
/// unprimed partner by pi/2 and the unprimed phases sum to -pi/4.
inline constexpr MerminPhases4 kStandardMermin4Phases{
    -std::numbers::pi / 4, -3 * std::numbers::pi / 4, 0.0, -std::numbers::pi / 2,
    0.0,                   -std::numbers::pi / 2,     0.0, -std::numbers::pi / 2};

inline AngleSet mermin4_angle_set(const MerminPhases4& p) {
  static constexpr std::array<const char*, 8> kNames{"alpha", "alpha'", "beta",  "beta'",
                                                     "gamma", "gamma'", "delta", "delta'"};
  AngleSet s;
  for (std::size_t i = 0; i < 8; ++i) s.add(kNames[i], p[i]);
  return s;
}

/// <GHZ4|M4|GHZ4> from the 16-term expansion of 2 M4.
inline double mermin4_ghz(const MerminPhases4& p) {
  double total = 0.0;
  for (unsigned mask = 0; mask < 16; ++mask) {
    std::array<double, 4> chosen{};
    for (std::size_t party = 0; party < 4; ++party) chosen[party] = p[2 * party + ((mask >> party) & 1u)];
    total += mermin4_sign(std::popcount(mask)) * ghz_product_correlation(chosen);
  }
  return 0.5 * total;
}

}  // namespace bellchsh

#endif  // BELLCHSH_CORRELATORS_HPP

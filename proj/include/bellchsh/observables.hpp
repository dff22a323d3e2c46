#ifndef BELLCHSH_OBSERVABLES_HPP
#define BELLCHSH_OBSERVABLES_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bellchsh/errors.hpp"
#include "bellchsh/states.hpp"
#include "bellchsh/tensor.hpp"
#include "bellchsh/tolerances.hpp"

namespace bellchsh {

namespace detail {

inline double wrap_two_pi(double x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(x, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

}  // namespace detail

/// Phase of a flip observable, kept in [0, 2pi).
class PhaseSetting {
 public:
  explicit PhaseSetting(double alpha) {
    if (!std::isfinite(alpha)) throw DomainError("PhaseSetting: angle must be finite");
    alpha_ = detail::wrap_two_pi(alpha);
  }
  double alpha() const noexcept { return alpha_; }

 private:
  double alpha_ = 0.0;
};

/// Direction (theta, alpha) on the Bloch sphere, theta in [0, pi], alpha in [0, 2pi).
class PolarSetting {
 public:
  PolarSetting(double theta, double alpha) {
    if (!std::isfinite(theta) || !std::isfinite(alpha)) {
      throw DomainError("PolarSetting: angles must be finite");
    }
    // Fold theta into [0, pi]; a reflection through the pole shifts alpha by pi.
    double t = detail::wrap_two_pi(theta);
    if (t > std::numbers::pi) {
      t = 2.0 * std::numbers::pi - t;
      alpha += std::numbers::pi;
    }
    theta_ = t;
    alpha_ = detail::wrap_two_pi(alpha);
  }
  double theta() const noexcept { return theta_; }
  double alpha() const noexcept { return alpha_; }

 private:
  double theta_ = 0.0;
  double alpha_ = 0.0;
};

/// Partition of a basis into swapped pairs (p, q) and fixed points. A flip
/// observable sends |p> to e^{i alpha}|q> and |q> to e^{-i alpha}|p>.
class PairingScheme {
 public:
  PairingScheme(std::size_t dim, std::vector<std::pair<std::size_t, std::size_t>> pairs,
                std::vector<std::size_t> fixed_points)
      : dim_(dim), pairs_(std::move(pairs)), fixed_(std::move(fixed_points)) {
    std::vector<int> seen(dim_, 0);
    auto mark = [&](std::size_t i) {
      if (i >= dim_) throw DomainError("PairingScheme: index " + std::to_string(i) + " out of range");
      if (seen[i]++ != 0) throw DomainError("PairingScheme: index " + std::to_string(i) + " used twice");
    };
    for (const auto& [p, q] : pairs_) {
      mark(p);
      mark(q);
    }
    for (const auto f : fixed_) mark(f);
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
      throw DomainError("PairingScheme: pairs and fixed points do not cover the basis");
    }
  }

  /// The single pair (|+>, |->) of a qubit.
  static PairingScheme qubit() { return PairingScheme(2, {{0, 1}}, {}); }

  /// Pairs |m> with |-m>, highest |m| first; for integer j the |0> state stays fixed.
  static PairingScheme spin(SpinJ j) {
    const std::size_t d = j.dim();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < d / 2; ++i) pairs.emplace_back(i, d - 1 - i);
    std::vector<std::size_t> fixed;
    if (d % 2 == 1) fixed.push_back(d / 2);
    return PairingScheme(d, std::move(pairs), std::move(fixed));
  }

  /// Pairs the Fock levels (|2n>, |2n+1>).
  static PairingScheme fock(FockCutoff cutoff) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t n = 0; 2 * n + 1 < cutoff.levels(); ++n) pairs.emplace_back(2 * n, 2 * n + 1);
    return PairingScheme(cutoff.levels(), std::move(pairs), {});
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const noexcept { return pairs_; }
  const std::vector<std::size_t>& fixed_points() const noexcept { return fixed_; }

 private:
  std::size_t dim_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<std::size_t> fixed_;
};

/// Flip observable with one phase per pair of `scheme`.
inline DenseOperator phase_flip_observable(std::span<const PhaseSetting> per_pair,
                                           const PairingScheme& scheme) {
  if (per_pair.size() != scheme.pairs().size()) {
    throw DomainError("phase_flip_observable: expected " + std::to_string(scheme.pairs().size()) +
                      " phases, got " + std::to_string(per_pair.size()));
  }
  const std::size_t d = scheme.dim();
  std::vector<cplx> e(d * d);
  for (std::size_t k = 0; k < per_pair.size(); ++k) {
    const auto [p, q] = scheme.pairs()[k];
    const cplx ph = std::polar(1.0, per_pair[k].alpha());
    e[q * d + p] = ph;
    e[p * d + q] = std::conj(ph);
  }
  for (const auto f : scheme.fixed_points()) e[f * d + f] = 1.0;
  return DenseOperator(d, std::move(e));
}

/// Flip observable with the same phase on every pair.
inline DenseOperator phase_flip_observable(PhaseSetting s, const PairingScheme& scheme) {
  const std::vector<PhaseSetting> all(scheme.pairs().size(), s);
  return phase_flip_observable(all, scheme);
}

/// n . sigma for n = (sin t cos a, sin t sin a, cos t).
inline DenseOperator polar_observable(PolarSetting s) {
  const double c = std::cos(s.theta());
  const double sn = std::sin(s.theta());
  return DenseOperator{{c, std::polar(sn, -s.alpha())}, {std::polar(sn, s.alpha()), -c}};
}

inline DenseOperator pauli_x() { return DenseOperator{{0.0, 1.0}, {1.0, 0.0}}; }
inline DenseOperator pauli_y() { return DenseOperator{{0.0, cplx(0, -1)}, {cplx(0, 1), 0.0}}; }
inline DenseOperator pauli_z() { return DenseOperator{{1.0, 0.0}, {0.0, -1.0}}; }

struct SpinTriple {
  DenseOperator x;
  DenseOperator y;
  DenseOperator z;
};

/// Pseudospin operators: on each block (|2n>, |2n+1>)
///   s_x = |2n+1><2n| + |2n><2n+1|,
///   s_y = i(|2n><2n+1| - |2n+1><2n|),
///   s_z = |2n+1><2n+1| - |2n><2n|.
inline SpinTriple pseudospin_operators(FockCutoff cutoff) {
  const std::size_t d = cutoff.levels();
  std::vector<cplx> sx(d * d);
  std::vector<cplx> sy(d * d);
  std::vector<cplx> sz(d * d);
  for (std::size_t n = 0; 2 * n + 1 < d; ++n) {
    const std::size_t ev = 2 * n;
    const std::size_t od = ev + 1;
    sx[od * d + ev] = 1.0;
    sx[ev * d + od] = 1.0;
    sy[ev * d + od] = cplx(0, 1);
    sy[od * d + ev] = cplx(0, -1);
    sz[od * d + od] = 1.0;
    sz[ev * d + ev] = -1.0;
  }
  return {DenseOperator(d, std::move(sx)), DenseOperator(d, std::move(sy)),
          DenseOperator(d, std::move(sz))};
}

/// Spin-j matrices from the ladder operators,
/// <m+1|J+|m> = sqrt(j(j+1) - m(m+1)); Jx = (J+ + J-)/2, Jy = (J+ - J-)/(2i).
inline SpinTriple spin_matrices(SpinJ j) {
  const std::size_t d = j.dim();
  const double jj = j.value();
  std::vector<cplx> jx(d * d);
  std::vector<cplx> jy(d * d);
  std::vector<cplx> jz(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    const double m = j.m_of(i);
    jz[i * d + i] = m;
    if (i == 0) continue;
    // J+ maps index i (m) to index i-1 (m+1).
    const double up = std::sqrt(jj * (jj + 1.0) - m * (m + 1.0));
    const std::size_t r = i - 1;
    jx[r * d + i] = 0.5 * up;
    jx[i * d + r] = 0.5 * up;
    jy[r * d + i] = cplx(0, -0.5 * up);
    jy[i * d + r] = cplx(0, 0.5 * up);
  }
  return {DenseOperator(d, std::move(jx)), DenseOperator(d, std::move(jy)),
          DenseOperator(d, std::move(jz))};
}

/// Largest entry of |O - O^dagger| and |O^2 - 1|.
inline double dichotomy_defect(const DenseOperator& o) {
  return std::max(o.max_hermitian_defect(),
                  max_abs_diff(o * o, DenseOperator::identity(o.dim())));
}

inline bool is_dichotomic(const DenseOperator& o, double tolerance = tol::kConstruction) {
  return dichotomy_defect(o) < tolerance;
}

namespace detail {

inline void require_dichotomic(const DenseOperator& o, const char* who, const char* name) {
  if (!is_dichotomic(o)) {
    throw DomainError(std::string(who) + ": observable " + name +
                      " is not Hermitian with square equal to the identity");
  }
}

}  // namespace detail

/// (A + A') (x) B + (A - A') (x) B'.
inline DenseOperator chsh_operator(const DenseOperator& a, const DenseOperator& ap,
                                   const DenseOperator& b, const DenseOperator& bp) {
  if (a.dim() != ap.dim() || b.dim() != bp.dim()) {
    throw DimensionError("chsh_operator: A, A' (or B, B') differ in dimension");
  }
  detail::require_dichotomic(a, "chsh_operator", "A");
  detail::require_dichotomic(ap, "chsh_operator", "A'");
  detail::require_dichotomic(b, "chsh_operator", "B");
  detail::require_dichotomic(bp, "chsh_operator", "B'");
  return tensor_op(a + ap, b) + tensor_op(a - ap, bp);
}

/// A' B C + A B' C + A B C' - A' B' C'.
inline DenseOperator mermin3_operator(const DenseOperator& a, const DenseOperator& ap,
                                      const DenseOperator& b, const DenseOperator& bp,
                                      const DenseOperator& c, const DenseOperator& cp) {
  const std::array<const DenseOperator*, 6> all{&a, &ap, &b, &bp, &c, &cp};
  const std::array<const char*, 6> names{"A", "A'", "B", "B'", "C", "C'"};
  for (std::size_t i = 0; i < all.size(); ++i) {
    detail::require_dichotomic(*all[i], "mermin3_operator", names[i]);
  }
  if (a.dim() != ap.dim() || b.dim() != bp.dim() || c.dim() != cp.dim()) {
    throw DimensionError("mermin3_operator: primed and unprimed observables differ in dimension");
  }
  auto term = [](const DenseOperator& x, const DenseOperator& y, const DenseOperator& z) {
    return tensor_op(tensor_op(x, y), z);
  };
  return term(ap, b, c) + term(a, bp, c) + term(a, b, cp) - term(ap, bp, cp);
}

/// Sign of a four-party product in 2 M4, by the number k of primed factors:
/// k = 0: -, 1: +, 2: +, 3: -, 4: -.
inline int mermin4_sign(int primed_count) {
  static constexpr std::array<int, 5> kSign{-1, 1, 1, -1, -1};
  return kSign.at(static_cast<std::size_t>(primed_count));
}

/// M4 = 1/2 sum over all 16 choices of primed/unprimed factors, each product
/// weighted by mermin4_sign of its number of primes.
inline DenseOperator mermin4_operator(const DenseOperator& a, const DenseOperator& ap,
                                      const DenseOperator& b, const DenseOperator& bp,
                                      const DenseOperator& c, const DenseOperator& cp,
                                      const DenseOperator& d, const DenseOperator& dp) {
  const std::array<std::array<const DenseOperator*, 2>, 4> party{
      {{&a, &ap}, {&b, &bp}, {&c, &cp}, {&d, &dp}}};
  const std::array<const char*, 8> names{"A", "A'", "B", "B'", "C", "C'", "D", "D'"};
  for (std::size_t p = 0; p < 4; ++p) {
    if (party[p][0]->dim() != party[p][1]->dim()) {
      throw DimensionError("mermin4_operator: primed and unprimed observables differ in dimension");
    }
    for (std::size_t s = 0; s < 2; ++s) {
      detail::require_dichotomic(*party[p][s], "mermin4_operator", names[2 * p + s]);
    }
  }
  std::size_t total = 1;
  for (const auto& pr : party) total *= pr[0]->dim();
  DenseOperator acc = DenseOperator::zero(total);
  for (unsigned mask = 0; mask < 16; ++mask) {
    DenseOperator prod = *party[0][mask & 1u];
    for (std::size_t p = 1; p < 4; ++p) prod = tensor_op(prod, *party[p][(mask >> p) & 1u]);
    acc = acc + static_cast<double>(mermin4_sign(std::popcount(mask))) * prod;
  }
  return 0.5 * acc;
}

}  // namespace bellchsh

#endif  // BELLCHSH_OBSERVABLES_HPP

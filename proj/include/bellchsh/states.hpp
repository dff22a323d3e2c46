#ifndef BELLCHSH_STATES_HPP
#define BELLCHSH_STATES_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bellchsh/errors.hpp"
#include "bellchsh/linalg.hpp"
#include "bellchsh/tensor.hpp"
#include "bellchsh/tolerances.hpp"

namespace bellchsh {

/// Number of retained Fock levels per mode (levels 0 .. n_max-1). Always even,
/// so every even level 2n has its odd partner 2n+1.
class FockCutoff {
 public:
  static constexpr std::size_t kDefault = 40;

  explicit FockCutoff(std::size_t n_max = kDefault) : n_max_(n_max) {
    if (n_max_ == 0 || n_max_ % 2 != 0) {
      throw DomainError("FockCutoff: n_max must be a positive even integer, got " +
                        std::to_string(n_max_));
    }
  }
  std::size_t levels() const noexcept { return n_max_; }

 private:
  std::size_t n_max_;
};

/// Index alpha in {0,1,2,3} of a Bell state.
class BellIndex {
 public:
  explicit BellIndex(int alpha) : alpha_(alpha) {
    if (alpha < 0 || alpha > 3) {
      throw DomainError("BellIndex: expected 0..3, got " + std::to_string(alpha));
    }
  }
  int value() const noexcept { return alpha_; }

 private:
  int alpha_;
};

/// Spin quantum number j, stored as the integer 2j >= 1.
///
/// Basis index i of the (2j+1)-dimensional space carries magnetic number
/// m = j - i, so index 0 is the highest weight ("spin up").
class SpinJ {
 public:
  explicit SpinJ(int two_j) : two_j_(two_j) {
    if (two_j < 1) throw DomainError("SpinJ: j must be >= 1/2 (2j = " + std::to_string(two_j) + ")");
  }

  /// Accepts "1", "2", "3/2", "0.5", "1.5", ...
  static SpinJ parse(std::string_view text) {
    const std::string s(text);
    try {
      if (const auto slash = s.find('/'); slash != std::string::npos) {
        std::size_t used = 0;
        const int num = std::stoi(s.substr(0, slash), &used);
        if (used != slash || s.substr(slash + 1) != "2") throw DomainError("bad fraction");
        return SpinJ(num);
      }
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      const double twice = 2.0 * v;
      if (used != s.size() || std::fabs(twice - std::round(twice)) > 1e-12) {
        throw DomainError("not a multiple of 1/2");
      }
      return SpinJ(static_cast<int>(std::lround(twice)));
    } catch (const std::exception&) {
      throw DomainError("SpinJ: cannot parse '" + s + "' as j in {1/2, 1, 3/2, ...}");
    }
  }

  int two_j() const noexcept { return two_j_; }
  double value() const noexcept { return 0.5 * two_j_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(two_j_) + 1; }
  bool is_integer() const noexcept { return two_j_ % 2 == 0; }
  /// Magnetic number carried by basis index i.
  double m_of(std::size_t i) const noexcept { return value() - static_cast<double>(i); }
  std::string str() const {
    return is_integer() ? std::to_string(two_j_ / 2) : std::to_string(two_j_) + "/2";
  }

 private:
  int two_j_;
};

inline StateVector bell_state(BellIndex alpha) {
  const double h = 1.0 / std::numbers::sqrt2;
  std::vector<cplx> a(4);
  switch (alpha.value()) {
    case 0: a = {h, 0, 0, h}; break;
    case 1: a = {h, 0, 0, -h}; break;
    case 2: a = {0, h, -h, 0}; break;
    default: a = {0, h, h, 0}; break;
  }
  return StateVector::normalized(std::move(a), {2, 2});
}

/// (|++> + |+-> + |-+> + sqrt(N-3)|-->) / sqrt(N): entangled for N >= 5,
/// a product state at N = 4.
inline StateVector gisin_family_state(long long n) {
  if (n < 3) throw DomainError("gisin_family_state: N must be >= 3, got " + std::to_string(n));
  const double nn = static_cast<double>(n);
  const double inv = 1.0 / std::sqrt(nn);
  return StateVector::normalized({inv, inv, inv, std::sqrt(nn - 3.0) * inv}, {2, 2});
}

/// (|+-> + r|-+>) / sqrt(1 + r^2).
inline StateVector r_state(double r) {
  if (!std::isfinite(r)) throw DomainError("r_state: r must be finite");
  return StateVector::normalized({0.0, 1.0, r, 0.0}, {2, 2});
}

/// Total-spin singlet of two spin-j particles:
/// sum_m (-1)^(j-m) |m> (x) |-m> / sqrt(2j+1).
inline StateVector spin_singlet(SpinJ j) {
  const std::size_t d = j.dim();
  std::vector<cplx> a(d * d);
  const double inv = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) {
    // m = j - i, so j - m = i, and -m sits at index d-1-i.
    a[i * d + (d - 1 - i)] = (i % 2 == 0 ? inv : -inv);
  }
  return StateVector::normalized(std::move(a), {d, d});
}

namespace detail {

/// Coherent-state amplitudes e^{-|z|^2/2} z^n / sqrt(n!) for n < levels,
/// without renormalizing the truncated vector.
inline std::vector<cplx> coherent_amplitudes(cplx z, std::size_t levels) {
  std::vector<cplx> c(levels);
  if (levels == 0) return c;
  c[0] = std::exp(-0.5 * std::norm(z));
  for (std::size_t n = 1; n < levels; ++n) c[n] = c[n - 1] * z / std::sqrt(static_cast<double>(n));
  return c;
}

}  // namespace detail

/// Probability a coherent state of modulus r puts on levels >= levels.
inline double coherent_tail_mass(double r, std::size_t levels) {
  if (r == 0.0) return levels == 0 ? 1.0 : 0.0;
  const double r2 = r * r;
  const double nl = static_cast<double>(levels);
  double term = std::exp(-r2 + nl * std::log(r2) - std::lgamma(nl + 1.0));
  double sum = 0.0;
  for (std::size_t n = levels; n < levels + 100000; ++n) {
    sum += term;
    const double next = term * r2 / static_cast<double>(n + 1);
    if (static_cast<double>(n) > r2 && next < 1e-30 * sum) break;
    term = next;
  }
  return sum;
}

namespace detail {

inline void ensure_coherent_tail(double r, FockCutoff cutoff, const char* who) {
  const double tail = coherent_tail_mass(r, cutoff.levels());
  if (tail > tol::kFockTail) {
    throw NumericGuardError(std::string(who) + ": Fock cutoff " +
                            std::to_string(cutoff.levels()) + " discards probability " +
                            std::to_string(tail) + " of a coherent state with |z| = " +
                            std::to_string(r) + "; raise the cutoff");
  }
}

inline std::vector<cplx> kron(std::span<const cplx> a, std::span<const cplx> b) {
  std::vector<cplx> out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  }
  return out;
}

inline void axpy(cplx s, std::span<const cplx> x, std::vector<cplx>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

}  // namespace detail

/// |z> built from its Fock series and renormalized on the truncated space.
inline StateVector coherent_state(cplx z, FockCutoff cutoff = FockCutoff{}) {
  detail::ensure_coherent_tail(std::abs(z), cutoff, "coherent_state");
  return StateVector::normalized(detail::coherent_amplitudes(z, cutoff.levels()),
                                 {cutoff.levels()});
}

/// Normalization factor of N[|eta>|sigma> + e^{i phi}|-eta>|-sigma>].
inline double entangled_coherent_normalization(double eta, double sigma, double phi) {
  const double denom = 1.0 + std::cos(phi) * std::exp(-2.0 * (eta * eta + sigma * sigma));
  if (!(denom > 0.0)) {
    throw DegenerateStateError(
        "entangled_coherent: normalization undefined (phi = pi with eta = sigma = 0)");
  }
  return 1.0 / (std::numbers::sqrt2 * std::sqrt(denom));
}

namespace detail {

/// N[|eta>|sigma> + e^{i phi}|-eta>|-sigma>] on the truncated two-mode space,
/// before the final renormalization.
inline std::vector<cplx> entangled_coherent_raw(double eta, double sigma, double phi,
                                                FockCutoff cutoff) {
  const std::size_t l = cutoff.levels();
  const double norm = entangled_coherent_normalization(eta, sigma, phi);
  auto out = kron(coherent_amplitudes(eta, l), coherent_amplitudes(sigma, l));
  const auto flipped = kron(coherent_amplitudes(-eta, l), coherent_amplitudes(-sigma, l));
  axpy(std::polar(1.0, phi), flipped, out);
  for (auto& x : out) x *= norm;
  return out;
}

}  // namespace detail

/// Entangled coherent state N[|eta>(x)|sigma> + e^{i phi}|-eta>(x)|-sigma>].
inline StateVector entangled_coherent(double eta, double sigma, double phi,
                                      FockCutoff cutoff = FockCutoff{}) {
  if (!std::isfinite(eta) || !std::isfinite(sigma) || !std::isfinite(phi)) {
    throw DomainError("entangled_coherent: parameters must be finite");
  }
  detail::ensure_coherent_tail(std::fabs(eta), cutoff, "entangled_coherent");
  detail::ensure_coherent_tail(std::fabs(sigma), cutoff, "entangled_coherent");
  return StateVector::normalized(detail::entangled_coherent_raw(eta, sigma, phi, cutoff),
                                 {cutoff.levels(), cutoff.levels()});
}

/// Symmetric entangled coherent state N_s[|eta>(x)|sigma> + e^{i phi}|sigma>(x)|eta>],
/// normalized numerically.
inline StateVector symmetric_coherent(double eta, double sigma, double phi,
                                      FockCutoff cutoff = FockCutoff{}) {
  detail::ensure_coherent_tail(std::fabs(eta), cutoff, "symmetric_coherent");
  detail::ensure_coherent_tail(std::fabs(sigma), cutoff, "symmetric_coherent");
  const std::size_t l = cutoff.levels();
  const auto ce = detail::coherent_amplitudes(eta, l);
  const auto cs = detail::coherent_amplitudes(sigma, l);
  auto out = detail::kron(ce, cs);
  detail::axpy(std::polar(1.0, phi), detail::kron(cs, ce), out);
  return StateVector::normalized(std::move(out), {l, l});
}

/// Single-mode cat state N_pm[|eta> pm |-eta>], normalized numerically.
/// The minus cat at eta = 0 is the zero vector and is rejected.
inline StateVector cat_state(double eta, int sign, FockCutoff cutoff = FockCutoff{}) {
  if (sign != 1 && sign != -1) throw DomainError("cat_state: sign must be +1 or -1");
  detail::ensure_coherent_tail(std::fabs(eta), cutoff, "cat_state");
  auto out = detail::coherent_amplitudes(eta, cutoff.levels());
  detail::axpy(static_cast<double>(sign), detail::coherent_amplitudes(-eta, cutoff.levels()),
               out);
  return StateVector::normalized(std::move(out), {cutoff.levels()});
}

/// C_pm[|eta>_pm (x) |sigma>_pm + e^{i phi}|sigma>_pm (x) |eta>_pm] built from
/// normalized cat states; all normalizations are numeric.
inline StateVector cat_state_pair(double eta, double sigma, double phi, int sign,
                                  FockCutoff cutoff = FockCutoff{}) {
  const auto ce = cat_state(eta, sign, cutoff);
  const auto cs = cat_state(sigma, sign, cutoff);
  auto out = detail::kron(ce.amplitudes(), cs.amplitudes());
  detail::axpy(std::polar(1.0, phi), detail::kron(cs.amplitudes(), ce.amplitudes()), out);
  return StateVector::normalized(std::move(out), {cutoff.levels(), cutoff.levels()});
}

/// Two-mode squeezed state sqrt(1 - lambda^2) sum_n lambda^n |n>(x)|n>.
inline StateVector squeezed_state(double lambda, FockCutoff cutoff = FockCutoff{}) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw DomainError("squeezed_state: lambda must lie in (0, 1), got " + std::to_string(lambda));
  }
  const std::size_t l = cutoff.levels();
  if (std::pow(lambda, 2.0 * static_cast<double>(l)) >= tol::kSqueezedTail) {
    throw NumericGuardError("squeezed_state: cutoff " + std::to_string(l) +
                            " too small for lambda = " + std::to_string(lambda) +
                            " (lambda^(2 n_max) must stay below 1e-12)");
  }
  std::vector<cplx> a(l * l);
  const double pre = std::sqrt(1.0 - lambda * lambda);
  double pw = 1.0;
  for (std::size_t n = 0; n < l; ++n) {
    a[n * l + n] = pre * pw;
    pw *= lambda;
  }
  return StateVector::normalized(std::move(a), {l, l});
}

/// (|+...+> - |-...->) / sqrt(2) on n qubits.
inline StateVector ghz_state(int n_parties) {
  if (n_parties < 3 || n_parties > 20) {
    throw DomainError("ghz_state: number of parties must be in 3..20, got " +
                      std::to_string(n_parties));
  }
  const std::size_t d = std::size_t{1} << n_parties;
  std::vector<cplx> a(d);
  a.front() = 1.0 / std::numbers::sqrt2;
  a.back() = -1.0 / std::numbers::sqrt2;
  return StateVector::normalized(std::move(a),
                                 std::vector<std::size_t>(static_cast<std::size_t>(n_parties), 2));
}

/// Outcome of the product-state test on a bipartite pure state.
struct ProductTest {
  bool product = false;
  std::vector<double> schmidt_coefficients;  ///< singular values, descending
  std::optional<cplx> determinant;           ///< a1 a4 - a2 a3, two-qubit states only
};

/// Reshapes the amplitudes into the dA x dB coefficient matrix and counts the
/// singular values above the Schmidt tolerance; the state is a product state
/// exactly when one survives.
inline ProductTest is_product(const StateVector& psi) {
  if (psi.shape().size() != 2) {
    throw DimensionError("is_product: state must have exactly two factors, got " +
                         std::to_string(psi.shape().size()));
  }
  const std::size_t da = psi.shape()[0];
  const std::size_t db = psi.shape()[1];
  ProductTest out;
  out.schmidt_coefficients = linalg::singular_values(psi.amplitudes(), da, db);
  std::size_t rank = 0;
  for (const double s : out.schmidt_coefficients) rank += s > tol::kSchmidt ? 1 : 0;
  out.product = rank == 1;
  if (da == 2 && db == 2) out.determinant = psi[0] * psi[3] - psi[1] * psi[2];
  return out;
}

}  // namespace bellchsh

#endif  // BELLCHSH_STATES_HPP

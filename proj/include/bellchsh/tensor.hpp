#ifndef BELLCHSH_TENSOR_HPP
#define BELLCHSH_TENSOR_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bellchsh/errors.hpp"
#include "bellchsh/linalg.hpp"
#include "bellchsh/tolerances.hpp"

namespace bellchsh {

namespace detail {

inline bool all_finite(std::span<const cplx> xs) {
  return std::all_of(xs.begin(), xs.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

inline std::size_t shape_product(std::span<const std::size_t> shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

inline double squared_norm(std::span<const cplx> xs) {
  double s = 0.0;
  for (const auto& x : xs) s += std::norm(x);
  return s;
}

}  // namespace detail

/// Normalized amplitude vector over a tensor product of subsystems.
///
/// The shape lists the factor dimensions, leftmost factor most significant:
/// for shape (dA, dB) the amplitude of |i>|j> sits at index i*dB + j.
class StateVector {
 public:
  /// Takes amplitudes that are already normalized (within the construction
  /// tolerance). Use `normalized` to build from an arbitrary nonzero vector.
  StateVector(std::vector<cplx> amplitudes, std::vector<std::size_t> shape)
      : amps_(std::move(amplitudes)), shape_(std::move(shape)) {
    validate_shape();
    const double n2 = detail::squared_norm(amps_);
    if (std::fabs(n2 - 1.0) > tol::kConstruction) {
      throw DomainError("StateVector: amplitudes are not normalized (|psi|^2 = " +
                        std::to_string(n2) + ")");
    }
  }

  /// Rescales `amplitudes` to unit norm. A (numerically) vanishing vector is
  /// reported as DegenerateStateError.
  static StateVector normalized(std::vector<cplx> amplitudes, std::vector<std::size_t> shape) {
    if (!detail::all_finite(amplitudes)) throw DomainError("StateVector: non-finite amplitude");
    const double n2 = detail::squared_norm(amplitudes);
    if (!(n2 > 1e-24)) throw DegenerateStateError("StateVector: zero vector cannot be normalized");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amplitudes) a *= inv;
    return StateVector(std::move(amplitudes), std::move(shape));
  }

  std::size_t dim() const noexcept { return amps_.size(); }
  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  std::span<const cplx> amplitudes() const noexcept { return amps_; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }

 private:
  void validate_shape() const {
    if (shape_.empty()) throw DimensionError("StateVector: empty shape");
    if (std::any_of(shape_.begin(), shape_.end(), [](std::size_t d) { return d == 0; })) {
      throw DimensionError("StateVector: zero-sized factor in shape");
    }
    if (detail::shape_product(shape_) != amps_.size()) {
      throw DimensionError("StateVector: shape product does not match amplitude count");
    }
    if (!detail::all_finite(amps_)) throw DomainError("StateVector: non-finite amplitude");
  }

  std::vector<cplx> amps_;
  std::vector<std::size_t> shape_;
};

/// Square complex matrix, row-major. The Hermitian flag is fixed at construction.
class DenseOperator {
 public:
  DenseOperator(std::size_t dim, std::vector<cplx> entries)
      : dim_(dim), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_) {
      throw DimensionError("DenseOperator: entry count is not dim*dim");
    }
    if (!detail::all_finite(entries_)) throw DomainError("DenseOperator: non-finite entry");
    hermitian_ = max_hermitian_defect() < tol::kConstruction;
  }

  /// Rows given as nested braces, e.g. {{0, 1}, {1, 0}}.
  DenseOperator(std::initializer_list<std::initializer_list<cplx>> rows)
      : DenseOperator(rows.size(), flatten(rows)) {}

  static DenseOperator identity(std::size_t dim) {
    std::vector<cplx> e(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0;
    return DenseOperator(dim, std::move(e));
  }

  static DenseOperator zero(std::size_t dim) { return DenseOperator(dim, std::vector<cplx>(dim * dim)); }

  std::size_t dim() const noexcept { return dim_; }
  bool hermitian() const noexcept { return hermitian_; }
  std::span<const cplx> entries() const noexcept { return entries_; }
  const cplx& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }

  double max_hermitian_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = i; j < dim_; ++j) {
        worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
      }
    }
    return worst;
  }

  DenseOperator adjoint() const {
    std::vector<cplx> e(dim_ * dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) e[j * dim_ + i] = std::conj((*this)(i, j));
    }
    return DenseOperator(dim_, std::move(e));
  }

  std::vector<cplx> apply(std::span<const cplx> x) const {
    if (x.size() != dim_) throw DimensionError("DenseOperator::apply: dimension mismatch");
    std::vector<cplx> y(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      cplx acc{};
      const cplx* row = entries_.data() + i * dim_;
      for (std::size_t j = 0; j < dim_; ++j) acc += row[j] * x[j];
      y[i] = acc;
    }
    return y;
  }

  friend DenseOperator operator+(const DenseOperator& a, const DenseOperator& b) {
    return combine(a, b, 1.0);
  }
  friend DenseOperator operator-(const DenseOperator& a, const DenseOperator& b) {
    return combine(a, b, -1.0);
  }
  friend DenseOperator operator*(cplx s, const DenseOperator& a) {
    std::vector<cplx> e(a.entries_);
    for (auto& x : e) x *= s;
    return DenseOperator(a.dim_, std::move(e));
  }
  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
    if (a.dim_ != b.dim_) throw DimensionError("DenseOperator product: dimension mismatch");
    const std::size_t n = a.dim_;
    std::vector<cplx> e(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < n; ++j) e[i * n + j] += aik * b(k, j);
      }
    }
    return DenseOperator(n, std::move(e));
  }

 private:
  static std::vector<cplx> flatten(std::initializer_list<std::initializer_list<cplx>> rows) {
    std::vector<cplx> e;
    for (const auto& r : rows) {
      if (r.size() != rows.size()) throw DimensionError("DenseOperator: ragged row list");
      e.insert(e.end(), r.begin(), r.end());
    }
    return e;
  }

  static DenseOperator combine(const DenseOperator& a, const DenseOperator& b, double sign) {
    if (a.dim_ != b.dim_) throw DimensionError("DenseOperator sum: dimension mismatch");
    std::vector<cplx> e(a.entries_);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += sign * b.entries_[i];
    return DenseOperator(a.dim_, std::move(e));
  }

  std::size_t dim_;
  std::vector<cplx> entries_;
  bool hermitian_ = false;
};

/// <a|b>, antilinear in the first argument.
inline cplx inner_product(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw DimensionError("inner_product: dimension mismatch");
  cplx acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

inline double vector_norm(std::span<const cplx> x) { return std::sqrt(detail::squared_norm(x)); }

inline StateVector tensor_state(const StateVector& a, const StateVector& b) {
  std::vector<cplx> amps(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < b.dim(); ++j) amps[i * b.dim() + j] = a[i] * b[j];
  }
  std::vector<std::size_t> shape(a.shape());
  shape.insert(shape.end(), b.shape().begin(), b.shape().end());
  // Product of unit vectors: renormalize only to absorb round-off.
  return StateVector::normalized(std::move(amps), std::move(shape));
}

/// Kronecker product; (A (x) B)(x (x) y) = (Ax) (x) (By) with tensor_state ordering.
inline DenseOperator tensor_op(const DenseOperator& a, const DenseOperator& b) {
  const std::size_t da = a.dim();
  const std::size_t db = b.dim();
  const std::size_t n = da * db;
  std::vector<cplx> e(n * n);
  for (std::size_t i = 0; i < da; ++i) {
    for (std::size_t k = 0; k < da; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < db; ++j) {
        cplx* row = e.data() + (i * db + j) * n + k * db;
        for (std::size_t l = 0; l < db; ++l) row[l] = aik * b(j, l);
      }
    }
  }
  return DenseOperator(n, std::move(e));
}

/// Left-to-right Kronecker product of a list of factors.
inline DenseOperator tensor_op(std::span<const DenseOperator> factors) {
  if (factors.empty()) throw DimensionError("tensor_op: no factors");
  DenseOperator acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = tensor_op(acc, factors[i]);
  return acc;
}

/// <psi|O|psi>.
inline cplx expectation(const DenseOperator& op, const StateVector& psi) {
  if (op.dim() != psi.dim()) throw DimensionError("expectation: dimension mismatch");
  const auto amps = psi.amplitudes();
  return inner_product(amps, op.apply(amps));
}

/// <psi|A (x) B|psi> for a bipartite state, contracted factor by factor
/// without forming the Kronecker product: sum_ij conj(Psi_ij) (A Psi B^T)_ij.
inline cplx expectation(const DenseOperator& a, const DenseOperator& b, const StateVector& psi) {
  if (psi.shape().size() != 2 || psi.shape()[0] != a.dim() || psi.shape()[1] != b.dim()) {
    throw DimensionError("expectation: state shape does not match the local factors");
  }
  const std::size_t da = a.dim();
  const std::size_t db = b.dim();
  const auto psi_m = psi.amplitudes();
  std::vector<cplx> t(da * db);
  for (std::size_t i = 0; i < da; ++i) {
    for (std::size_t k = 0; k < da; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t l = 0; l < db; ++l) t[i * db + l] += aik * psi_m[k * db + l];
    }
  }
  cplx acc{};
  for (std::size_t i = 0; i < da; ++i) {
    for (std::size_t j = 0; j < db; ++j) {
      cplx tb{};
      for (std::size_t l = 0; l < db; ++l) tb += t[i * db + l] * b(j, l);
      acc += std::conj(psi_m[i * db + j]) * tb;
    }
  }
  return acc;
}

inline DenseOperator commutator(const DenseOperator& a, const DenseOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("commutator: dimension mismatch");
  return a * b - b * a;
}

/// Max absolute eigenvalue for Hermitian input; largest singular value otherwise.
inline double operator_norm(const DenseOperator& d) {
  if (d.dim() == 0) return 0.0;
  if (d.hermitian()) {
    const auto ev = linalg::hermitian_eigenvalues(d.entries(), d.dim());
    return std::max(std::fabs(ev.front()), std::fabs(ev.back()));
  }
  const DenseOperator gram = d.adjoint() * d;
  const auto ev = linalg::hermitian_eigenvalues(gram.entries(), gram.dim());
  return std::sqrt(std::max(ev.back(), 0.0));
}

/// Largest entrywise modulus of a - b.
inline double max_abs_diff(const DenseOperator& a, const DenseOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("max_abs_diff: dimension mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
  }
  return worst;
}

}  // namespace bellchsh

#endif  // BELLCHSH_TENSOR_HPP

#ifndef BELLCHSH_TESTS_SUPPORT_HPP
#define BELLCHSH_TESTS_SUPPORT_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include "bellchsh/tensor.hpp"

namespace bellchsh::testing {

using EMatrix = Eigen::MatrixXcd;
using EVector = Eigen::VectorXcd;

inline EMatrix to_eigen(const DenseOperator& op) {
  const auto n = static_cast<Eigen::Index>(op.dim());
  EMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = op(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  }
  return m;
}

inline EVector to_eigen(const StateVector& psi) {
  EVector v(static_cast<Eigen::Index>(psi.dim()));
  for (std::size_t i = 0; i < psi.dim(); ++i) v(static_cast<Eigen::Index>(i)) = psi[i];
  return v;
}

inline DenseOperator from_eigen(const EMatrix& m) {
  std::vector<cplx> e(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) e[static_cast<std::size_t>(r * m.cols() + c)] = m(r, c);
  }
  return DenseOperator(static_cast<std::size_t>(m.rows()), std::move(e));
}

/// Kronecker product straight from the definition.
inline EMatrix kron(const EMatrix& a, const EMatrix& b) {
  EMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return k;
}

/// Spectral norm from Eigen's SVD.
inline double spectral_norm(const EMatrix& m) {
  Eigen::JacobiSVD<EMatrix> svd(m);
  return svd.singularValues()(0);
}

inline EMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  EMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = {g(rng), g(rng)};
  }
  return m;
}

inline DenseOperator random_hermitian(std::size_t n, std::mt19937_64& rng) {
  const EMatrix m = random_matrix(n, rng);
  const EMatrix h = 0.5 * (m + m.adjoint());
  return from_eigen(h);
}

inline DenseOperator random_operator(std::size_t n, std::mt19937_64& rng) { return from_eigen(random_matrix(n, rng)); }

inline std::vector<cplx> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

inline double uniform_angle(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
}

}  // namespace bellchsh::testing

#endif  // BELLCHSH_TESTS_SUPPORT_HPP

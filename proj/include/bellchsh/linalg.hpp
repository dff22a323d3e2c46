#ifndef BELLCHSH_LINALG_HPP
#define BELLCHSH_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "bellchsh/errors.hpp"

namespace bellchsh {

using cplx = std::complex<double>;

namespace linalg {

/// Eigenvalues of a real symmetric tridiagonal matrix by implicit-shift QL.
/// `diag` holds the diagonal, `off[i]` couples rows i and i+1 (`off.back()` is
/// ignored). Returns the eigenvalues in ascending order.
inline std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag,
                                                   std::vector<double> off) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) return diag;
  off.resize(static_cast<std::size_t>(n), 0.0);
  off[static_cast<std::size_t>(n - 1)] = 0.0;
  auto* d = diag.data();
  auto* e = off.data();
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 100) {
          throw NumericGuardError("tridiagonal QL iteration did not converge");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(diag.begin(), diag.end());
  return diag;
}

/// Eigenvalues (ascending) of the Hermitian n x n matrix stored row-major in
/// `a`. Householder reflections bring the matrix to Hermitian tridiagonal form;
/// a diagonal unitary then makes the off-diagonal real, so only the moduli of
/// the subdiagonal enter the QL stage. Only the lower triangle is trusted.
inline std::vector<double> hermitian_eigenvalues(std::span<const cplx> a, std::size_t n) {
  if (a.size() != n * n) throw DimensionError("hermitian_eigenvalues: size is not n*n");
  std::vector<cplx> m(a.begin(), a.end());
  // Symmetrize from the lower triangle so round-off in the input cannot leak in.
  for (std::size_t i = 0; i < n; ++i) {
    m[i * n + i] = m[i * n + i].real();
    for (std::size_t j = 0; j < i; ++j) m[j * n + i] = std::conj(m[i * n + j]);
  }

  std::vector<cplx> v(n);
  std::vector<cplx> w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm2 += std::norm(m[i * n + k]);
    const double xnorm = std::sqrt(xnorm2);
    if (xnorm == 0.0) continue;

    const cplx x0 = m[(k + 1) * n + k];
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx{1.0, 0.0};
    const cplx alpha = -phase * xnorm;

    std::fill(v.begin(), v.end(), cplx{});
    v[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = m[i * n + k];
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
    if (vnorm2 == 0.0) continue;
    const double inv = 1.0 / std::sqrt(vnorm2);
    for (std::size_t i = k + 1; i < n; ++i) v[i] *= inv;

    // H A H with H = 1 - 2 v v^dagger equals A - 2 v w^dagger - 2 w v^dagger,
    // where p = A v, K = v^dagger p and w = p - K v.
    cplx kappa{};
    for (std::size_t i = 0; i < n; ++i) {
      cplx acc{};
      for (std::size_t j = k + 1; j < n; ++j) acc += m[i * n + j] * v[j];
      w[i] = acc;
      kappa += std::conj(v[i]) * acc;
    }
    for (std::size_t i = 0; i < n; ++i) w[i] -= kappa.real() * v[i];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        m[i * n + j] -= 2.0 * (v[i] * std::conj(w[j]) + w[i] * std::conj(v[j]));
      }
    }
  }

  std::vector<double> diag(n);
  std::vector<double> off(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) diag[i] = m[i * n + i].real();
  for (std::size_t i = 0; i + 1 < n; ++i) off[i] = std::abs(m[(i + 1) * n + i]);
  return tridiagonal_eigenvalues(std::move(diag), std::move(off));
}

/// Singular values (descending) of a rows x cols matrix stored row-major, by
/// one-sided Jacobi rotations. Small singular values come out with absolute
/// accuracy near machine epsilon times the largest one, which the Schmidt-rank
/// test relies on.
inline std::vector<double> singular_values(std::span<const cplx> a, std::size_t rows,
                                           std::size_t cols) {
  if (a.size() != rows * cols) throw DimensionError("singular_values: size is not rows*cols");
  // Work on the columns of whichever orientation has fewer of them.
  const bool transpose = cols > rows;
  const std::size_t m = transpose ? cols : rows;  // column length
  const std::size_t n = transpose ? rows : cols;  // column count
  std::vector<std::vector<cplx>> col(n, std::vector<cplx>(m));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (transpose) {
        col[r][c] = std::conj(a[r * cols + c]);
      } else {
        col[c][r] = a[r * cols + c];
      }
    }
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        cplx gamma{};
        for (std::size_t i = 0; i < m; ++i) {
          alpha += std::norm(col[p][i]);
          beta += std::norm(col[q][i]);
          gamma += std::conj(col[p][i]) * col[q][i];
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        // Rotate the phase of column q so the overlap becomes real and positive.
        const cplx unphase = std::conj(gamma) / g;
        for (auto& x : col[q]) x *= unphase;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t =
            (zeta >= 0.0 ? 1.0 : -1.0) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const cplx xp = col[p][i];
          const cplx xq = col[q][i];
          col[p][i] = c * xp - s * xq;
          col[q][i] = s * xp + c * xq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s2 = 0.0;
    for (const auto& x : col[j]) s2 += std::norm(x);
    sv[j] = std::sqrt(s2);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

}  // namespace linalg
}  // namespace bellchsh

#endif  // BELLCHSH_LINALG_HPP

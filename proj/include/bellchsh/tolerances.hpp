#ifndef BELLCHSH_TOLERANCES_HPP
#define BELLCHSH_TOLERANCES_HPP

namespace bellchsh::tol {

/// Normalization, Hermiticity and dichotomy checks done when a value is built.
inline constexpr double kConstruction = 1e-12;

/// Agreement between a closed form and its matrix oracle.
inline constexpr double kOracle = 1e-9;

/// Nelder-Mead simplex spread at which a refinement counts as converged.
inline constexpr double kOptimizer = 1e-10;

/// Singular values above this count toward the Schmidt rank.
inline constexpr double kSchmidt = 1e-10;

/// Probability mass a Fock truncation may discard.
inline constexpr double kFockTail = 1e-10;

/// Squeezed-state truncation: lambda^(2 n_max) must stay below this.
inline constexpr double kSqueezedTail = 1e-12;

}  // namespace bellchsh::tol

#endif  // BELLCHSH_TOLERANCES_HPP

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "bellchsh/observables.hpp"
#include "bellchsh/states.hpp"
#include "bellchsh/tensor.hpp"
#include "support.hpp"

namespace bc = bellchsh;
using bc::cplx;
using bc::DenseOperator;
using bc::PairingScheme;
using bc::PhaseSetting;
using bc::PolarSetting;

namespace {

constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;
const cplx kI(0, 1);

DenseOperator flip(double a, const PairingScheme& s = PairingScheme::qubit()) {
  return bc::phase_flip_observable(PhaseSetting(a), s);
}

DenseOperator random_polar(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, std::numbers::pi);
  return bc::polar_observable(PolarSetting(u(rng), 2.0 * u(rng)));
}

/// The same matrix with basis order reversed (|1>, |0>).
DenseOperator reversed(const DenseOperator& o) {
  const std::size_t d = o.dim();
  std::vector<cplx> e(d * d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) e[r * d + c] = o(d - 1 - r, d - 1 - c);
  }
  return DenseOperator(d, std::move(e));
}

}  // namespace

TEST(Settings, Canonicalization) {
  EXPECT_NEAR(PhaseSetting(-std::numbers::pi / 2).alpha(), 1.5 * std::numbers::pi, 1e-15);
  EXPECT_NEAR(PhaseSetting(7.0).alpha(), 7.0 - 2 * std::numbers::pi, 1e-15);
  const PolarSetting p(1.5 * std::numbers::pi, 0.3);
  EXPECT_NEAR(p.theta(), 0.5 * std::numbers::pi, 1e-15);
  EXPECT_NEAR(p.alpha(), 0.3 + std::numbers::pi, 1e-15);
  EXPECT_THROW(PhaseSetting(NAN), bc::DomainError);
  EXPECT_THROW(PolarSetting(INFINITY, 0.0), bc::DomainError);
  // Folding keeps the observable.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int k = 0; k < 50; ++k) {
    const double t = u(rng), a = u(rng);
    const double ct = std::cos(t), st = std::sin(t);
    const DenseOperator direct{{ct, st * std::exp(-kI * a)}, {st * std::exp(kI * a), -ct}};
    EXPECT_LT(bc::max_abs_diff(bc::polar_observable(PolarSetting(t, a)), direct), 1e-12);
  }
}

TEST(PairingSchemeTest, Validation) {
  EXPECT_THROW(PairingScheme(3, {{0, 1}}, {}), bc::DomainError);
  EXPECT_THROW(PairingScheme(3, {{0, 1}}, {1}), bc::DomainError);
  EXPECT_THROW(PairingScheme(2, {{0, 2}}, {}), bc::DomainError);
  EXPECT_NO_THROW(PairingScheme(3, {{0, 2}}, {1}));
  EXPECT_EQ(PairingScheme::spin(bc::SpinJ(3)).pairs().size(), 2u);
  EXPECT_EQ(PairingScheme::spin(bc::SpinJ(4)).fixed_points(), std::vector<std::size_t>{2});
  EXPECT_THROW(bc::phase_flip_observable(std::vector<PhaseSetting>{PhaseSetting(0)}, PairingScheme::spin(bc::SpinJ(3))),
               bc::DomainError);
}

TEST(PhaseFlip, Examples) {
  EXPECT_LT(bc::max_abs_diff(flip(0.0), bc::pauli_x()), 1e-15);
  const double a = 0.83;
  const auto one = flip(a, PairingScheme::spin(bc::SpinJ(2)));
  const DenseOperator want{{0, 0, std::exp(-kI * a)}, {0, 1, 0}, {std::exp(kI * a), 0, 0}};
  EXPECT_LT(bc::max_abs_diff(one, want), 1e-15);
  // |+> goes to e^{i a}|->.
  const auto img = flip(a).apply(std::vector<cplx>{1, 0});
  EXPECT_LT(std::abs(img[1] - std::exp(kI * a)), 1e-15);
}

TEST(PhaseFlip, DichotomicForRandomSchemes) {
  std::mt19937_64 rng(8);
  std::vector<PairingScheme> schemes{PairingScheme::qubit(), PairingScheme::fock(bc::FockCutoff(10)),
                                     PairingScheme(5, {{4, 0}, {1, 3}}, {2})};
  for (int two_j = 1; two_j <= 7; ++two_j) schemes.push_back(PairingScheme::spin(bc::SpinJ(two_j)));
  for (const auto& s : schemes) {
    for (int k = 0; k < 20; ++k) {
      std::vector<PhaseSetting> ph;
      for (std::size_t p = 0; p < s.pairs().size(); ++p) ph.emplace_back(bc::testing::uniform_angle(rng));
      const auto o = bc::phase_flip_observable(ph, s);
      EXPECT_TRUE(o.hermitian());
      EXPECT_LT(bc::dichotomy_defect(o), 1e-12);
    }
  }
}

TEST(Polar, Examples) {
  EXPECT_LT(bc::max_abs_diff(bc::polar_observable(PolarSetting(0, 0)), bc::pauli_z()), 1e-15);
  EXPECT_LT(bc::max_abs_diff(bc::polar_observable(PolarSetting(std::numbers::pi / 2, 0)), bc::pauli_x()), 1e-15);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    const double a = bc::testing::uniform_angle(rng);
    EXPECT_LT(bc::max_abs_diff(bc::polar_observable(PolarSetting(std::numbers::pi / 2, a)), flip(a)), 1e-15);
    const auto p = random_polar(rng);
    EXPECT_LT(bc::dichotomy_defect(p), 1e-12);
  }
}

TEST(Pauli, ProductIdentity) {
  const std::array<DenseOperator, 3> s{bc::pauli_x(), bc::pauli_y(), bc::pauli_z()};
  const auto id = DenseOperator::identity(2);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      DenseOperator want = (i == j ? 1.0 : 0.0) * id;
      for (int k = 0; k < 3; ++k) {
        // Levi-Civita symbol
        const int eps = (i - j) * (j - k) * (k - i) / 2;
        if (eps != 0) want = want + (kI * static_cast<double>(eps)) * s[static_cast<std::size_t>(k)];
      }
      EXPECT_LT(bc::max_abs_diff(s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)], want), 1e-15);
    }
  }
}

TEST(Pseudospin, AlgebraOnTruncatedSpace) {
  for (std::size_t levels : {2u, 4u, 10u, 40u}) {
    const auto s = bc::pseudospin_operators(bc::FockCutoff(levels));
    const auto id = DenseOperator::identity(levels);
    EXPECT_EQ(bc::max_abs_diff(bc::commutator(s.x, s.y), cplx(0, 2) * s.z), 0.0);
    EXPECT_EQ(bc::max_abs_diff(bc::commutator(s.y, s.z), cplx(0, 2) * s.x), 0.0);
    EXPECT_EQ(bc::max_abs_diff(bc::commutator(s.z, s.x), cplx(0, 2) * s.y), 0.0);
    for (const auto* o : {&s.x, &s.y, &s.z}) EXPECT_EQ(bc::max_abs_diff(*o * *o, id), 0.0);
  }
  EXPECT_THROW(bc::pseudospin_operators(bc::FockCutoff(3)), bc::DomainError);
}

TEST(Pseudospin, CutoffTwoIsPauliOnReversedLevels) {
  // The pseudospin flip raises |0> to |1>, so in the order (|1>, |0>) the three
  // operators are exactly the Pauli matrices.
  const auto s = bc::pseudospin_operators(bc::FockCutoff(2));
  EXPECT_EQ(bc::max_abs_diff(reversed(s.x), bc::pauli_x()), 0.0);
  EXPECT_EQ(bc::max_abs_diff(reversed(s.y), bc::pauli_y()), 0.0);
  EXPECT_EQ(bc::max_abs_diff(reversed(s.z), bc::pauli_z()), 0.0);
}

TEST(Pseudospin, FlipObservableIsUnitVectorDotS) {
  const bc::FockCutoff cutoff(12);
  const auto s = bc::pseudospin_operators(cutoff);
  std::mt19937_64 rng(10);
  for (int k = 0; k < 20; ++k) {
    const double a = bc::testing::uniform_angle(rng);
    const auto us = std::cos(a) * s.x - std::sin(a) * s.y;
    EXPECT_LT(bc::max_abs_diff(us, flip(a, PairingScheme::fock(cutoff))), 1e-15);
  }
}

TEST(SpinMatrices, Examples) {
  const auto half = bc::spin_matrices(bc::SpinJ(1));
  EXPECT_LT(bc::max_abs_diff(half.x, cplx(0.5) * bc::pauli_x()), 1e-15);
  EXPECT_LT(bc::max_abs_diff(half.y, cplx(0.5) * bc::pauli_y()), 1e-15);
  EXPECT_LT(bc::max_abs_diff(half.z, cplx(0.5) * bc::pauli_z()), 1e-15);
  const auto one = bc::spin_matrices(bc::SpinJ(2));
  EXPECT_LT(bc::max_abs_diff(one.z, DenseOperator{{1, 0, 0}, {0, 0, 0}, {0, 0, -1}}), 1e-15);
}

TEST(SpinMatrices, CommutationRelations) {
  for (int two_j = 1; two_j <= 5; ++two_j) {
    const bc::SpinJ j(two_j);
    const auto s = bc::spin_matrices(j);
    EXPECT_LT(bc::max_abs_diff(bc::commutator(s.x, s.y), kI * s.z), 1e-12);
    EXPECT_LT(bc::max_abs_diff(bc::commutator(s.y, s.z), kI * s.x), 1e-12);
    EXPECT_LT(bc::max_abs_diff(bc::commutator(s.z, s.x), kI * s.y), 1e-12);
    const auto casimir = s.x * s.x + s.y * s.y + s.z * s.z;
    EXPECT_LT(bc::max_abs_diff(casimir, (j.value() * (j.value() + 1)) * DenseOperator::identity(j.dim())), 1e-12);
  }
}

TEST(Chsh, DegenerateSettings) {
  std::mt19937_64 rng(12);
  const auto a = random_polar(rng);
  const auto b = random_polar(rng);
  const auto c = bc::chsh_operator(a, a, b, random_polar(rng));
  EXPECT_LT(bc::max_abs_diff(c, cplx(2.0) * bc::tensor_op(a, b)), 1e-14);
  EXPECT_LE(bc::operator_norm(c), 2.0 + 1e-12);
}

TEST(Chsh, StandardSettingsReachTsirelson) {
  const auto c = bc::chsh_operator(flip(0), flip(std::numbers::pi / 2), flip(-std::numbers::pi / 4),
                                   flip(std::numbers::pi / 4));
  EXPECT_NEAR(bc::operator_norm(c), kTsirelson, 1e-12);
}

TEST(Chsh, SquareIdentityAndNormBound) {
  std::mt19937_64 rng(14);
  const auto id4 = DenseOperator::identity(4);
  for (int k = 0; k < 1000; ++k) {
    const auto a = random_polar(rng), ap = random_polar(rng), b = random_polar(rng), bp = random_polar(rng);
    const auto c = bc::chsh_operator(a, ap, b, bp);
    const auto want = cplx(4.0) * id4 - bc::tensor_op(bc::commutator(a, ap), bc::commutator(b, bp));
    ASSERT_LT(bc::max_abs_diff(c * c, want), 1e-10);
    ASSERT_LE(bc::operator_norm(c), kTsirelson + 1e-9);
    ASSERT_LE(bc::operator_norm(bc::commutator(a, ap)), 2.0 + 1e-12);
  }
}

TEST(Chsh, RejectsBadInput) {
  EXPECT_THROW(bc::chsh_operator(2.0 * flip(0), flip(0), flip(0), flip(0)), bc::DomainError);
  EXPECT_THROW(bc::chsh_operator(flip(0), flip(0), flip(0), DenseOperator::identity(3)), bc::DimensionError);
}

TEST(Commutators, LocalityAndNoncommutativity) {
  std::mt19937_64 rng(15);
  const auto id = DenseOperator::identity(2);
  for (int k = 0; k < 50; ++k) {
    const auto a = random_polar(rng), b = random_polar(rng);
    EXPECT_EQ(bc::max_abs_diff(bc::commutator(bc::tensor_op(a, id), bc::tensor_op(id, b)), DenseOperator::zero(4)), 0.0);
    const double x = bc::testing::uniform_angle(rng);
    const double y = x + 0.3 + std::fmod(static_cast<double>(k), 2.5);
    EXPECT_GT(bc::operator_norm(bc::commutator(flip(x), flip(y))), 1e-3);
  }
}

TEST(Mermin3, DegenerateSettingsAndSquareIdentity) {
  std::mt19937_64 rng(16);
  const auto a = random_polar(rng), b = random_polar(rng), c = random_polar(rng);
  const auto m = bc::mermin3_operator(a, a, b, b, c, c);
  EXPECT_LT(bc::max_abs_diff(m, cplx(2.0) * bc::tensor_op(bc::tensor_op(a, b), c)), 1e-14);
  EXPECT_NEAR(bc::operator_norm(m), 2.0, 1e-12);

  const auto id = DenseOperator::identity(2);
  for (int k = 0; k < 100; ++k) {
    const auto a1 = random_polar(rng), a2 = random_polar(rng), b1 = random_polar(rng), b2 = random_polar(rng),
               c1 = random_polar(rng), c2 = random_polar(rng);
    const auto m3 = bc::mermin3_operator(a1, a2, b1, b2, c1, c2);
    const auto ca = bc::commutator(a1, a2), cb = bc::commutator(b1, b2), cc = bc::commutator(c1, c2);
    const auto want = cplx(4.0) * DenseOperator::identity(8) - bc::tensor_op(bc::tensor_op(ca, cb), id) -
                      bc::tensor_op(bc::tensor_op(ca, id), cc) - bc::tensor_op(bc::tensor_op(id, cb), cc);
    ASSERT_LT(bc::max_abs_diff(m3 * m3, want), 1e-10);
    ASSERT_LE(bc::operator_norm(m3), 4.0 + 1e-9);
  }
}

TEST(Mermin4, SignsAndNormBound) {
  EXPECT_EQ(bc::mermin4_sign(0), -1);
  EXPECT_EQ(bc::mermin4_sign(1), 1);
  EXPECT_EQ(bc::mermin4_sign(2), 1);
  EXPECT_EQ(bc::mermin4_sign(3), -1);
  EXPECT_EQ(bc::mermin4_sign(4), -1);
  std::mt19937_64 rng(18);
  for (int k = 0; k < 100; ++k) {
    std::array<DenseOperator, 8> o{random_polar(rng), random_polar(rng), random_polar(rng), random_polar(rng),
                                   random_polar(rng), random_polar(rng), random_polar(rng), random_polar(rng)};
    const auto m4 = bc::mermin4_operator(o[0], o[1], o[2], o[3], o[4], o[5], o[6], o[7]);
    EXPECT_TRUE(m4.hermitian());
    ASSERT_LE(bc::operator_norm(m4), 4.0 * std::numbers::sqrt2 + 1e-9);
  }
}

TEST(Mermin4, MatchesHandExpansion) {
  // 2 M4 = -ABCD + (one primed) + (two primed) - (three primed) - A'B'C'D'.
  std::mt19937_64 rng(19);
  std::array<DenseOperator, 8> o{random_polar(rng), random_polar(rng), random_polar(rng), random_polar(rng),
                                 random_polar(rng), random_polar(rng), random_polar(rng), random_polar(rng)};
  auto t = [&](int a, int b, int c, int d) {
    const std::array<DenseOperator, 4> f{o[static_cast<std::size_t>(a)], o[static_cast<std::size_t>(2 + b)],
                                         o[static_cast<std::size_t>(4 + c)], o[static_cast<std::size_t>(6 + d)]};
    return bc::tensor_op(f);
  };
  DenseOperator want = cplx(-1.0) * t(0, 0, 0, 0);
  want = want + t(1, 0, 0, 0) + t(0, 1, 0, 0) + t(0, 0, 1, 0) + t(0, 0, 0, 1);
  want = want + t(1, 1, 0, 0) + t(1, 0, 1, 0) + t(1, 0, 0, 1) + t(0, 1, 1, 0) + t(0, 1, 0, 1) + t(0, 0, 1, 1);
  want = want - t(1, 1, 1, 0) - t(1, 1, 0, 1) - t(1, 0, 1, 1) - t(0, 1, 1, 1);
  want = want - t(1, 1, 1, 1);
  const auto m4 = bc::mermin4_operator(o[0], o[1], o[2], o[3], o[4], o[5], o[6], o[7]);
  EXPECT_LT(bc::max_abs_diff(m4, cplx(0.5) * want), 1e-14);
}

#include "qdisc/bloch.hpp"
#include "qdisc/discord.hpp"
#include "qdisc/families.hpp"
#include "qdisc/oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qdisc;

namespace {

Matrix3 rot_z(double a) {
  Matrix3 r;
  r << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  return r;
}

}  // namespace

TEST(ValidateState, MaximallyMixedIsValid) {
  EXPECT_NO_THROW(validate_state(Matrix4c::Identity() / 4.0));
}

TEST(ValidateState, WernerOutsideRangeIsNotPositive) {
  const double t = 0.5;
  Matrix4c rho = Matrix4c::Zero();
  rho(0, 0) = rho(3, 3) = 1 + t;
  rho(1, 1) = rho(2, 2) = 1 - t;
  rho(1, 2) = rho(2, 1) = 2 * t;
  try {
    validate_state(rho / 4.0);
    FAIL() << "expected NotPositive";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.kind(), Violation::NotPositive);
    // eigenvalue (1 - 3t)/4
    EXPECT_NEAR(e.magnitude(), 0.125, 1e-12);
  }
}

TEST(ValidateState, NegativeEigenvalueIsNotPositive) {
  std::mt19937_64 rng(7);
  // Hermitian, trace one, spectrum {0.51, 0.3, 0.2, -0.01} in a random basis.
  Matrix4c g = random_ginibre_state(rng).rho;
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(g);
  const Matrix4c u = es.eigenvectors();
  Vector4 d(0.51, 0.3, 0.2, -0.01);
  const Matrix4c rho = u * d.cast<cplx>().asDiagonal() * u.adjoint();
  try {
    validate_state(rho);
    FAIL() << "expected NotPositive";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.kind(), Violation::NotPositive);
    EXPECT_NEAR(e.magnitude(), 0.01, 1e-12);
  }
}

TEST(ValidateState, NonHermitianAndTrace) {
  Matrix4c rho = Matrix4c::Identity() / 4.0;
  rho(0, 1) = cplx(0.0, 1e-6);
  try {
    validate_state(rho);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.kind(), Violation::NotHermitian);
  }
  rho = Matrix4c::Identity() / 4.0;
  rho(0, 0) += 1e-8;
  try {
    validate_state(rho);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.kind(), Violation::NotUnitTrace);
    EXPECT_NEAR(e.magnitude(), 1e-8, 1e-15);
  }
  // Rounding-level noise passes.
  rho = Matrix4c::Identity() / 4.0;
  rho(0, 0) += 1e-12;
  rho(1, 2) = cplx(1e-12, 0);
  EXPECT_NO_THROW(validate_state(rho));
}

TEST(ToBloch, MaximallyMixed) {
  const BlochForm b = to_bloch(TwoQubitState{});
  EXPECT_LT(b.x.norm() + b.y.norm() + b.K.norm(), 1e-15);
}

TEST(ToBloch, PureN) {
  const BlochForm b = to_bloch(pure_n(0.6));
  EXPECT_LT((b.x - Vector3(0, 0, 0.8)).norm(), 1e-12);
  Matrix3 k = Vector3(0.6, -0.6, 1.0).asDiagonal();
  EXPECT_LT(max_abs(b.K - k), 1e-12);
}

TEST(ToBloch, RoundTripRandom) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const TwoQubitState s = random_ginibre_state(rng);
    const BlochForm b = to_bloch(s);
    EXPECT_LT(max_abs(from_bloch(b).rho - s.rho), 1e-12);
    const BlochForm again = to_bloch(from_bloch(b));
    EXPECT_LT((again.x - b.x).norm() + (again.y - b.y).norm() + max_abs(again.K - b.K), 1e-12);
    EXPECT_LE(b.x.norm(), 1.0 + 1e-12);
    EXPECT_LE(b.y.norm(), 1.0 + 1e-12);
  }
}

TEST(FromBloch, ZeroIsMaximallyMixed) {
  EXPECT_LT(max_abs(from_bloch(BlochForm{}).rho - Matrix4c::Identity() / 4.0), 1e-15);
}

TEST(FromBloch, WernerParameters) {
  BlochForm b;
  b.K = 0.2 * Matrix3::Identity();
  EXPECT_LT(max_abs(from_bloch(b).rho - werner(0.2).rho), 1e-15);
}

TEST(FromBloch, TraceIsOneForArbitraryInput) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int i = 0; i < 50; ++i) {
    BlochForm b;
    b.x = Vector3(n(rng), n(rng), n(rng));
    b.y = Vector3(n(rng), n(rng), n(rng));
    b.K = Matrix3::NullaryExpr([&] { return n(rng); });
    EXPECT_NEAR(std::abs(from_bloch(b).rho.trace() - cplx(1, 0)), 0.0, 1e-14);
  }
}

TEST(DiagonalizeCorrelation, DiagonalInput) {
  BlochForm b;
  b.K = Vector3(0.2, -0.7, 0.4).asDiagonal();
  const auto [frame, out] = diagonalize_correlation(b);
  EXPECT_TRUE(is_special_orthogonal(frame.U, 1e-12));
  EXPECT_TRUE(is_special_orthogonal(frame.V, 1e-12));
  // Signed permutations.
  for (const Matrix3* m : {&frame.U, &frame.V})
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double a = std::abs((*m)(i, j));
        EXPECT_TRUE(a < 1e-12 || std::abs(a - 1.0) < 1e-12);
      }
  Vector3 absd = frame.D.cwiseAbs();
  std::sort(absd.data(), absd.data() + 3);
  EXPECT_LT((absd - Vector3(0.2, 0.4, 0.7)).norm(), 1e-12);
}

TEST(DiagonalizeCorrelation, ScaledRotation) {
  std::mt19937_64 rng(5);
  BlochForm b;
  b.K = -0.35 * random_rotation(rng);
  const auto [frame, out] = diagonalize_correlation(b);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(std::abs(frame.D(k)), 0.35, 1e-12);
}

TEST(DiagonalizeCorrelation, RandomResidualAndSingularValues) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    const BlochForm b = to_bloch(random_ginibre_state(rng));
    const auto [frame, out] = diagonalize_correlation(b);
    const Matrix3 diag = frame.D.asDiagonal();
    EXPECT_LT(max_abs(frame.U * b.K * frame.V.transpose() - diag), 1e-12);
    EXPECT_LT(max_abs(out.K - diag), 1e-12);
    EXPECT_NEAR(frame.U.determinant(), 1.0, 1e-12);
    EXPECT_NEAR(frame.V.determinant(), 1.0, 1e-12);
    EXPECT_LT(max_abs(frame.U * frame.U.transpose() - Matrix3::Identity()), 1e-12);
    EXPECT_LT(max_abs(frame.V * frame.V.transpose() - Matrix3::Identity()), 1e-12);
    Eigen::JacobiSVD<Matrix3> svd(b.K);
    Vector3 absd = frame.D.cwiseAbs();
    std::sort(absd.data(), absd.data() + 3, std::greater<>());
    EXPECT_LT((absd - svd.singularValues()).norm(), 1e-12);
    EXPECT_LT((out.x - frame.U * b.x).norm(), 1e-15);
    EXPECT_LT((out.y - frame.V * b.y).norm(), 1e-15);
  }
}

TEST(ApplyLocalRotation, Identity) {
  std::mt19937_64 rng(17);
  const BlochForm b = to_bloch(random_ginibre_state(rng));
  const BlochForm out = apply_local_rotation(b, Matrix3::Identity(), Matrix3::Identity());
  EXPECT_EQ(out.x, b.x);
  EXPECT_EQ(out.y, b.y);
  EXPECT_EQ(out.K, b.K);
}

TEST(ApplyLocalRotation, HalfTurnAboutZ) {
  BlochForm b;
  b.x = Vector3(1, 0, 0);
  const BlochForm out = apply_local_rotation(b, rot_z(kPi), Matrix3::Identity());
  EXPECT_LT((out.x - Vector3(-1, 0, 0)).norm(), 1e-15);
}

TEST(ApplyLocalRotation, RejectsReflection) {
  const Matrix3 refl = Vector3(1, 1, -1).asDiagonal();
  try {
    apply_local_rotation(BlochForm{}, refl, Matrix3::Identity());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.kind(), Violation::NotSpecialOrthogonal);
  }
  Matrix3 skew = Matrix3::Identity();
  skew(0, 1) = 0.1;
  EXPECT_THROW(apply_local_rotation(BlochForm{}, Matrix3::Identity(), skew), ValidationError);
}

TEST(ApplyLocalRotation, MatchesUnitaryConjugation) {
  // A pi rotation about e3 is conjugation by sigma_z on that qubit.
  std::mt19937_64 rng(19);
  const TwoQubitState s = random_ginibre_state(rng);
  const Matrix4c u = kron(pauli()[2], Matrix2c::Identity());
  const BlochForm direct = to_bloch(TwoQubitState{u * s.rho * u.adjoint()});
  const BlochForm rotated = apply_local_rotation(to_bloch(s), rot_z(kPi), Matrix3::Identity());
  EXPECT_LT((direct.x - rotated.x).norm() + max_abs(direct.K - rotated.K), 1e-12);
}

TEST(ApplyLocalRotation, PreservesDiscordAgainstOracle) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 10; ++i) {
    const BlochForm b = to_bloch(random_ginibre_state(rng));
    const BlochForm r = apply_local_rotation(b, random_rotation(rng), random_rotation(rng));
    EXPECT_NEAR(minimize_grid(b).min_value, minimize_grid(r).min_value, 1e-8);
  }
}

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"

namespace spt {
namespace {

TEST(Linalg, ProductsAndInverse) {
  const Mat2 a{1.0, 2.0, 3.0, 4.0};
  const Mat2 prod = a * inverse(a);
  EXPECT_LT(max_abs(prod - Mat2::identity()), 1e-15);
  const Mat3 m{2.0, 0.1, 0.0, -0.3, 1.0, 0.5, 0.2, 0.0, 3.0};
  EXPECT_LT(max_abs(m * inverse(m) - Mat3::identity()), 1e-15);
  EXPECT_DOUBLE_EQ(det(a), -2.0);
}

TEST(Linalg, SingularValuesMatchEigenOfGram) {
  const Mat2 a{3.0, 1.0, -2.0, 0.5};
  const auto sv = singular_values(a);
  // σ² are the roots of λ² − tr(AᵀA) λ + det(A)² = 0
  const Mat2 g = a.transpose() * a;
  const double tr = g(0, 0) + g(1, 1);
  for (double s : sv) EXPECT_NEAR(s * s * s * s - tr * s * s + det(a) * det(a), 0.0, 1e-12);
  EXPECT_GE(sv[0], sv[1]);
  const auto rank1 = singular_values(Mat2{1.0, 2.0, 2.0, 4.0});
  EXPECT_DOUBLE_EQ(rank1[1], 0.0);
}

TEST(Linalg, NormIsFiniteForLargeInput) {
  const Vec3 v{1e200, 1e200, -1e200};
  EXPECT_TRUE(std::isfinite(norm(v)));
  EXPECT_EQ(norm(Vec3{}), 0.0);
}

TEST(FkPlanar, ClosedFormValues) {
  const auto z = fk_planar(0.05, 0.20, 0.0);
  EXPECT_DOUBLE_EQ(z.b[0], 0.25);
  EXPECT_DOUBLE_EQ(z.b[1], 0.0);
  EXPECT_DOUBLE_EQ(z.Bs[0], 0.0);
  EXPECT_DOUBLE_EQ(z.Bs[1], 0.05);

  const auto q = fk_planar(0.05, 0.20, std::numbers::pi / 2);
  EXPECT_NEAR(q.b[0], 0.20, 1e-16);
  EXPECT_DOUBLE_EQ(q.b[1], 0.05);
  EXPECT_DOUBLE_EQ(q.Bs[0], -0.05);
  EXPECT_NEAR(q.Bs[1], 0.0, 1e-17);
}

TEST(FkPlanar, DerivativesMatchFiniteDifferences) {
  const double h = 1e-5;
  const auto fk = fk_planar(0.05, 0.20, 0.7);
  const auto b_of = [](const Vec<1>& q) { return fk_planar(0.05, 0.20, q[0]).b; };
  const auto bs_of = [](const Vec<1>& q) { return fk_planar(0.05, 0.20, q[0]).Bs.col(0); };
  EXPECT_LT(max_abs(fk.Bs - oracle::central_diff<3, 1>(b_of, Vec<1>{0.7}, h)), 1e-8);
  EXPECT_LT(max_abs(fk.Bss[0] - oracle::central_diff<3, 1>(bs_of, Vec<1>{0.7}, h)), 1e-8);
}

TEST(FkPlanar, ThirdComponentIsExactlyZero) {
  for (double q = -3.0; q <= 3.0; q += 0.37) {
    const auto fk = fk_planar(0.05, 0.20, q);
    EXPECT_EQ(fk.b[2], 0.0);
    EXPECT_EQ(fk.Bs[2], 0.0);
    EXPECT_EQ(fk.Bss[0][2], 0.0);
  }
}

TEST(FkAnkle, PlanarDegenerateReducesToPlanarLever) {
  const auto p = fixtures::ankle_planar_degenerate();
  const auto k = fixtures::knee();
  for (double q1 : {0.2, 0.9, 1.7}) {
    const auto fk = fk_ankle(p, Side::alpha, Vec2{q1, 0.0});
    const auto planar = fk_planar(k.l3, k.l4, q1);
    EXPECT_NEAR(fk.b[2], 0.0, 1e-15);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_NEAR(fk.b[i], planar.b[i], 1e-15);
      EXPECT_NEAR(fk.Bs(i, 0), planar.Bs[i], 1e-15);
      EXPECT_NEAR(fk.Bss[0](i, 0), planar.Bss[0][i], 1e-15);
    }
  }
}

TEST(FkAnkle, MirrorSidesGiveOppositeOutOfPlaneOffset) {
  const auto p = fixtures::ankle();
  for (const Vec2 q : {Vec2{0.3, -0.2}, Vec2{-0.4, 0.5}, Vec2{0.0, 0.0}}) {
    const auto a = fk_ankle(p, Side::alpha, q);
    const auto b = fk_ankle(p, Side::beta, Vec2{q[0], -q[1]});
    EXPECT_NEAR(a.b[0], b.b[0], 1e-15);
    EXPECT_NEAR(a.b[1], b.b[1], 1e-15);
    EXPECT_NEAR(a.b[2], -b.b[2], 1e-15);
  }
}

TEST(FkAnkle, DerivativesMatchFiniteDifferencesAtFixturePoint) {
  const auto p = fixtures::ankle();
  const Vec2 q{0.3, -0.2};
  const double h = 1e-5;
  for (Side s : {Side::alpha, Side::beta}) {
    const auto fk = fk_ankle(p, s, q);
    const auto b_of = [&](const Vec2& x) { return fk_ankle(p, s, x).b; };
    EXPECT_LT(max_abs(fk.Bs - oracle::central_diff<3, 2>(b_of, q, h)), 1e-7);
    for (std::size_t j = 0; j < 2; ++j) {
      const auto bs_col = [&](const Vec2& x) { return fk_ankle(p, s, x).Bs.col(j); };
      const auto fd = oracle::central_diff<3, 2>(bs_col, q, h);
      // fd(:, k) = ∂²b/∂q_j∂q_k = Bss[k](:, j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(fk.Bss[k](i, j), fd(i, k), 1e-7);
    }
  }
}

TEST(FkAnkle, RandomDerivativeConsistencyAndSymmetry) {
  const auto p = fixtures::ankle();
  const Ankle mech(p);
  const double h = 1e-5;
  for (const auto& q : oracle::feasible_samples(mech, 100, 11)) {
    for (Side s : {Side::alpha, Side::beta}) {
      const auto fk = fk_ankle(p, s, q);
      const auto b_of = [&](const Vec2& x) { return fk_ankle(p, s, x).b; };
      EXPECT_LE(max_abs(fk.Bs - oracle::central_diff<3, 2>(b_of, q, h)), 1e-7 * std::max(1.0, max_abs(fk.Bs)));
      for (std::size_t j = 0; j < 2; ++j) {
        const auto bs_col = [&](const Vec2& x) { return fk_ankle(p, s, x).Bs.col(j); };
        const auto fd = oracle::central_diff<3, 2>(bs_col, q, h);
        for (std::size_t k = 0; k < 2; ++k)
          for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_LE(std::abs(fk.Bss[k](i, j) - fd(i, k)), 1e-5);
            EXPECT_DOUBLE_EQ(fk.Bss[k](i, j), fk.Bss[j](i, k));
          }
      }
    }
  }
}

TEST(FkAnkle, FootIsRigid) {
  const auto p = fixtures::ankle();
  const double expected = norm(p.sides[0].attachment);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Vec2 q{u(rng), u(rng)};
    const Vec3 B = p.joint.center + p.joint.rotation(q) * p.sides[0].attachment;
    EXPECT_NEAR(norm(B - p.joint.center), expected, 1e-15);
    // and the same distance seen from the motor frame
    const MotorFrame f = motor_frame(p, Side::alpha);
    const Vec3 b = fk_ankle(p, Side::alpha, q).b;
    EXPECT_NEAR(norm(f.axes * b + f.origin - p.joint.center), expected, 1e-15);
  }
}

}  // namespace
}  // namespace spt

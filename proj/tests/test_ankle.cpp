#include <gtest/gtest.h>

#include <queue>
#include <vector>

#include "oracles.hpp"

namespace spt {
namespace {

TEST(Ankle, PlanarDegenerateMatchesProjectedFourBar) {
  const auto p = fixtures::ankle_planar_degenerate();
  const auto k = fixtures::knee();
  for (double q1 = k.q_s_min; q1 <= k.q_s_max; q1 += 0.1) {
    const auto e = eval_f2(p, Vec2{q1, 0.0});
    const auto planar = eval_f(k, q1);
    EXPECT_NEAR(e.sides[0].z_B, 0.0, 1e-15);
    EXPECT_NEAR(e.sides[0].q_m, planar.q_m, 1e-13);
    EXPECT_NEAR(e.sides[0].r, planar.r, 1e-13);
    EXPECT_NEAR(e.sides[0].l2_bar, k.l2, 1e-15);
  }
}

TEST(Ankle, MatchesBisectionAtNeutral) {
  const auto p = fixtures::ankle();
  const auto e = eval_f2(p, Vec2{0.0, 0.0});
  EXPECT_NEAR(oracle::wrap_angle(e.q_m[0] - oracle::ankle_bisection(p, Side::alpha, Vec2{0.0, 0.0})), 0.0, 1e-8);
  EXPECT_NEAR(oracle::wrap_angle(e.q_m[1] - oracle::ankle_bisection(p, Side::beta, Vec2{0.0, 0.0})), 0.0, 1e-8);
}

TEST(Ankle, MatchesBisectionOnRandomSamples) {
  const auto p = fixtures::ankle();
  const Ankle mech(p);
  for (const auto& q : oracle::feasible_samples(mech, 1000, 7, 1e-4)) {
    const auto e = eval_f2(p, q);
    for (Side s : {Side::alpha, Side::beta})
      ASSERT_NEAR(oracle::wrap_angle(e.q_m[static_cast<int>(s)] - oracle::ankle_bisection(p, s, q)), 0.0, 1e-8)
          << q << " side " << to_string(s);
  }
}

TEST(Ankle, MirrorSymmetry) {
  const auto p = fixtures::ankle();
  const Ankle mech(p);
  for (const auto& q : oracle::feasible_samples(mech, 200, 5)) {
    const auto a = eval_f2(p, q);
    const auto b = eval_f2(p, Vec2{q[0], -q[1]});
    EXPECT_NEAR(a.q_m[1], b.q_m[0], 1e-13);
  }
}

TEST(Ankle, ErrorsCarrySide) {
  const auto p = fixtures::ankle();
  try {
    (void)eval_f2(p, Vec2{0.45, 0.0});
    FAIL() << "expected Infeasible";
  } catch (const TransmissionError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::infeasible);
    ASSERT_TRUE(e.side().has_value());
  }
  // Stretch beta's attachment far out of its motor plane.
  auto q = p;
  q.sides[1].attachment = Vec3{-0.2, 0.03, -0.06};
  try {
    (void)eval_f2(q, Vec2{0.0, 0.0});
    FAIL() << "expected RodTooShort";
  } catch (const TransmissionError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::rod_too_short);
    EXPECT_EQ(e.side(), Side::beta);
  }
  EXPECT_THROW(Ankle{q}, TransmissionError);

  auto on_axis = p;
  on_axis.sides[0].motor_origin = Vec3{0.09, 0.0, 0.0};  // O on α's motor axis
  try {
    Ankle{on_axis};
    FAIL() << "expected a config error";
  } catch (const TransmissionError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
    EXPECT_EQ(e.side(), Side::alpha);
  }
}

TEST(Ankle, FeasibleDiamondIsConnected) {
  const Ankle mech(fixtures::ankle());
  constexpr int n = 201;
  const auto lo = mech.serial_min(), hi = mech.serial_max();
  std::vector<char> ok(n * n, 0);
  int total = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Vec2 q{lo[0] + (hi[0] - lo[0]) * i / (n - 1), lo[1] + (hi[1] - lo[1]) * j / (n - 1)};
      ok[i * n + j] = probe(mech, q).feasible();
      total += ok[i * n + j];
    }
  ASSERT_GT(total, 0);
  // the box edges lie outside the mechanism's workspace
  for (int k = 0; k < n; ++k) {
    EXPECT_FALSE(ok[k]);
    EXPECT_FALSE(ok[(n - 1) * n + k]);
    EXPECT_FALSE(ok[k * n]);
    EXPECT_FALSE(ok[k * n + n - 1]);
  }
  int start = 0;
  while (!ok[start]) ++start;
  std::vector<char> seen(n * n, 0);
  std::queue<int> bfs;
  bfs.push(start);
  seen[start] = 1;
  int reached = 0;
  while (!bfs.empty()) {
    const int c = bfs.front();
    bfs.pop();
    ++reached;
    const int i = c / n, j = c % n;
    const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
    for (const auto& v : nb) {
      if (v[0] < 0 || v[0] >= n || v[1] < 0 || v[1] >= n) continue;
      const int id = v[0] * n + v[1];
      if (ok[id] && !seen[id]) seen[id] = 1, bfs.push(id);
    }
  }
  EXPECT_EQ(reached, total);
}

}  // namespace
}  // namespace spt

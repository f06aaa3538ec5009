#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"

namespace spt {
namespace {

TEST(FourBar, ParallelogramIsIdentity) {
  const auto p = fixtures::knee_parallelogram();
  for (double q = p.q_s_min; q <= p.q_s_max; q += 0.05) EXPECT_NEAR(eval_f(p, q).q_m, q, 1e-12) << q;
}

TEST(FourBar, RightAngleConstruction) {
  const auto e = eval_f(fixtures::knee_right_angle(), 0.0);
  EXPECT_DOUBLE_EQ(e.q_m1, 0.0);
  EXPECT_NEAR(e.r, 0.0, 1e-15);
  EXPECT_NEAR(e.q_m2, std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(e.q_m, std::numbers::pi / 2, 1e-15);
}

TEST(FourBar, MatchesCircleIntersection) {
  const auto p = fixtures::knee();
  EXPECT_NEAR(oracle::wrap_angle(eval_f(p, 1.0).q_m - oracle::knee_circle_intersection(p, 1.0)), 0.0, 1e-9);
  for (double q = -2.5; q <= 2.5; q += 0.01) {
    const auto e = eval_closure(p, q);
    if (!e.feasible || e.singular_margin < 1e-6) continue;
    EXPECT_NEAR(oracle::wrap_angle(e.q_m - oracle::knee_circle_intersection(p, q)), 0.0, 1e-9) << q;
  }
}

TEST(FourBar, EvalInvariants) {
  const auto p = fixtures::knee();
  for (double q = p.q_s_min; q <= p.q_s_max; q += 0.013) {
    const auto e = eval_f(p, q);
    EXPECT_DOUBLE_EQ(e.q_m, e.q_m1 + e.q_m2);
    EXPECT_NEAR(e.r * e.r + e.r_hat * e.r_hat, 1.0, 1e-12);
    EXPECT_GE(e.q_m2, 0.0);
    EXPECT_LE(e.q_m2, std::numbers::pi);
    EXPECT_GE(e.r_hat, 0.0);
    EXPECT_DOUBLE_EQ(e.singular_margin, 1.0 - std::abs(e.r));
    EXPECT_TRUE(e.feasible);
  }
}

TEST(FourBar, InfeasibleBeyondClosure) {
  const auto p = fixtures::knee();
  // |b| = 0.15 at q_s = π, shorter than l2 − l1 = 0.16
  try {
    (void)eval_f(p, std::numbers::pi);
    FAIL() << "expected Infeasible";
  } catch (const TransmissionError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::infeasible);
    EXPECT_EQ(e.side(), Side::alpha);
  }
}

TEST(FourBar, NearSingularFlagIsOnlyAWarning) {
  const auto p = fixtures::knee();
  // bisect the closure boundary near q_s ≈ 2.577
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (eval_closure(p, mid).r_raw >= -1.0 ? lo : hi) = mid;
  }
  const auto e = eval_f(p, lo - 1e-9);
  EXPECT_TRUE(e.near_singular);
  EXPECT_TRUE(e.feasible);
  EXPECT_FALSE(eval_f(p, 1.0).near_singular);
}

TEST(FourBar, RejectsBadParameters) {
  auto p = fixtures::knee();
  p.l2 = -0.1;
  EXPECT_THROW(FourBar{p}, TransmissionError);
  p = fixtures::knee();
  p.q_s_min = 1.0;
  p.q_s_max = 0.5;
  EXPECT_THROW(FourBar{p}, TransmissionError);
  p = fixtures::knee();
  p.l2 = 10.0;  // never closes
  EXPECT_THROW(FourBar{p}, TransmissionError);
}

TEST(MotorLimitMap, ParallelogramBounds) {
  auto p = fixtures::knee_parallelogram();
  p.q_m_lo = -1.0;
  p.q_m_hi = 1.0;
  // f = identity on the serial range [0.1, 3.0]
  for (const auto& s : motor_limit_map(p, p.q_s_min, p.q_s_max, 291)) {
    const bool inside = s.q_s >= -1.0 - 1e-12 && s.q_s <= 1.0 + 1e-12;
    EXPECT_EQ(s.verdict == Verdict::feasible, inside) << s.q_s;
  }
}

TEST(MotorLimitMap, UnboundedMotorReportsClosureOnly) {
  const auto p = fixtures::knee();
  for (const auto& s : motor_limit_map(p, -3.0, 3.0, 601)) {
    const bool closes = std::abs(eval_closure(p, s.q_s).r_raw) <= 1.0 + kFeasibilitySlack;
    EXPECT_EQ(s.verdict, closes ? Verdict::feasible : Verdict::closure_infeasible) << s.q_s;
  }
}

TEST(MotorLimitMap, MatchesBruteForceSweep) {
  auto p = fixtures::knee();
  p.q_m_lo = 0.3;
  p.q_m_hi = 2.5;
  const auto map = motor_limit_map(p, -2.0, 2.0, 101);
  ASSERT_EQ(map.size(), 101u);
  int violated = 0;
  for (std::size_t k = 0; k < map.size(); ++k) {
    const double q = -2.0 + 4.0 * static_cast<double>(k) / 100.0;
    EXPECT_DOUBLE_EQ(map[k].q_s, q);
    Verdict expected;
    try {
      const double qm = eval_f(p, q).q_m;
      expected = (qm < 0.3 || qm > 2.5) ? Verdict::motor_limit_violated : Verdict::feasible;
    } catch (const TransmissionError&) {
      expected = Verdict::closure_infeasible;
    }
    EXPECT_EQ(map[k].verdict, expected) << q;
    violated += expected == Verdict::motor_limit_violated;
  }
  // the knee only sweeps q_m over roughly [0.56, 2.23]
  EXPECT_EQ(violated, 0);
}

TEST(MotorLimitMap, TightBoundsAreViolated) {
  auto p = fixtures::knee();
  p.q_m_lo = 1.0;
  p.q_m_hi = 2.0;
  int violated = 0;
  for (const auto& s : motor_limit_map(p, -2.0, 2.0, 101)) {
    if (s.verdict == Verdict::closure_infeasible) continue;
    const double qm = eval_f(p, s.q_s).q_m;
    EXPECT_EQ(s.verdict == Verdict::motor_limit_violated, qm < 1.0 || qm > 2.0) << s.q_s;
    violated += s.verdict == Verdict::motor_limit_violated;
  }
  EXPECT_GT(violated, 0);
}

TEST(FourBar, BranchContinuity) {
  const auto p = fixtures::knee();
  double prev = eval_f(p, -2.5).q_m;
  for (double q = -2.5 + 1e-3; q <= 2.5; q += 1e-3) {
    const double cur = eval_f(p, q).q_m;
    EXPECT_LT(std::abs(cur - prev), std::numbers::pi / 2);
    prev = cur;
  }
}

}  // namespace
}  // namespace spt

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"

namespace spt {
namespace {

template <Transmission M>
void check_round_trip(const M& mech, std::uint64_t seed) {
  for (const auto& q : oracle::feasible_samples(mech, 1000, seed, 1e-3)) {
    const auto st = estimate(mech, transmission_map(mech, q), cold_start(mech));
    ASSERT_LE(max_abs(st.q_hat - q), 1e-8) << q;
    ASSERT_LE(st.residual, 1e-10);
    ASSERT_LE(norm(transmission_map(mech, st.q_hat) - transmission_map(mech, q)), 1e-10);
  }
}

TEST(Estimate, KneeRoundTrip) { check_round_trip(FourBar(fixtures::knee()), 51); }
TEST(Estimate, AnkleRoundTrip) { check_round_trip(Ankle(fixtures::ankle()), 52); }

TEST(Estimate, ParallelogramConvergesInOneStep) {
  const auto p = fixtures::knee_parallelogram();
  const FourBar mech(p);
  for (double warm = 0.3; warm < 2.9; warm += 0.4)
    for (double target = 0.4; target < 2.8; target += 0.5) {
      const auto st = estimate(mech, Vec<1>{target}, EstimatorState<1>{Vec<1>{warm}, 0.0, 0});
      EXPECT_LE(st.iterations, 1);
      EXPECT_NEAR(st.q_hat[0], target, 1e-12);
    }
}

TEST(Estimate, WarmStartAlongTrajectory) {
  // 10 s at 100 Hz with per-tick motion up to 0.02 rad
  const Ankle mech(fixtures::ankle());
  auto st = EstimatorState<2>{Vec2{-0.25, 0.0}, 0.0, 0};
  int worst = 0;
  for (int k = 0; k <= 1000; ++k) {
    const double t = 0.01 * k;
    const Vec2 q{-0.25 + 0.2 * std::sin(2.0 * std::numbers::pi * 0.5 * t),
                 0.3 * std::sin(2.0 * std::numbers::pi * 0.8 * t)};
    st = estimate(mech, transmission_map(mech, q), st);
    worst = std::max(worst, st.iterations);
    ASSERT_LE(max_abs(st.q_hat - q), 1e-8);
  }
  EXPECT_LE(worst, 3);
}

TEST(Estimate, IsIdempotentAtConvergence) {
  const FourBar mech(fixtures::knee());
  const auto st = estimate(mech, transmission_map(mech, Vec<1>{1.1}), cold_start(mech));
  const auto again = estimate(mech, transmission_map(mech, Vec<1>{1.1}), st);
  EXPECT_LE(std::abs(again.q_hat[0] - st.q_hat[0]), 1e-12);
  EXPECT_EQ(again.iterations, 0);
}

TEST(Estimate, NoBranchHoppingFromNearbyStarts) {
  const Ankle mech(fixtures::ankle());
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (const auto& q : oracle::feasible_samples(mech, 100, 54, 0.1)) {
    const Vec2 qm = transmission_map(mech, q);
    for (int k = 0; k < 5; ++k) {
      const Vec2 warm = q + Vec2{u(rng), u(rng)};
      if (!probe(mech, warm).feasible()) continue;
      EXPECT_LE(max_abs(estimate(mech, qm, EstimatorState<2>{warm, 0.0, 0}).q_hat - q), 1e-8);
    }
  }
}

TEST(Estimate, AcceptedStepsStrictlyDescend) {
  const Ankle mech(fixtures::ankle());
  for (const auto& q : oracle::feasible_samples(mech, 50, 57)) {
    std::vector<double> hist;
    EstimatorOptions opt;
    opt.residual_history = &hist;
    (void)estimate(mech, transmission_map(mech, q), cold_start(mech), opt);
    for (std::size_t k = 1; k < hist.size(); ++k) EXPECT_LT(hist[k], hist[k - 1]);
  }
}

TEST(Estimate, UnreachableMotorAnglesAreOutOfWorkspace) {
  const FourBar mech(fixtures::knee());
  try {
    (void)estimate(mech, Vec<1>{-2.0}, cold_start(mech));
    FAIL() << "expected OutOfWorkspace";
  } catch (const TransmissionError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::out_of_workspace);
  }
}

TEST(Estimate, IterationCapReportsNoConvergence) {
  const Ankle mech(fixtures::ankle());
  EstimatorOptions capped;
  capped.max_iterations = 1;
  capped.stall_residual = 10.0;
  try {
    (void)estimate(mech, transmission_map(mech, Vec2{-0.6, 0.2}), cold_start(mech), capped);
    FAIL() << "expected NoConvergence";
  } catch (const TransmissionError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::no_convergence);
  }
}

TEST(RecoverVelocity, SolvesTheJacobianSystem) {
  const Ankle mech(fixtures::ankle());
  std::mt19937_64 rng(55);
  std::normal_distribution<double> n(0.0, 1.0);
  for (const auto& q : oracle::feasible_samples(mech, 100, 56)) {
    EXPECT_EQ(recover_velocity(mech, q, Vec2{}), Vec2{});
    const Vec2 qd_m{n(rng), n(rng)};
    const Vec2 qd_s = recover_velocity(mech, q, qd_m);
    EXPECT_LE(max_abs(actuation_jacobian(mech, q).J * qd_s - qd_m), 1e-12 * std::max(1.0, max_abs(qd_m)));
  }
  const FourBar par(fixtures::knee_parallelogram());
  EXPECT_NEAR(recover_velocity(par, Vec<1>{1.0}, Vec<1>{0.7})[0], 0.7, 1e-12);
}

}  // namespace
}  // namespace spt

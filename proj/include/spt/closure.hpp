#pragma once

// Law-of-cosines closure of one (possibly projected) planar four-bar:
// motor axis M, crank MA of length l1, coupler AB of length l2, attachment B.

#include <algorithm>
#include <cmath>
#include <optional>

#include "spt/errors.hpp"
#include "spt/linalg.hpp"

namespace spt {

/// Absolute slack on |r| ≤ 1 absorbing rounding at the workspace boundary.
inline constexpr double kFeasibilitySlack = 1e-9;
/// singular_margin below this raises the near-singular flag (warning only).
inline constexpr double kNearSingularMargin = 1e-3;
/// r̂ at or below this is a hard singularity for anything needing K.
inline constexpr double kSingularRHat = 1e-8;

struct FourBarEval {
  double q_m = 0.0;   // q_m1 + q_m2
  double q_m1 = 0.0;  // atan2(y_B, x_B)
  double q_m2 = 0.0;  // acos(r) in [0, π]
  double r = 0.0;     // cos q_m2, clamped into [-1, 1] when within slack
  double r_hat = 0.0; // sin q_m2 ≥ 0
  double l = 0.0;     // |b̄|, in-plane distance M-B̄
  double l2_bar = 0.0;  // projected coupler length, sqrt(l2² − z_B²)
  double z_B = 0.0;
  double r_raw = 0.0;  // unclamped law-of-cosines value
  bool rod_ok = true;
  bool feasible = false;
  double singular_margin = 0.0;  // 1 − |r|
  bool near_singular = false;
};

/// Non-throwing closure solve. `rod_ok == false` means l2² ≤ z_B²; otherwise
/// `feasible` reports |r| ≤ 1 + slack. Angles are only meaningful when feasible.
inline FourBarEval solve_closure(const Vec3& b, double l1, double l2) {
  FourBarEval e;
  e.z_B = b[2];
  e.l = std::hypot(b[0], b[1]);
  e.q_m1 = std::atan2(b[1], b[0]);

  const double l2_bar_sq = l2 * l2 - e.z_B * e.z_B;
  if (!(l2_bar_sq > 0.0)) {
    e.rod_ok = false;
    e.feasible = false;
    return e;
  }
  e.l2_bar = std::sqrt(l2_bar_sq);
  e.r_raw = (e.l * e.l + l1 * l1 - l2_bar_sq) / (2.0 * e.l * l1);
  e.feasible = std::abs(e.r_raw) <= 1.0 + kFeasibilitySlack;
  e.r = std::clamp(e.r_raw, -1.0, 1.0);
  e.q_m2 = std::acos(e.r);
  e.r_hat = std::sqrt(std::max(0.0, (1.0 - e.r) * (1.0 + e.r)));
  e.q_m = e.q_m1 + e.q_m2;
  e.singular_margin = 1.0 - std::abs(e.r_raw);
  e.near_singular = e.singular_margin < kNearSingularMargin;
  return e;
}

inline void require_feasible(const FourBarEval& e, Side side) {
  if (!e.rod_ok) {
    throw TransmissionError(ErrorKind::rod_too_short, "coupler shorter than out-of-plane offset", side);
  }
  if (!e.feasible) {
    throw TransmissionError(ErrorKind::infeasible,
                            "closure has no real solution (r = " + std::to_string(e.r_raw) + ")", side);
  }
}

}  // namespace spt

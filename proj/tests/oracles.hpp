#pragma once

// Independent numerical oracles. Nothing here calls the analytic derivative
// code; closure oracles solve the linkage geometry directly. Finite
// differences and sampling come from the verification header shared with
// `spt check`.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "spt/spt.hpp"
#include "spt/verification.hpp"

namespace spt::oracle {

using verify::central_diff;
using verify::central_diff5;
using verify::composite_motor_torque;
using verify::feasible_samples;

inline double wrap_angle(double a) {
  return std::remainder(a, 2.0 * std::numbers::pi);
}

/// Knee motor angle by intersecting circle(M, l1) with circle(B, l2) and
/// keeping the point A counter-clockwise of MB.
inline double knee_circle_intersection(const FourBarParams& p, double q_s) {
  const double bx = p.l4 + p.l3 * std::cos(q_s);
  const double by = p.l3 * std::sin(q_s);
  const double d = std::sqrt(bx * bx + by * by);
  const double a = (p.l1 * p.l1 - p.l2 * p.l2 + d * d) / (2.0 * d);
  const double h = std::sqrt(std::max(0.0, p.l1 * p.l1 - a * a));
  const double ux = bx / d, uy = by / d;
  const double px = a * ux, py = a * uy;
  // candidates on either side of MB
  const double ax1 = px - h * uy, ay1 = py + h * ux;
  const double ax2 = px + h * uy, ay2 = py - h * ux;
  const bool first_ccw = bx * ay1 - by * ax1 >= 0.0;
  return first_ccw ? std::atan2(ay1, ax1) : std::atan2(ay2, ax2);
}

/// One ankle side: solve ‖A(θ) − B‖ = l2 for the crank angle θ by bisection,
/// A on the crank circle in the motor plane, all in world coordinates.
inline double ankle_bisection(const AnkleParams& p, Side s, const Vec2& q_s) {
  const AnkleSide& sd = p.side(s);
  const MotorFrame frame = motor_frame(p, s);
  const Vec3 B = p.joint.center + p.joint.rotation(q_s) * sd.attachment;
  const Vec3 x = frame.axes.col(0), y = frame.axes.col(1);
  const auto g = [&](double th) {
    const Vec3 A = frame.origin + (std::cos(th) * x + std::sin(th) * y) * sd.crank;
    const Vec3 d = A - B;
    return dot(d, d) - sd.rod * sd.rod;
  };
  // Bracket: the minimum of g is where A faces B; g rises over the next half turn.
  constexpr int kScan = 20000;
  double th_min = -std::numbers::pi, g_min = g(th_min);
  for (int k = 1; k < kScan; ++k) {
    const double th = -std::numbers::pi + 2.0 * std::numbers::pi * k / kScan;
    const double v = g(th);
    if (v < g_min) g_min = v, th_min = th;
  }
  double lo = th_min, hi = th_min + std::numbers::pi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace spt::oracle

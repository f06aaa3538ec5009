#pragma once

// Reference geometries used by tests, the acceptance suite, and `spt check`.

#include <cmath>

#include "spt/ankle.hpp"
#include "spt/fourbar.hpp"
#include "spt/simulator.hpp"

namespace spt::fixtures {

/// Generic knee. f folds (J_A = 0) near q_s = −0.17 and closes up to
/// q_s ≈ ±2.577, so the serial range is the invertible branch in between.
inline FourBarParams knee() {
  FourBarParams p;
  p.l1 = 0.05;
  p.l2 = 0.21;
  p.l3 = 0.05;
  p.l4 = 0.20;
  p.q_s_min = 0.1;
  p.q_s_max = 2.5;
  return p;
}

/// Parallelogram (l1 = l3, l2 = l4): f is the identity on (0, π). The
/// linkage is flat, hence singular, at q_s = 0 and q_s = π.
inline FourBarParams knee_parallelogram() {
  FourBarParams p;
  p.l1 = 0.05;
  p.l2 = 0.20;
  p.l3 = 0.05;
  p.l4 = 0.20;
  p.q_s_min = 0.1;
  p.q_s_max = 3.0;
  return p;
}

/// Knee with l2² = |b(0)|² + l1², so MAB is a right angle at q_s = 0.
inline FourBarParams knee_right_angle() {
  FourBarParams p = knee();
  p.l2 = std::sqrt((p.l3 + p.l4) * (p.l3 + p.l4) + p.l1 * p.l1);
  return p;
}

/// Mirror-symmetric ankle about the x = 0 plane; both motors turn about +x̂.
inline AnkleParams ankle() {
  AnkleParams p;
  p.joint.center = Vec3{0.0, 0.0, 0.0};
  p.joint.first_axis = Vec3{1.0, 0.0, 0.0};
  p.joint.second_axis = Vec3{0.0, 1.0, 0.0};
  p.sides[0].attachment = Vec3{0.04, 0.03, -0.06};
  p.sides[0].motor_origin = Vec3{0.04, 0.09, 0.02};
  p.sides[1].attachment = Vec3{-0.04, 0.03, -0.06};
  p.sides[1].motor_origin = Vec3{-0.04, 0.09, 0.02};
  for (auto& s : p.sides) {
    s.motor_axis = Vec3{1.0, 0.0, 0.0};
    s.crank = 0.03;
    s.rod = 0.11;
  }
  p.q_s_min = Vec2{-1.0, -1.0};
  p.q_s_max = Vec2{0.5, 1.0};
  return p;
}

/// Ankle whose geometry lies in the pitch plane: each side is its own
/// projection and reproduces the planar `knee()` lever about pitch.
inline AnkleParams ankle_planar_degenerate() {
  const FourBarParams k = knee();
  AnkleParams p;
  p.joint.center = Vec3{0.0, 0.0, 0.0};
  for (auto& s : p.sides) {
    s.attachment = Vec3{0.0, -k.l3, 0.0};
    s.motor_origin = Vec3{0.0, k.l4, 0.0};
    s.motor_axis = Vec3{1.0, 0.0, 0.0};
    s.crank = k.l1;
    s.rod = k.l2;
  }
  p.q_s_min = Vec2{k.q_s_min, -0.5};
  p.q_s_max = Vec2{k.q_s_max, 0.5};
  return p;
}

/// Knee tracking a 0.5 Hz, 0.5 rad sine about 1.2 rad for 10 s. A light
/// link with a stiff PD: fine at 1 kHz, unstable when held for 10 ms.
inline SimConfig<1> knee_tracking(Scenario scenario) {
  SimConfig<1> c;
  c.scenario = scenario;
  c.plant = PlantModel<1>{Vec<1>{0.002}, Vec<1>{0.01}, Vec<1>{1.0}};
  c.kp = Vec<1>{100.0};
  c.kd = Vec<1>{0.6};
  c.duration = 10.0;
  c.reference.kind = WaveformKind::sine;
  c.reference.offset = Vec<1>{1.2};
  c.reference.amplitude = Vec<1>{0.5};
  c.reference.frequency = 0.5;
  c.q0 = Vec<1>{1.2};
  return c;
}

}  // namespace spt::fixtures

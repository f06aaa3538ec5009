#pragma once

// Forward kinematics of the linkage attachment point B, with analytic first
// and second derivatives with respect to the serial coordinates.

#include <array>
#include <cmath>
#include <cstddef>

#include "spt/linalg.hpp"

namespace spt {

/// Attachment point B expressed in a motor frame, plus its configuration
/// derivatives. For an N-DoF serial joint:
///   b   = B(q_s) in motor coordinates (third axis = motor rotation axis)
///   Bs  = ∂b/∂q_s, one column per serial DoF
///   Bss[j] = ∂Bs/∂q_s_j, so Bss[j](:, i) = ∂²b / ∂q_i ∂q_j
template <std::size_t N>
struct FkResult {
  Vec3 b;
  Mat<3, N> Bs;
  std::array<Mat<3, N>, N> Bss;
};

/// Planar lever: O sits at distance l4 from the motor axis along the motor
/// frame x axis and B rotates about O at radius l3.
inline FkResult<1> fk_planar(double l3, double l4, double q_s) {
  const double c = std::cos(q_s);
  const double s = std::sin(q_s);
  FkResult<1> fk;
  fk.b = Vec3{l4 + l3 * c, l3 * s, 0.0};
  fk.Bs = Mat<3, 1>{-l3 * s, l3 * c, 0.0};
  fk.Bss[0] = Mat<3, 1>{-l3 * c, -l3 * s, 0.0};
  return fk;
}

/// Skew-symmetric cross-product matrix, [a]× v = a × v.
constexpr Mat3 skew(const Vec3& a) {
  return Mat3{0.0, -a[2], a[1], a[2], 0.0, -a[0], -a[1], a[0], 0.0};
}

/// Rotation about a unit axis (Rodrigues).
inline Mat3 axis_rotation(const Vec3& axis, double angle) {
  const Mat3 k = skew(axis);
  return Mat3::identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * (k * k);
}

/// Orthonormal frame of one motor: origin M and a rotation whose columns are
/// the frame axes in world coordinates. Column 2 is the motor rotation axis.
struct MotorFrame {
  Vec3 origin;
  Mat3 axes = Mat3::identity();

  Vec3 to_local(const Vec3& world_point) const { return axes.transpose() * (world_point - origin); }
  Vec3 to_local_direction(const Vec3& world_dir) const { return axes.transpose() * world_dir; }
};

/// Builds a motor frame whose x axis points from M toward `toward` projected
/// onto the motor plane, matching the planar convention that O lies on +x.
inline MotorFrame make_motor_frame(const Vec3& origin, const Vec3& motor_axis, const Vec3& toward) {
  const Vec3 z = normalized(motor_axis);
  const Vec3 d = toward - origin;
  const Vec3 x = normalized(d - dot(d, z) * z);
  const Vec3 y = cross(z, x);
  MotorFrame f;
  f.origin = origin;
  f.axes.set_col(0, x);
  f.axes.set_col(1, y);
  f.axes.set_col(2, z);
  return f;
}

/// Two-axis universal joint: foot rotation R(q) = R_{e1}(q1) · R_{e2}(q2)
/// about a fixed centre O.
struct UniversalJoint {
  Vec3 center;
  Vec3 first_axis{1.0, 0.0, 0.0};
  Vec3 second_axis{0.0, 1.0, 0.0};

  Mat3 rotation(const Vec2& q) const {
    return axis_rotation(first_axis, q[0]) * axis_rotation(second_axis, q[1]);
  }
};

/// B fixed in the foot at p (foot frame, relative to O), observed from `motor`.
inline FkResult<2> fk_universal(const UniversalJoint& joint, const Vec3& p, const MotorFrame& motor,
                                const Vec2& q) {
  const Mat3 r1 = axis_rotation(joint.first_axis, q[0]);
  const Vec3 v = r1 * (axis_rotation(joint.second_axis, q[1]) * p);  // B − O, world
  const Vec3& w1 = joint.first_axis;
  const Vec3 w2 = r1 * joint.second_axis;

  // First derivatives of v: ω_i × v.
  const Vec3 d1 = cross(w1, v);
  const Vec3 d2 = cross(w2, v);
  // Second derivatives; the mixed term is symmetric by the Jacobi identity.
  const Vec3 d11 = cross(w1, d1);
  const Vec3 d12 = cross(w1, d2);
  const Vec3 d22 = cross(w2, d2);

  FkResult<2> fk;
  fk.b = motor.to_local(joint.center + v);
  fk.Bs.set_col(0, motor.to_local_direction(d1));
  fk.Bs.set_col(1, motor.to_local_direction(d2));
  fk.Bss[0].set_col(0, motor.to_local_direction(d11));
  fk.Bss[0].set_col(1, motor.to_local_direction(d12));
  fk.Bss[1].set_col(0, motor.to_local_direction(d12));
  fk.Bss[1].set_col(1, motor.to_local_direction(d22));
  return fk;
}

}  // namespace spt

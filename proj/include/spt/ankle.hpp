#pragma once

// Two-motor ankle built from two intricate four-bars. The foot hangs from a
// universal joint (pitch then roll); each side's rod end B is fixed in the
// foot, and each motor crank turns in the plane through M normal to its axis.
// Projecting B onto that plane gives a planar four-bar with rod length
// l̄2 = sqrt(l2² − z_B²).

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include "spt/errors.hpp"
#include "spt/mechanism.hpp"

namespace spt {

struct AnkleSide {
  Vec3 attachment;    // B in the foot frame, relative to the joint centre
  Vec3 motor_origin;  // M in world
  Vec3 motor_axis{1.0, 0.0, 0.0};
  double crank = 0.0;  // l1 = |AM|
  double rod = 0.0;    // l2 = |AB|
  double q_m_lo = -std::numeric_limits<double>::infinity();
  double q_m_hi = std::numeric_limits<double>::infinity();
};

struct AnkleParams {
  UniversalJoint joint;
  std::array<AnkleSide, 2> sides;  // [alpha, beta]
  Vec2 q_s_min;
  Vec2 q_s_max;

  const AnkleSide& side(Side s) const { return sides[static_cast<std::size_t>(s)]; }
};

inline MotorFrame motor_frame(const AnkleParams& p, Side s) {
  const AnkleSide& sd = p.side(s);
  return make_motor_frame(sd.motor_origin, sd.motor_axis, p.joint.center);
}

/// B of one side in that side's motor frame, with analytic derivatives.
inline FkResult<2> fk_ankle(const AnkleParams& p, Side s, const Vec2& q_s) {
  return fk_universal(p.joint, p.side(s).attachment, motor_frame(p, s), q_s);
}

inline void validate(const AnkleParams& p) {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  for (const Vec3* axis : {&p.joint.first_axis, &p.joint.second_axis})
    if (!(norm(*axis) > 0.0)) throw TransmissionError(ErrorKind::config, "joint axes must be non-zero");
  if (std::abs(dot(normalized(p.joint.first_axis), normalized(p.joint.second_axis))) > 1e-9)
    throw TransmissionError(ErrorKind::config, "universal joint axes must be orthogonal");
  for (std::size_t i = 0; i < 2; ++i) {
    const AnkleSide& sd = p.sides[i];
    if (!positive(sd.crank) || !positive(sd.rod))
      throw TransmissionError(ErrorKind::config, "crank and rod lengths must be positive", side_of(i));
    if (!(norm(sd.motor_axis) > 0.0))
      throw TransmissionError(ErrorKind::config, "motor axis must be non-zero", side_of(i));
    // the motor frame's x axis is O − M projected into the motor plane
    const Vec3 d = p.joint.center - sd.motor_origin;
    const Vec3 z = normalized(sd.motor_axis);
    if (!(norm(d - dot(d, z) * z) > 1e-9 * std::max(1.0, norm(d))))
      throw TransmissionError(ErrorKind::config, "joint centre must not lie on the motor axis", side_of(i));
    if (!(sd.q_m_lo <= sd.q_m_hi))
      throw TransmissionError(ErrorKind::config, "motor bounds must satisfy lo <= hi", side_of(i));
  }
  for (std::size_t k = 0; k < 2; ++k)
    if (!(p.q_s_min[k] < p.q_s_max[k]))
      throw TransmissionError(ErrorKind::config, "serial box must satisfy min < max");

  // Sample the serial box for closure and rod-length sanity.
  constexpr int kProbe = 41;
  std::array<bool, 2> closes{false, false};
  for (int a = 0; a < kProbe; ++a)
    for (int c = 0; c < kProbe; ++c) {
      const Vec2 q{p.q_s_min[0] + (p.q_s_max[0] - p.q_s_min[0]) * a / (kProbe - 1),
                   p.q_s_min[1] + (p.q_s_max[1] - p.q_s_min[1]) * c / (kProbe - 1)};
      for (std::size_t i = 0; i < 2; ++i) {
        const Vec3 b = fk_ankle(p, side_of(i), q).b;
        if (!(p.sides[i].rod * p.sides[i].rod > b[2] * b[2]))
          throw TransmissionError(ErrorKind::config, "rod shorter than out-of-plane offset in serial box",
                                  side_of(i));
        if (solve_closure(b, p.sides[i].crank, p.sides[i].rod).feasible) closes[i] = true;
      }
    }
  for (std::size_t i = 0; i < 2; ++i)
    if (!closes[i]) throw TransmissionError(ErrorKind::config, "side never closes in serial box", side_of(i));
}

class Ankle {
 public:
  static constexpr std::size_t dofs = 2;

  explicit Ankle(const AnkleParams& p) : p_(p), frames_{motor_frame(p, Side::alpha), motor_frame(p, Side::beta)} {
    validate(p_);
  }

  const AnkleParams& params() const { return p_; }

  std::array<SideKinematics<2>, 2> sides(const Vec2& q) const {
    std::array<SideKinematics<2>, 2> out;
    for (std::size_t i = 0; i < 2; ++i) {
      const AnkleSide& sd = p_.sides[i];
      out[i] = SideKinematics<2>{fk_universal(p_.joint, sd.attachment, frames_[i], q), sd.crank, sd.rod};
    }
    return out;
  }

  Vec2 serial_min() const { return p_.q_s_min; }
  Vec2 serial_max() const { return p_.q_s_max; }
  Vec2 motor_lo() const { return Vec2{p_.sides[0].q_m_lo, p_.sides[1].q_m_lo}; }
  Vec2 motor_hi() const { return Vec2{p_.sides[0].q_m_hi, p_.sides[1].q_m_hi}; }

 private:
  AnkleParams p_;
  std::array<MotorFrame, 2> frames_;
};

struct AnkleEval {
  std::array<FourBarEval, 2> sides;  // projected closure per side, z_B included
  Vec2 q_m;
};

/// q_m = (f_α(q_s), f_β(q_s)); errors carry the offending side.
inline AnkleEval eval_f2(const AnkleParams& p, const Vec2& q_s) {
  AnkleEval out;
  for (std::size_t i = 0; i < 2; ++i) {
    const AnkleSide& sd = p.sides[i];
    out.sides[i] = solve_closure(fk_ankle(p, side_of(i), q_s).b, sd.crank, sd.rod);
    require_feasible(out.sides[i], side_of(i));
    out.q_m[i] = out.sides[i].q_m;
  }
  return out;
}

}  // namespace spt

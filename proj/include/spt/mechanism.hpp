#pragma once

// Common surface of closed-chain transmissions. A mechanism with N serial
// DoF has N motors; each motor closes one (projected) four-bar whose
// attachment point B is given by the serial forward kinematics.

#include <array>
#include <concepts>
#include <cstddef>

#include "spt/closure.hpp"
#include "spt/kinematics.hpp"
#include "spt/linalg.hpp"

namespace spt {

template <std::size_t N>
struct SideKinematics {
  FkResult<N> fk;
  double crank = 0.0;  // l1
  double rod = 0.0;    // l2
};

template <class M>
concept Transmission = requires(const M& m, const Vec<M::dofs>& q) {
  { M::dofs } -> std::convertible_to<std::size_t>;
  { m.sides(q) } -> std::same_as<std::array<SideKinematics<M::dofs>, M::dofs>>;
  { m.serial_min() } -> std::same_as<Vec<M::dofs>>;
  { m.serial_max() } -> std::same_as<Vec<M::dofs>>;
  { m.motor_lo() } -> std::same_as<Vec<M::dofs>>;
  { m.motor_hi() } -> std::same_as<Vec<M::dofs>>;
};

constexpr Side side_of(std::size_t i) { return i == 0 ? Side::alpha : Side::beta; }

/// Kinematics and closure of every side at one serial configuration.
template <std::size_t N>
struct TransmissionEval {
  std::array<SideKinematics<N>, N> sides;
  std::array<FourBarEval, N> closures;
  Vec<N> q_m;

  bool feasible() const {
    for (const auto& c : closures)
      if (!c.feasible) return false;
    return true;
  }

  double singular_margin() const {
    double m = closures[0].singular_margin;
    for (const auto& c : closures) m = std::min(m, c.singular_margin);
    return m;
  }
};

/// Non-throwing evaluation; check `feasible()` before using angles.
template <Transmission M>
TransmissionEval<M::dofs> probe(const M& mech, const Vec<M::dofs>& q_s) {
  TransmissionEval<M::dofs> ev;
  ev.sides = mech.sides(q_s);
  for (std::size_t i = 0; i < M::dofs; ++i) {
    ev.closures[i] = solve_closure(ev.sides[i].fk.b, ev.sides[i].crank, ev.sides[i].rod);
    ev.q_m[i] = ev.closures[i].q_m;
  }
  return ev;
}

/// q_m = f(q_s); throws Infeasible / RodTooShort tagged with the side.
template <Transmission M>
TransmissionEval<M::dofs> evaluate(const M& mech, const Vec<M::dofs>& q_s) {
  auto ev = probe(mech, q_s);
  for (std::size_t i = 0; i < M::dofs; ++i) require_feasible(ev.closures[i], side_of(i));
  return ev;
}

template <Transmission M>
Vec<M::dofs> transmission_map(const M& mech, const Vec<M::dofs>& q_s) {
  return evaluate(mech, q_s).q_m;
}

enum class Verdict { feasible, motor_limit_violated, closure_infeasible };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::feasible: return "feasible";
    case Verdict::motor_limit_violated: return "motor_limit_violated";
    case Verdict::closure_infeasible: return "closure_infeasible";
  }
  return "unknown";
}

/// Closure first, then q_m_lo ≤ f(q_s) ≤ q_m_hi per motor.
template <Transmission M>
Verdict classify(const M& mech, const TransmissionEval<M::dofs>& ev) {
  if (!ev.feasible()) return Verdict::closure_infeasible;
  const auto lo = mech.motor_lo();
  const auto hi = mech.motor_hi();
  for (std::size_t i = 0; i < M::dofs; ++i)
    if (ev.q_m[i] < lo[i] || ev.q_m[i] > hi[i]) return Verdict::motor_limit_violated;
  return Verdict::feasible;
}

template <Transmission M>
Vec<M::dofs> serial_midpoint(const M& mech) {
  return 0.5 * (mech.serial_min() + mech.serial_max());
}

}  // namespace spt

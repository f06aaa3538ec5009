#pragma once

// Transfer of a serial-space PD law through the transmission.
//
// A serial policy asks for τ_s* = K_Ps (q_s* − q_s) − K_Ds q̇_s, i.e. the motor
// torque τ_m* = J_A⁻ᵀ τ_s*. Seen as a function of the motor state
// (q_s = f⁻¹(q_m), q̇_s = J_A⁻¹ q̇_m), its tangent plane at the current tick is
//   K_Pm = −∂τ_m*/∂q_m = A_Pm + B_Pm + C_Pm,   K_Dm = −∂τ_m*/∂q̇_m = C_Dm
// with, writing H_i for the Hessian of f_i and D = Σ_i τ_m*_i H_i,
//   A_Pm = J⁻ᵀ D J⁻¹
//   B_Pm = J⁻ᵀ K_Ps J⁻¹
//   C_Pm = −J⁻ᵀ K_Ds J⁻¹ E J⁻¹,  E = ∂(J_A u)/∂q_s at u = J⁻¹ q̇_m
//   C_Dm = J⁻ᵀ K_Ds J⁻¹
// q_m* is chosen so that the motor PD reproduces τ_m* at the current state.

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>

#include "spt/jacobian.hpp"
#include "spt/torque_derivatives.hpp"

namespace spt {

template <std::size_t N>
struct SerialImpedance {
  Vec<N> kp;     // N·m/rad, diagonal
  Vec<N> kd;     // N·m·s/rad, diagonal
  Vec<N> q_ref;  // q_s*

  Vec<N> torque(const Vec<N>& q_s, const Vec<N>& qd_s) const {
    Vec<N> t;
    for (std::size_t i = 0; i < N; ++i) t[i] = kp[i] * (q_ref[i] - q_s[i]) - kd[i] * qd_s[i];
    return t;
  }
};

/// Serial and motor states linked by the transmission.
template <std::size_t N>
struct TransmissionState {
  Vec<N> q_s, qd_s;
  Vec<N> q_m, qd_m;
};

template <Transmission M>
TransmissionState<M::dofs> make_state(const M& mech, const Vec<M::dofs>& q_s, const Vec<M::dofs>& qd_s) {
  const auto ev = evaluate(mech, q_s);
  const auto ja = stack_jacobian(ev);
  return TransmissionState<M::dofs>{q_s, qd_s, ev.q_m, map_velocity(ja, qd_s)};
}

template <std::size_t N>
struct MotorImpedance {
  Mat<N, N> K_Pm, K_Dm;
  Vec<N> q_m_ref;
  Vec<N> tau_m_ref;
  Mat<N, N> A_Pm, B_Pm, C_Pm, C_Dm;
  // Set when K_Pm cannot be inverted for q_m*: callers should apply
  // tau_m_ref directly for this tick.
  bool feedforward_fallback = false;
  std::string warning;
};

/// K_Pm is not inverted when σ_min(K_Pm) falls below this fraction of the
/// largest gain term.
inline constexpr double kStiffnessRcond = 1e-12;

template <std::size_t N>
bool well_conditioned(const Mat<N, N>& K, double scale) {
  return singular_values(K).back() > kStiffnessRcond * scale;
}

template <Transmission M>
MotorImpedance<M::dofs> transfer_gains(const M& mech, const SerialImpedance<M::dofs>& serial,
                                       const TransmissionState<M::dofs>& state) {
  constexpr std::size_t N = M::dofs;
  using MatN = Mat<N, N>;
  const auto ev = evaluate(mech, state.q_s);
  const auto ja = stack_jacobian(ev);
  require_invertible(ja);

  const MatN Jinv = inverse(ja.J);
  const MatN JinvT = Jinv.transpose();
  const MatN Kps = MatN::diagonal(serial.kp);
  const MatN Kds = MatN::diagonal(serial.kd);

  MotorImpedance<N> out;
  out.tau_m_ref = JinvT * serial.torque(state.q_s, state.qd_s);

  const auto H = side_hessians(ev);
  MatN D;
  for (std::size_t i = 0; i < N; ++i) D += H[i] * out.tau_m_ref[i];
  const Vec<N> u = Jinv * state.qd_m;
  MatN E;
  for (std::size_t i = 0; i < N; ++i) E.set_row(i, (H[i] * u).transpose());

  out.A_Pm = JinvT * D * Jinv;
  out.B_Pm = JinvT * Kps * Jinv;
  out.C_Dm = JinvT * Kds * Jinv;
  out.C_Pm = -(out.C_Dm * E * Jinv);
  out.K_Pm = out.A_Pm + out.B_Pm + out.C_Pm;
  out.K_Dm = out.C_Dm;

  const double scale = std::max({max_abs(out.A_Pm), max_abs(out.B_Pm), max_abs(out.C_Pm), max_abs(out.C_Dm)});
  if (well_conditioned(out.K_Pm, scale)) {
    out.q_m_ref = inverse(out.K_Pm) * (out.tau_m_ref + out.K_Dm * state.qd_m) + state.q_m;
  } else {
    out.feedforward_fallback = true;
    out.q_m_ref = state.q_m;
    out.warning = "K_Pm not invertible; falling back to feedforward torque for this tick";
  }
  return out;
}

/// τ_m = K_Pm (q_m* − q_m) − K_Dm q̇_m
template <std::size_t N>
Vec<N> motor_pd(const MotorImpedance<N>& imp, const Vec<N>& q_m, const Vec<N>& qd_m) {
  if (imp.feedforward_fallback) return imp.tau_m_ref;
  return imp.K_Pm * (imp.q_m_ref - q_m) - imp.K_Dm * qd_m;
}

}  // namespace spt

#pragma once

// Configuration derivative of the serial torque produced by fixed motor
// torques. For one motor with torque τ:
//   τ_s = B_sᵀ λ,  λ = Kᵀ b τ  (force of the motor on B)
//   dτ_s/dq_s = B_ssᵀ λ + B_sᵀ (dλ/db) B_s
//   dλ/db = τ [ (∂Kᵀ/∂l̄ b) dl̄/db + (∂Kᵀ/∂r b · dr/dq_m2 + ∂Kᵀ/∂r̂ b · dr̂/dq_m2) dq_m2/db + Kᵀ ]
// Contributions are summed over motors.

#include <array>
#include <cstddef>

#include "spt/jacobian.hpp"

namespace spt {

/// Non-zero partials of μ, ν, ξ, plus the chain-rule factors that carry them
/// to b.
struct KDerivative {
  double mu_l = 0.0, mu_r = 0.0, mu_rhat = 0.0;
  double nu_l = 0.0;
  double xi_l = 0.0, xi_rhat = 0.0;
  Vec3 dl_db;     // (x̄/l̄, ȳ/l̄, 0)
  Vec3 dqm2_db;   // (μ x, μ y, ξ z)
  double dr_dqm2 = 0.0;     // −r̂
  double drhat_dqm2 = 0.0;  // r

  Mat3 dK_dl() const { return Mat3{mu_l, nu_l, 0.0, -nu_l, mu_l, 0.0, 0.0, 0.0, xi_l}; }
  Mat3 dK_dr() const { return Mat3{mu_r, 0.0, 0.0, 0.0, mu_r, 0.0, 0.0, 0.0, 0.0}; }
  Mat3 dK_drhat() const { return Mat3{mu_rhat, 0.0, 0.0, 0.0, mu_rhat, 0.0, 0.0, 0.0, xi_rhat}; }
};

inline KDerivative k_derivative(const Vec3& b, const FourBarEval& e, double l1) {
  const double l = e.l, r = e.r, rh = e.r_hat;
  const KMatrix k = k_matrix(e, l1);
  KDerivative d;
  d.mu_l = (l - 2.0 * r * l1) / (rh * l * l * l * l1);
  d.mu_r = 1.0 / (rh * l * l);
  d.mu_rhat = (l - r * l1) / (rh * rh * l * l * l1);
  d.nu_l = -2.0 / (l * l * l);
  d.xi_l = 1.0 / (rh * l * l * l1);
  d.xi_rhat = 1.0 / (rh * rh * l * l1);
  d.dl_db = Vec3{b[0] / l, b[1] / l, 0.0};
  d.dqm2_db = Vec3{k.mu * b[0], k.mu * b[1], k.xi * b[2]};
  d.dr_dqm2 = -rh;
  d.drhat_dqm2 = r;
  return d;
}

/// Intermediates of one motor's contribution, kept for reporting.
template <std::size_t N>
struct SideTorqueRecord {
  Vec3 b;
  KMatrix K;
  KDerivative dK;
  Vec3 lambda;
  Mat3 dlambda_db;
  Mat<N, N> contribution;
};

/// dτ_s[τ_i]/dq_s for one motor carrying torque `tau`.
template <std::size_t N>
SideTorqueRecord<N> side_torque_derivative(const SideKinematics<N>& side, const FourBarEval& closure,
                                           double tau) {
  SideTorqueRecord<N> rec;
  const Vec3& b = side.fk.b;
  rec.b = b;
  rec.K = k_matrix(closure, side.crank);
  rec.dK = k_derivative(b, closure, side.crank);
  const Mat3 Kt = rec.K.matrix().transpose();
  rec.lambda = Kt * b * tau;

  const KDerivative& d = rec.dK;
  const Vec3 via_l = d.dK_dl().transpose() * b;
  const Vec3 via_qm2 = d.dK_dr().transpose() * b * d.dr_dqm2 + d.dK_drhat().transpose() * b * d.drhat_dqm2;
  rec.dlambda_db = (outer(via_l, d.dl_db) + outer(via_qm2, d.dqm2_db) + Kt) * tau;

  const Mat<3, N>& Bs = side.fk.Bs;
  Mat<N, N> out = Bs.transpose() * rec.dlambda_db * Bs;
  // B_ssᵀ λ, contracted per serial DoF.
  for (std::size_t j = 0; j < N; ++j) {
    const Mat<1, N> lam_Bssj = rec.lambda.transpose() * side.fk.Bss[j];
    for (std::size_t i = 0; i < N; ++i) out(i, j) += lam_Bssj[i];
  }
  rec.contribution = out;
  return rec;
}

template <std::size_t N>
struct TorqueDifferential {
  Mat<N, N> dtau_dqs;    // N·m/rad
  Mat<N, N> dtau_du;     // J_Aᵀ
  Mat<N, N> dtau_dqdot;  // identically zero
  std::array<SideTorqueRecord<N>, N> per_motor;
};

template <std::size_t N>
TorqueDifferential<N> torque_differential(const TransmissionEval<N>& ev, const ActuationJacobian<N>& ja,
                                          const Vec<N>& tau_m) {
  TorqueDifferential<N> td;
  for (std::size_t i = 0; i < N; ++i) {
    td.per_motor[i] = side_torque_derivative(ev.sides[i], ev.closures[i], tau_m[i]);
    td.dtau_dqs += td.per_motor[i].contribution;
  }
  td.dtau_du = ja.J.transpose();
  return td;
}

template <Transmission M>
TorqueDifferential<M::dofs> dtau_s(const M& mech, const Vec<M::dofs>& q_s, const Vec<M::dofs>& tau_m) {
  const auto ev = evaluate(mech, q_s);
  return torque_differential(ev, stack_jacobian(ev), tau_m);
}

template <Transmission M>
Mat<M::dofs, M::dofs> dtau_s_du(const M& mech, const Vec<M::dofs>& q_s) {
  return actuation_jacobian(mech, q_s).J.transpose();
}

/// Hessian of each f_i, i.e. the contribution of a unit torque on motor i.
template <std::size_t N>
std::array<Mat<N, N>, N> side_hessians(const TransmissionEval<N>& ev) {
  std::array<Mat<N, N>, N> h;
  for (std::size_t i = 0; i < N; ++i) {
    require_regular(ev.closures[i], side_of(i));
    h[i] = side_torque_derivative(ev.sides[i], ev.closures[i], 1.0).contribution;
  }
  return h;
}

}  // namespace spt

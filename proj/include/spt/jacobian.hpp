#pragma once

// Actuation Jacobian J_A = ∂f/∂q_s through the condensed K matrix:
//   dq_m/db = bᵀ K,   K = [[μ, ν, 0], [−ν, μ, 0], [0, 0, ξ]]
//   J_A row = bᵀ K B_s

#include <array>
#include <cstddef>

#include "spt/ankle.hpp"
#include "spt/closure.hpp"
#include "spt/errors.hpp"
#include "spt/fourbar.hpp"
#include "spt/mechanism.hpp"

namespace spt {

struct KMatrix {
  double mu = 0.0;  // (r l1 − l̄) / (r̂ l̄² l1)
  double nu = 0.0;  // 1 / l̄²
  double xi = 0.0;  // −1 / (r̂ l̄ l1)

  Mat3 matrix() const { return Mat3{mu, nu, 0.0, -nu, mu, 0.0, 0.0, 0.0, xi}; }
};

inline void require_regular(const FourBarEval& e, Side side) {
  if (!(e.r_hat > kSingularRHat))
    throw TransmissionError(ErrorKind::singular, "crank and coupler collinear (r_hat = " +
                                                     std::to_string(e.r_hat) + ")",
                            side);
}

inline KMatrix k_matrix(const FourBarEval& e, double l1) {
  const double l = e.l;
  KMatrix k;
  k.mu = (e.r * l1 - l) / (e.r_hat * l * l * l1);
  k.nu = 1.0 / (l * l);
  k.xi = -1.0 / (e.r_hat * l * l1);
  return k;
}

/// One motor's row, dq_m_i/dq_s = bᵀ K B_s ∈ R^{1×N}.
template <std::size_t N>
Mat<1, N> side_jacobian(const SideKinematics<N>& side, const FourBarEval& closure) {
  const Mat3 K = k_matrix(closure, side.crank).matrix();
  return side.fk.b.transpose() * K * side.fk.Bs;
}

/// Below this σ_min / max(1, σ_max), J_A is treated as not invertible.
inline constexpr double kJacobianRcond = 1e-12;

template <std::size_t N>
struct ActuationJacobian {
  Mat<N, N> J;
  double det = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;

  bool invertible() const { return sigma_min > kJacobianRcond * std::max(1.0, sigma_max); }

  static ActuationJacobian from(const Mat<N, N>& J) {
    ActuationJacobian a;
    a.J = J;
    a.det = spt::det(J);
    const auto sv = singular_values(J);
    a.sigma_max = sv.front();
    a.sigma_min = sv.back();
    return a;
  }
};

template <std::size_t N>
ActuationJacobian<N> stack_jacobian(const TransmissionEval<N>& ev) {
  Mat<N, N> J;
  for (std::size_t i = 0; i < N; ++i) {
    require_regular(ev.closures[i], side_of(i));
    J.set_row(i, side_jacobian(ev.sides[i], ev.closures[i]));
  }
  return ActuationJacobian<N>::from(J);
}

template <Transmission M>
ActuationJacobian<M::dofs> actuation_jacobian(const M& mech, const Vec<M::dofs>& q_s) {
  return stack_jacobian(evaluate(mech, q_s));
}

inline ActuationJacobian<1> jacobian_planar(const FourBarParams& p, double q_s) {
  return actuation_jacobian(FourBar(p), Vec<1>{q_s});
}

inline ActuationJacobian<2> jacobian_ankle(const AnkleParams& p, const Vec2& q_s) {
  return actuation_jacobian(Ankle(p), q_s);
}

/// q̇_m = J_A q̇_s
template <std::size_t N>
Vec<N> map_velocity(const ActuationJacobian<N>& ja, const Vec<N>& qd_s) {
  return ja.J * qd_s;
}

/// τ_s = J_Aᵀ τ_m
template <std::size_t N>
Vec<N> map_torque(const ActuationJacobian<N>& ja, const Vec<N>& tau_m) {
  return ja.J.transpose() * tau_m;
}

template <std::size_t N>
void require_invertible(const ActuationJacobian<N>& ja) {
  if (!ja.invertible())
    throw TransmissionError(ErrorKind::singular,
                            "actuation Jacobian not invertible (sigma_min = " + std::to_string(ja.sigma_min) + ")");
}

/// τ_m = J_A⁻ᵀ τ_s
template <std::size_t N>
Vec<N> map_torque_inv(const ActuationJacobian<N>& ja, const Vec<N>& tau_s) {
  require_invertible(ja);
  return inverse(ja.J).transpose() * tau_s;
}

/// q̇_s = J_A⁻¹ q̇_m
template <std::size_t N>
Vec<N> map_velocity_inv(const ActuationJacobian<N>& ja, const Vec<N>& qd_m) {
  require_invertible(ja);
  return inverse(ja.J) * qd_m;
}

}  // namespace spt

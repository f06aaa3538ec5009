#pragma once

// Inverse transmission map q_s = f⁻¹(q_m), as the minimiser of
// L(q̂) = ‖f(q̂) − q_m‖² with ∇L = 2 J_Aᵀ (f(q̂) − q_m).

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spt/errors.hpp"
#include "spt/jacobian.hpp"
#include "spt/mechanism.hpp"

namespace spt {

struct EstimatorOptions {
  double tolerance = 1e-10;   // on ‖f(q̂) − q_m‖, rad
  int max_iterations = 50;
  double stall_residual = 1e-4;  // residual above this when stuck → out of workspace
  int max_halvings = 8;
  int max_damping_raises = 12;
  std::vector<double>* residual_history = nullptr;  // ‖f(q̂) − q_m‖ per accepted iterate
};

template <std::size_t N>
struct EstimatorState {
  Vec<N> q_hat;
  double residual = 0.0;
  int iterations = 0;
};

template <Transmission M>
EstimatorState<M::dofs> cold_start(const M& mech) {
  return EstimatorState<M::dofs>{serial_midpoint(mech), 0.0, 0};
}

namespace detail {

template <Transmission M>
std::optional<Vec<M::dofs>> try_residual(const M& mech, const Vec<M::dofs>& q, const Vec<M::dofs>& q_m) {
  const auto ev = probe(mech, q);
  if (!ev.feasible()) return std::nullopt;
  return ev.q_m - q_m;
}

template <std::size_t N>
Vec<N> solve_spd(const Mat<N, N>& A, const Vec<N>& rhs) {
  return inverse(A) * rhs;
}

}  // namespace detail

/// Damped Gauss-Newton from `warm`. Each accepted step strictly lowers L
/// (backtracking by halves); Levenberg damping starts at 0 and rises ×10
/// whenever a full backtrack fails. Throws NoConvergence or OutOfWorkspace.
template <Transmission M>
EstimatorState<M::dofs> estimate(const M& mech, const Vec<M::dofs>& q_m, const EstimatorState<M::dofs>& warm,
                                 const EstimatorOptions& opt = {}) {
  constexpr std::size_t N = M::dofs;
  EstimatorState<N> st;
  st.q_hat = warm.q_hat;
  auto res = detail::try_residual(mech, st.q_hat, q_m);
  if (!res) {
    st.q_hat = serial_midpoint(mech);
    res = detail::try_residual(mech, st.q_hat, q_m);
    if (!res) throw TransmissionError(ErrorKind::out_of_workspace, "no feasible starting configuration");
  }
  Vec<N> r = *res;
  double cost = dot(r, r);
  double damping = 0.0;
  if (opt.residual_history) opt.residual_history->push_back(std::sqrt(cost));

  const auto fail = [&](const char* why) {
    st.residual = std::sqrt(cost);
    if (st.residual > opt.stall_residual)
      throw TransmissionError(ErrorKind::out_of_workspace,
                              std::string(why) + ", residual " + std::to_string(st.residual));
    throw TransmissionError(ErrorKind::no_convergence, std::string(why) + ", residual " + std::to_string(st.residual));
  };

  while (std::sqrt(cost) > opt.tolerance) {
    if (st.iterations >= opt.max_iterations) fail("iteration limit reached");

    const auto ev = evaluate(mech, st.q_hat);
    Mat<N, N> J;
    try {
      J = stack_jacobian(ev).J;
    } catch (const TransmissionError&) {
      fail("singular configuration");
    }
    const Mat<N, N> JtJ = J.transpose() * J;
    const Vec<N> g = J.transpose() * r;
    double scale = 0.0;
    for (std::size_t i = 0; i < N; ++i) scale += JtJ(i, i);
    scale = std::max(scale / static_cast<double>(N), 1e-12);

    bool accepted = false;
    for (int raise = 0; raise <= opt.max_damping_raises && !accepted; ++raise) {
      const Mat<N, N> A = JtJ + Mat<N, N>::identity() * damping;
      if (std::abs(det(A)) > 0.0) {
        const Vec<N> step = detail::solve_spd(A, g);
        double t = 1.0;
        for (int h = 0; h <= opt.max_halvings; ++h, t *= 0.5) {
          const Vec<N> trial = st.q_hat - step * t;
          const auto tr = detail::try_residual(mech, trial, q_m);
          if (!tr) continue;
          const double c = dot(*tr, *tr);
          if (c < cost) {
            st.q_hat = trial;
            r = *tr;
            cost = c;
            accepted = true;
            break;
          }
        }
      }
      if (!accepted) damping = damping == 0.0 ? 1e-6 * scale : damping * 10.0;
    }
    if (!accepted) fail("no descent step");
    ++st.iterations;
    if (opt.residual_history) opt.residual_history->push_back(std::sqrt(cost));
    damping = damping * 0.1 < 1e-12 * scale ? 0.0 : damping * 0.1;
  }
  st.residual = std::sqrt(cost);
  return st;
}

/// q̇_s = J_A⁻¹ q̇_m
template <Transmission M>
Vec<M::dofs> recover_velocity(const M& mech, const Vec<M::dofs>& q_s, const Vec<M::dofs>& qd_m) {
  return map_velocity_inv(actuation_jacobian(mech, q_s), qd_m);
}

}  // namespace spt

#pragma once

// Finite-difference verification of the analytic transmission derivatives,
// shared by `spt check` and the test suites.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "spt/estimation.hpp"
#include "spt/impedance.hpp"
#include "spt/jacobian.hpp"
#include "spt/mechanism.hpp"
#include "spt/torque_derivatives.hpp"

namespace spt::verify {

/// Central finite difference of a vector map; column j = ∂g/∂x_j.
template <std::size_t R, std::size_t C, class Fn>
Mat<R, C> central_diff(Fn&& g, const Vec<C>& x, double h) {
  Mat<R, C> out;
  for (std::size_t j = 0; j < C; ++j) {
    Vec<C> xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    out.set_col(j, (g(xp) - g(xm)) * (0.5 / h));
  }
  return out;
}

/// Five-point central stencil, truncation O(h⁴).
template <std::size_t R, std::size_t C, class Fn>
Mat<R, C> central_diff5(Fn&& g, const Vec<C>& x, double h) {
  Mat<R, C> out;
  for (std::size_t j = 0; j < C; ++j) {
    const auto at = [&](double s) {
      Vec<C> y = x;
      y[j] += s * h;
      return g(y);
    };
    out.set_col(j, (at(-2.0) - at(2.0) + (at(1.0) - at(-1.0)) * 8.0) * (1.0 / (12.0 * h)));
  }
  return out;
}

/// Serial → motor torque of a serial PD, as a function of motor state only.
/// f⁻¹ comes from the estimator run to a tight tolerance.
template <Transmission M>
Vec<M::dofs> composite_motor_torque(const M& mech, const SerialImpedance<M::dofs>& serial,
                                    const Vec<M::dofs>& q_m, const Vec<M::dofs>& qd_m,
                                    const Vec<M::dofs>& warm_q_s) {
  EstimatorOptions tight;
  tight.tolerance = 1e-14;
  tight.max_iterations = 100;
  const auto st = estimate(mech, q_m, EstimatorState<M::dofs>{warm_q_s, 0.0, 0}, tight);
  const auto ja = actuation_jacobian(mech, st.q_hat);
  const Vec<M::dofs> qd_s = inverse(ja.J) * qd_m;
  return inverse(ja.J).transpose() * serial.torque(st.q_hat, qd_s);
}

/// Uniform draws from the serial box that close with margin on every side.
template <Transmission M>
std::vector<Vec<M::dofs>> feasible_samples(const M& mech, std::size_t count, std::uint64_t seed,
                                           double min_margin = 0.05) {
  std::mt19937_64 rng(seed);
  const auto lo = mech.serial_min(), hi = mech.serial_max();
  std::vector<Vec<M::dofs>> out;
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 1000 * count + 100000)
      throw TransmissionError(ErrorKind::config, "serial range has too few configurations with closure margin");
    Vec<M::dofs> q;
    for (std::size_t i = 0; i < M::dofs; ++i) q[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
    const auto ev = probe(mech, q);
    if (ev.feasible() && ev.singular_margin() >= min_margin) out.push_back(q);
  }
  return out;
}

struct Tolerances {
  double jacobian = 1e-6;           // relative
  double torque_derivative = 1e-5;  // absolute per unit torque
  double impedance = 1e-5;          // relative
  double round_trip = 1e-8;         // rad
  double velocity = 1e-12;          // relative residual
  double baseline_fraction = 0.95;  // constant-ratio baseline worse on at least this share

  static Tolerances uniform(double tol) {
    Tolerances t;
    t.jacobian = t.torque_derivative = t.impedance = t.round_trip = t.velocity = tol;
    return t;
  }
};

struct CheckResult {
  CheckResult(std::string name_, std::string metric_, double threshold_, bool at_least_ = false)
      : name(std::move(name_)), metric(std::move(metric_)), threshold(threshold_), at_least(at_least_) {}

  std::string name;
  std::string metric;
  double value = 0.0;
  double threshold = 0.0;
  bool at_least = false;  // pass when value >= threshold instead of <=
  std::size_t samples = 0;
  std::string note;

  bool pass() const { return note.empty() && (at_least ? value >= threshold : value <= threshold); }
};

template <Transmission M>
CheckResult check_jacobian(const M& mech, const std::vector<Vec<M::dofs>>& qs, double tol) {
  CheckResult r{"jacobian_fd", "max |J_A - FD| / max |FD|", tol};
  for (const auto& q : qs) {
    const auto J = actuation_jacobian(mech, q).J;
    const auto fd = central_diff<M::dofs, M::dofs>([&](const Vec<M::dofs>& x) { return transmission_map(mech, x); },
                                                   q, 1e-6);
    r.value = std::max(r.value, max_abs(J - fd) / max_abs(fd));
  }
  r.samples = qs.size();
  return r;
}

template <Transmission M>
CheckResult check_torque_derivative(const M& mech, const std::vector<Vec<M::dofs>>& qs, std::uint64_t seed,
                                    double tol) {
  constexpr std::size_t N = M::dofs;
  CheckResult r{"torque_derivative_fd", "max |dtau_s/dq_s - FD| / max |tau_m|", tol};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> torque(-10.0, 10.0);
  for (const auto& q : qs) {
    Vec<N> tau;
    for (std::size_t i = 0; i < N; ++i) tau[i] = torque(rng);
    const auto an = dtau_s(mech, q, tau).dtau_dqs;
    const auto fd = central_diff5<N, N>(
        [&](const Vec<N>& x) { return actuation_jacobian(mech, x).J.transpose() * tau; }, q, 1e-5);
    r.value = std::max(r.value, max_abs(an - fd) / max_abs(tau));
  }
  r.samples = qs.size();
  return r;
}

template <std::size_t N>
struct ImpedanceCase {
  SerialImpedance<N> serial;
  TransmissionState<N> state;
};

/// Random serial PD gains, a reference away from the state, and non-zero
/// velocity at each configuration.
template <Transmission M>
std::vector<ImpedanceCase<M::dofs>> impedance_cases(const M& mech, const std::vector<Vec<M::dofs>>& qs,
                                                    std::uint64_t seed) {
  constexpr std::size_t N = M::dofs;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> kp(10.0, 100.0), kd(0.5, 5.0), dq(-0.3, 0.3), vel(-2.0, 2.0);
  std::vector<ImpedanceCase<N>> out;
  for (const auto& q : qs) {
    ImpedanceCase<N> c;
    Vec<N> qd;
    for (std::size_t i = 0; i < N; ++i) {
      c.serial.kp[i] = kp(rng);
      c.serial.kd[i] = kd(rng);
      c.serial.q_ref[i] = q[i] + dq(rng);
      qd[i] = vel(rng);
    }
    c.state = make_state(mech, q, qd);
    out.push_back(c);
  }
  return out;
}

template <Transmission M>
struct ImpedanceFd {
  Mat<M::dofs, M::dofs> K_Pm, K_Dm;
};

template <Transmission M>
ImpedanceFd<M> impedance_fd(const M& mech, const ImpedanceCase<M::dofs>& c, double h = 1e-5) {
  constexpr std::size_t N = M::dofs;
  const auto kpm = central_diff<N, N>(
      [&](const Vec<N>& qm) { return composite_motor_torque(mech, c.serial, qm, c.state.qd_m, c.state.q_s); },
      c.state.q_m, h);
  const auto kdm = central_diff<N, N>(
      [&](const Vec<N>& qdm) { return composite_motor_torque(mech, c.serial, c.state.q_m, qdm, c.state.q_s); },
      c.state.qd_m, h);
  return {kpm * -1.0, kdm * -1.0};
}

/// K_Pm/K_Dm against FD of the composite map, plus the share of states
/// where the B_Pm-only baseline is strictly worse. The baseline share only
/// counts states where the neglected terms exceed the impedance tolerance;
/// where they vanish (a constant-ratio linkage) there is nothing to compare.
template <Transmission M>
std::vector<CheckResult> check_impedance(const M& mech, const std::vector<Vec<M::dofs>>& qs, std::uint64_t seed,
                                         const Tolerances& tol) {
  CheckResult kp{"impedance_kpm_fd", "max |K_Pm - FD| / max |FD|", tol.impedance};
  CheckResult kd{"impedance_kdm_fd", "max |K_Dm - FD| / max |FD|", tol.impedance};
  CheckResult base{"impedance_baseline", "share of states where B_Pm alone is worse", tol.baseline_fraction, true};
  std::size_t worse = 0, eligible = 0;
  const auto cases = impedance_cases(mech, qs, seed);
  for (const auto& c : cases) {
    try {
      const auto imp = transfer_gains(mech, c.serial, c.state);
      const auto fd = impedance_fd(mech, c);
      kp.value = std::max(kp.value, max_abs(imp.K_Pm - fd.K_Pm) / max_abs(fd.K_Pm));
      kd.value = std::max(kd.value, max_abs(imp.K_Dm - fd.K_Dm) / max_abs(fd.K_Dm));
      if (max_abs(imp.K_Pm - imp.B_Pm) <= tol.impedance * max_abs(imp.K_Pm)) continue;
      ++eligible;
      worse += max_abs(imp.B_Pm - fd.K_Pm) > max_abs(imp.K_Pm - fd.K_Pm);
    } catch (const TransmissionError& e) {
      kp.note = kd.note = base.note = std::string("composite map failed: ") + e.what();
      break;
    }
  }
  kp.samples = kd.samples = cases.size();
  base.samples = eligible;
  base.value = eligible == 0 ? 1.0 : static_cast<double>(worse) / static_cast<double>(eligible);
  return {kp, kd, base};
}

template <Transmission M>
CheckResult check_round_trip(const M& mech, const std::vector<Vec<M::dofs>>& qs, double tol) {
  CheckResult r{"estimation_round_trip", "max |estimate(f(q_s)) - q_s|", tol};
  for (const auto& q : qs) {
    try {
      const auto st = estimate(mech, transmission_map(mech, q), cold_start(mech));
      r.value = std::max(r.value, max_abs(st.q_hat - q));
    } catch (const TransmissionError& e) {
      r.note = std::string("estimator failed: ") + e.what();
      break;
    }
  }
  r.samples = qs.size();
  return r;
}

template <Transmission M>
CheckResult check_velocity(const M& mech, const std::vector<Vec<M::dofs>>& qs, std::uint64_t seed, double tol) {
  constexpr std::size_t N = M::dofs;
  CheckResult r{"velocity_recovery", "max |J_A qd_s - qd_m| / max(1, |qd_m|)", tol};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  for (const auto& q : qs) {
    Vec<N> qd_m;
    for (std::size_t i = 0; i < N; ++i) qd_m[i] = n(rng);
    const Vec<N> qd_s = recover_velocity(mech, q, qd_m);
    r.value = std::max(r.value, max_abs(actuation_jacobian(mech, q).J * qd_s - qd_m) / std::max(1.0, max_abs(qd_m)));
  }
  r.samples = qs.size();
  return r;
}

/// Every derivative check on `samples` feasible configurations.
template <Transmission M>
std::vector<CheckResult> run_checks(const M& mech, std::size_t samples, std::uint64_t seed, const Tolerances& tol) {
  const auto qs = feasible_samples(mech, samples, seed);
  std::vector<CheckResult> out;
  out.push_back(check_jacobian(mech, qs, tol.jacobian));
  out.push_back(check_torque_derivative(mech, qs, seed + 1, tol.torque_derivative));
  for (auto& r : check_impedance(mech, qs, seed + 2, tol)) out.push_back(r);
  out.push_back(check_round_trip(mech, feasible_samples(mech, samples, seed + 3, 1e-3), tol.round_trip));
  out.push_back(check_velocity(mech, qs, seed + 4, tol.velocity));
  return out;
}

}  // namespace spt::verify

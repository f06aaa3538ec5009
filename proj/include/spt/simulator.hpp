#pragma once

// Multi-rate closed-loop simulation of a rigid serial plant driven through
// the transmission. The plant integrates in serial coordinates; motor
// coordinates are always derived from it (no separate motor dynamics).
//
// Per physics step, in order: policy tick (reference), gains tick (estimate
// + transfer or feedforward refresh), motor tick (PD), then one
// semi-implicit Euler step. Every controller output is held between ticks.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "spt/errors.hpp"
#include "spt/estimation.hpp"
#include "spt/impedance.hpp"
#include "spt/jacobian.hpp"
#include "spt/mechanism.hpp"

namespace spt {

enum class Scenario { serial_pd, transferred_gains, feedforward_only };

inline const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::serial_pd: return "serial_pd";
    case Scenario::transferred_gains: return "transferred_gains";
    case Scenario::feedforward_only: return "feedforward_only";
  }
  return "?";
}

inline std::optional<Scenario> parse_scenario(const std::string& s) {
  for (Scenario v : {Scenario::serial_pd, Scenario::transferred_gains, Scenario::feedforward_only})
    if (s == to_string(v)) return v;
  return std::nullopt;
}

enum class WaveformKind { constant, sine, chirp, step };

inline const char* to_string(WaveformKind k) {
  switch (k) {
    case WaveformKind::constant: return "constant";
    case WaveformKind::sine: return "sine";
    case WaveformKind::chirp: return "chirp";
    case WaveformKind::step: return "step";
  }
  return "?";
}

inline std::optional<WaveformKind> parse_waveform(const std::string& s) {
  for (WaveformKind v : {WaveformKind::constant, WaveformKind::sine, WaveformKind::chirp, WaveformKind::step})
    if (s == to_string(v)) return v;
  return std::nullopt;
}

/// Deterministic serial reference q_s*(t).
///   constant: offset
///   sine:     offset + amplitude·sin(2π f t + phase)
///   chirp:    offset + amplitude·sin(2π (f0 t + (f1 − f0) t² / (2 T)))
///   step:     offset, plus amplitude once t ≥ step_time
template <std::size_t N>
struct Waveform {
  WaveformKind kind = WaveformKind::constant;
  Vec<N> offset;
  Vec<N> amplitude;
  double frequency = 0.5;  // Hz
  double phase = 0.0;      // rad
  double f0 = 0.1, f1 = 2.0, sweep_time = 10.0;
  double step_time = 0.0;  // s

  Vec<N> operator()(double t) const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    switch (kind) {
      case WaveformKind::constant: return offset;
      case WaveformKind::sine: return offset + amplitude * std::sin(two_pi * frequency * t + phase);
      case WaveformKind::chirp:
        return offset + amplitude * std::sin(two_pi * (f0 * t + (f1 - f0) * t * t / (2.0 * sweep_time)));
      case WaveformKind::step: return t >= step_time ? offset + amplitude : offset;
    }
    return offset;
  }
};

/// I q̈ = τ_s − a∘sin(q) − d∘q̇, diagonal per DoF.
template <std::size_t N>
struct PlantModel {
  Vec<N> inertia;
  Vec<N> damping;
  Vec<N> gravity;  // amplitude a of the pendulum torque a·sin(q)

  Vec<N> gravity_torque(const Vec<N>& q) const {
    Vec<N> g;
    for (std::size_t i = 0; i < N; ++i) g[i] = gravity[i] * std::sin(q[i]);
    return g;
  }

  double potential(const Vec<N>& q) const {
    double u = 0.0;
    for (std::size_t i = 0; i < N; ++i) u += gravity[i] * (1.0 - std::cos(q[i]));
    return u;
  }

  double kinetic(const Vec<N>& qd) const {
    double k = 0.0;
    for (std::size_t i = 0; i < N; ++i) k += 0.5 * inertia[i] * qd[i] * qd[i];
    return k;
  }

  void validate() const {
    for (std::size_t i = 0; i < N; ++i) {
      if (!(inertia[i] > 0.0)) throw TransmissionError(ErrorKind::config, "plant inertia must be positive");
      if (!(damping[i] >= 0.0)) throw TransmissionError(ErrorKind::config, "plant damping must be non-negative");
      if (!std::isfinite(gravity[i])) throw TransmissionError(ErrorKind::config, "plant gravity must be finite");
    }
  }
};

/// Loop rates in Hz. gains | motor | physics must divide exactly; the policy
/// rate only needs to be the slowest, and its outputs are latched on the
/// gains grid where the serial-to-motor conversion runs.
struct RateConfig {
  std::int64_t policy_hz = 30;
  std::int64_t gains_hz = 100;
  std::int64_t motor_hz = 1000;
  std::int64_t physics_hz = 10000;

  void validate() const {
    if (policy_hz <= 0 || gains_hz <= 0 || motor_hz <= 0 || physics_hz <= 0)
      throw TransmissionError(ErrorKind::config, "rates must be positive");
    if (!(physics_hz >= motor_hz && motor_hz >= gains_hz && gains_hz >= policy_hz))
      throw TransmissionError(ErrorKind::config, "rates must satisfy physics >= motor >= gains >= policy");
    if (physics_hz % motor_hz != 0 || motor_hz % gains_hz != 0)
      throw TransmissionError(ErrorKind::config, "gains_hz must divide motor_hz and motor_hz must divide physics_hz");
  }

  double dt() const { return 1.0 / static_cast<double>(physics_hz); }
  bool motor_tick(std::int64_t k) const { return k % (physics_hz / motor_hz) == 0; }
  bool gains_tick(std::int64_t k) const { return k % (physics_hz / gains_hz) == 0; }
  // first gains tick at or after each multiple of 1/policy_hz
  bool policy_tick(std::int64_t k) const {
    if (!gains_tick(k)) return false;
    const std::int64_t g = k / (physics_hz / gains_hz);
    return g == 0 || (g * policy_hz) / gains_hz != ((g - 1) * policy_hz) / gains_hz;
  }
};

struct Fault {
  double t = 0.0;
  std::string reason;
};

/// State at the start of a physics step and the torques applied over it.
template <std::size_t N>
struct SimSample {
  double t = 0.0;
  Vec<N> q_s, qd_s, q_m, qd_m;
  Vec<N> tau_m, tau_s;
  Vec<N> q_s_ref;
  Vec<N> q_m_ref;  // q_m* for transferred_gains, f(q_s*) otherwise
  Mat<N, N> K_Pm, K_Dm;  // zero outside transferred_gains
  int iterations = -1;   // estimator iterations on gains ticks, −1 elsewhere
  bool fallback = false;
};

template <std::size_t N>
struct SimMetrics {
  Vec<N> rms_error;  // of q_s* − q_s
  Vec<N> max_error;
  double rms_error_norm = 0.0;
  std::vector<std::size_t> iteration_histogram;  // index = iteration count
  std::size_t fallback_ticks = 0;
};

template <std::size_t N>
struct SimConfig {
  Scenario scenario = Scenario::serial_pd;
  PlantModel<N> plant;
  Vec<N> kp, kd;  // serial PD gains
  RateConfig rates;
  double duration = 10.0;
  Waveform<N> reference;
  Vec<N> q0, qd0;
  double divergence_bound = 10.0;  // rad
};

template <std::size_t N>
struct SimTrace {
  Scenario scenario = Scenario::serial_pd;
  RateConfig rates;
  double duration = 0.0;
  std::vector<SimSample<N>> samples;
  std::optional<Fault> fault;
  SimMetrics<N> metrics;
};

template <std::size_t N>
SimMetrics<N> compute_metrics(const std::vector<SimSample<N>>& samples) {
  SimMetrics<N> m;
  Vec<N> sq;
  for (const auto& s : samples) {
    const Vec<N> e = s.q_s_ref - s.q_s;
    for (std::size_t i = 0; i < N; ++i) {
      sq[i] += e[i] * e[i];
      m.max_error[i] = std::max(m.max_error[i], std::abs(e[i]));
    }
    if (s.iterations >= 0) {
      const auto it = static_cast<std::size_t>(s.iterations);
      if (m.iteration_histogram.size() <= it) m.iteration_histogram.resize(it + 1, 0);
      ++m.iteration_histogram[it];
    }
    m.fallback_ticks += s.fallback && s.iterations >= 0;
  }
  if (!samples.empty()) {
    double total = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      total += sq[i];
      m.rms_error[i] = std::sqrt(sq[i] / static_cast<double>(samples.size()));
    }
    m.rms_error_norm = std::sqrt(total / static_cast<double>(samples.size()));
  }
  return m;
}

template <Transmission M>
SimTrace<M::dofs> simulate(const M& mech, const SimConfig<M::dofs>& cfg) {
  constexpr std::size_t N = M::dofs;
  cfg.rates.validate();
  cfg.plant.validate();
  if (!(cfg.duration >= 0.0) || !std::isfinite(cfg.duration))
    throw TransmissionError(ErrorKind::config, "duration must be finite and non-negative");

  SimTrace<N> trace;
  trace.scenario = cfg.scenario;
  trace.rates = cfg.rates;
  trace.duration = cfg.duration;

  const auto steps = static_cast<std::int64_t>(std::llround(cfg.duration * static_cast<double>(cfg.rates.physics_hz)));
  const double dt = cfg.rates.dt();
  trace.samples.reserve(static_cast<std::size_t>(steps));

  SerialImpedance<N> serial{cfg.kp, cfg.kd, cfg.q0};
  Vec<N> q = cfg.q0, v = cfg.qd0;
  Vec<N> q_m_ref_display;
  Vec<N> tau_s_hold, tau_m_hold;
  MotorImpedance<N> imp;
  // the estimator starts from the known initial pose
  EstimatorState<N> warm{cfg.q0, 0.0, 0};

  double t = 0.0;
  try {
    for (std::int64_t k = 0; k < steps; ++k) {
      t = static_cast<double>(k) * dt;
      if (!all_finite(q) || !all_finite(v) || max_abs(q) > cfg.divergence_bound) {
        trace.fault = Fault{t, "serial state diverged beyond " + std::to_string(cfg.divergence_bound) + " rad"};
        break;
      }

      const auto ev = evaluate(mech, q);
      const auto ja = stack_jacobian(ev);
      SimSample<N> s;
      s.t = t;
      s.q_s = q;
      s.qd_s = v;
      s.q_m = ev.q_m;
      s.qd_m = map_velocity(ja, v);

      if (cfg.rates.policy_tick(k)) {
        serial.q_ref = cfg.reference(t);
        const auto ref = probe(mech, serial.q_ref);
        for (std::size_t i = 0; i < N; ++i)
          q_m_ref_display[i] = ref.feasible() ? ref.q_m[i] : std::numeric_limits<double>::quiet_NaN();
      }

      if (cfg.scenario != Scenario::serial_pd && cfg.rates.gains_tick(k)) {
        const auto est = estimate(mech, s.q_m, warm);
        warm = est;
        s.iterations = est.iterations;
        const TransmissionState<N> state{est.q_hat, recover_velocity(mech, est.q_hat, s.qd_m), s.q_m, s.qd_m};
        imp = transfer_gains(mech, serial, state);
        if (cfg.scenario == Scenario::feedforward_only) tau_m_hold = imp.tau_m_ref;
      }

      if (cfg.rates.motor_tick(k)) {
        if (cfg.scenario == Scenario::serial_pd) tau_s_hold = serial.torque(q, v);
        if (cfg.scenario == Scenario::transferred_gains) tau_m_hold = motor_pd(imp, s.q_m, s.qd_m);
      }

      if (cfg.scenario == Scenario::serial_pd) {
        s.tau_s = tau_s_hold;
        s.tau_m = map_torque_inv(ja, tau_s_hold);
        s.q_m_ref = q_m_ref_display;
      } else {
        s.tau_m = tau_m_hold;
        s.tau_s = map_torque(ja, tau_m_hold);
        s.q_m_ref = cfg.scenario == Scenario::transferred_gains ? imp.q_m_ref : q_m_ref_display;
      }
      s.q_s_ref = serial.q_ref;
      if (cfg.scenario == Scenario::transferred_gains) {
        s.K_Pm = imp.K_Pm;
        s.K_Dm = imp.K_Dm;
      }
      s.fallback = cfg.scenario != Scenario::serial_pd && imp.feedforward_fallback;
      trace.samples.push_back(s);

      Vec<N> a = s.tau_s - cfg.plant.gravity_torque(q);
      for (std::size_t i = 0; i < N; ++i) a[i] = (a[i] - cfg.plant.damping[i] * v[i]) / cfg.plant.inertia[i];
      v += a * dt;
      q += v * dt;
    }
  } catch (const TransmissionError& e) {
    trace.fault = Fault{t, e.what()};
  }
  trace.metrics = compute_metrics(trace.samples);
  return trace;
}

}  // namespace spt

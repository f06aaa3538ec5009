#pragma once

// Subcommand bodies for the `spt` CLI. Each writes to the given streams and
// returns a process exit code; argument parsing lives in tools/spt.cpp.

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "spt/config.hpp"
#include "spt/estimation.hpp"
#include "spt/format.hpp"
#include "spt/impedance.hpp"
#include "spt/jacobian.hpp"
#include "spt/simulator.hpp"
#include "spt/trace_io.hpp"
#include "spt/verification.hpp"

namespace spt::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kVerificationFailed = 2, kSimulationFault = 3 };

/// Bad command-line input (as opposed to a bad config file).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline FourBar make_mechanism(const FourBarConfig& c) { return FourBar(c.params); }
inline Ankle make_mechanism(const AnkleConfig& c) { return Ankle(c.params); }

inline const char* mechanism_name(const FourBarConfig&) { return "fourbar"; }
inline const char* mechanism_name(const AnkleConfig&) { return "ankle"; }

template <std::size_t N>
Vec<N> to_vec(const std::vector<double>& v, const std::string& flag) {
  if (v.size() != N)
    throw UsageError(flag + " expects " + std::to_string(N) + " value" + (N == 1 ? "" : "s") + ", got " +
                     std::to_string(v.size()));
  Vec<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = v[i];
  return out;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot open " + path + " for writing");
  return f;
}

// ---------------------------------------------------------------- map

struct MapOptions {
  std::size_t grid = 101;  // points per serial axis
  double extend = 0.0;     // widen the serial range by this much on every side, rad
};

template <std::size_t N>
std::vector<std::string> map_columns() {
  std::vector<std::string> cols;
  for (std::size_t i = 0; i < N; ++i) cols.push_back(detail::indexed("q_s", N, i));
  cols.push_back("feasible");
  for (std::size_t i = 0; i < N; ++i) cols.push_back(detail::indexed("q_m", N, i));
  for (const char* m : {"JA", "JAinv"})
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) cols.push_back(detail::indexed(m, N, i, j));
  cols.push_back("singular_margin");
  cols.push_back("verdict");
  return cols;
}

/// One row per grid point. q_m and J_A are blank where the linkage does not
/// close, J_A where it is singular, J_A⁻¹ where J_A is not invertible.
/// singular_margin is clipped at 0.
template <Transmission M>
void write_map(std::ostream& os, const M& mech, const MapOptions& opt) {
  constexpr std::size_t N = M::dofs;
  if (opt.grid < 2) throw UsageError("--grid must be at least 2");
  const auto cols = map_columns<N>();
  for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
  os << '\n';

  const Vec<N> lo = mech.serial_min() - Vec<N>::filled(opt.extend);
  const Vec<N> hi = mech.serial_max() + Vec<N>::filled(opt.extend);
  std::size_t total = 1;
  for (std::size_t i = 0; i < N; ++i) total *= opt.grid;
  for (std::size_t flat = 0; flat < total; ++flat) {
    Vec<N> q;
    std::size_t rest = flat;
    for (std::size_t i = N; i-- > 0;) {
      const std::size_t k = rest % opt.grid;
      rest /= opt.grid;
      q[i] = lo[i] + (hi[i] - lo[i]) * static_cast<double>(k) / static_cast<double>(opt.grid - 1);
    }
    const auto ev = probe(mech, q);
    const bool closes = ev.feasible();
    std::optional<ActuationJacobian<N>> ja;
    if (closes) {
      try {
        ja = stack_jacobian(ev);
      } catch (const TransmissionError&) {
      }
    }
    for (std::size_t i = 0; i < N; ++i) os << format_double(q[i]) << ',';
    os << (closes ? 1 : 0);
    for (std::size_t i = 0; i < N; ++i) os << ',' << (closes ? csv_cell(ev.q_m[i]) : "");
    for (std::size_t i = 0; i < N * N; ++i) os << ',' << (ja ? csv_cell(ja->J[i]) : "");
    const bool inv = ja && ja->invertible();
    const Mat<N, N> Jinv = inv ? inverse(ja->J) : Mat<N, N>{};
    for (std::size_t i = 0; i < N * N; ++i) os << ',' << (inv ? csv_cell(Jinv[i]) : "");
    os << ',' << format_double(closes ? std::max(0.0, ev.singular_margin()) : 0.0);
    os << ',' << to_string(classify(mech, ev)) << '\n';
  }
}

inline int cmd_map(const AnyConfig& cfg, const MapOptions& opt, std::ostream& out) {
  std::visit([&](const auto& c) { write_map(out, make_mechanism(c), opt); }, cfg);
  return kOk;
}

// -------------------------------------------------------------- check

struct CheckOptions {
  std::size_t samples = 500;
  std::uint64_t seed = 1;
  std::optional<double> tolerance;  // replaces every error tolerance
};

inline nlohmann::json check_report(const std::string& mechanism, const CheckOptions& opt,
                                   const std::vector<verify::CheckResult>& results) {
  nlohmann::json j;
  j["mechanism"] = mechanism;
  j["samples"] = opt.samples;
  j["seed"] = opt.seed;
  j["tolerance_override"] = opt.tolerance ? nlohmann::json(*opt.tolerance) : nlohmann::json();
  auto checks = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    checks.push_back({{"name", r.name},
                      {"metric", r.metric},
                      {"value", r.value},
                      {"threshold", r.threshold},
                      {"comparison", r.at_least ? ">=" : "<="},
                      {"samples", r.samples},
                      {"pass", r.pass()},
                      {"note", r.note}});
    all = all && r.pass();
  }
  j["checks"] = checks;
  j["pass"] = all;
  return j;
}

/// Human-readable lines on `human`, the JSON report on `json_out` if given.
inline int cmd_check(const AnyConfig& cfg, const CheckOptions& opt, std::ostream& human, std::ostream* json_out) {
  if (opt.samples == 0) throw UsageError("--samples must be positive");
  const auto tol = opt.tolerance ? verify::Tolerances::uniform(*opt.tolerance) : verify::Tolerances{};
  nlohmann::json report;
  std::visit(
      [&](const auto& c) {
        const auto mech = make_mechanism(c);
        report = check_report(mechanism_name(c), opt, verify::run_checks(mech, opt.samples, opt.seed, tol));
      },
      cfg);
  for (const auto& c : report["checks"]) {
    human << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << "  "
          << c["metric"].get<std::string>() << " = " << format_double(c["value"].get<double>()) << " ("
          << c["comparison"].get<std::string>() << ' ' << format_double(c["threshold"].get<double>()) << ", "
          << c["samples"].get<std::size_t>() << " samples)";
    if (!c["note"].get<std::string>().empty()) human << "  " << c["note"].get<std::string>();
    human << '\n';
  }
  human << (report["pass"].get<bool>() ? "all checks passed" : "some checks FAILED") << '\n';
  if (json_out) *json_out << report.dump(2) << '\n';
  return report["pass"].get<bool>() ? kOk : kVerificationFailed;
}

// ----------------------------------------------------------- estimate

struct EstimateOptions {
  std::vector<double> q_m;
  std::optional<std::vector<double>> warm;
};

inline int cmd_estimate(const AnyConfig& cfg, const EstimateOptions& opt, std::ostream& out) {
  std::visit(
      [&](const auto& c) {
        const auto mech = make_mechanism(c);
        constexpr std::size_t N = std::decay_t<decltype(mech)>::dofs;
        const Vec<N> qm = to_vec<N>(opt.q_m, "--qm");
        const EstimatorState<N> warm =
            opt.warm ? EstimatorState<N>{to_vec<N>(*opt.warm, "--warm"), 0.0, 0} : cold_start(mech);
        const auto st = estimate(mech, qm, warm);
        nlohmann::json j;
        j["q_m"] = to_json(qm);
        j["q_s"] = to_json(st.q_hat);
        j["iterations"] = st.iterations;
        j["residual"] = st.residual;
        out << j.dump(2) << '\n';
      },
      cfg);
  return kOk;
}

// -------------------------------------------------------------- gains

struct GainsOptions {
  std::vector<double> q_s;
  std::optional<std::vector<double>> qd_s, kp, kd, q_ref;
};

inline int cmd_gains(const AnyConfig& cfg, const GainsOptions& opt, std::ostream& out) {
  std::visit(
      [&](const auto& c) {
        const auto mech = make_mechanism(c);
        constexpr std::size_t N = std::decay_t<decltype(mech)>::dofs;
        const Vec<N> q = to_vec<N>(opt.q_s, "--qs");
        const Vec<N> qd = opt.qd_s ? to_vec<N>(*opt.qd_s, "--qds") : Vec<N>{};
        SerialImpedance<N> serial{opt.kp ? to_vec<N>(*opt.kp, "--kp") : c.sim.kp,
                                  opt.kd ? to_vec<N>(*opt.kd, "--kd") : c.sim.kd,
                                  opt.q_ref ? to_vec<N>(*opt.q_ref, "--qref") : q};
        const auto state = make_state(mech, q, qd);
        const auto imp = transfer_gains(mech, serial, state);
        nlohmann::json j;
        j["state"] = {{"q_s", to_json(state.q_s)},
                      {"qd_s", to_json(state.qd_s)},
                      {"q_m", to_json(state.q_m)},
                      {"qd_m", to_json(state.qd_m)}};
        j["serial"] = {{"kp", to_json(serial.kp)}, {"kd", to_json(serial.kd)}, {"q_ref", to_json(serial.q_ref)}};
        j["K_Pm"] = to_json(imp.K_Pm);
        j["K_Dm"] = to_json(imp.K_Dm);
        j["q_m_ref"] = to_json(imp.q_m_ref);
        j["tau_m_ref"] = to_json(imp.tau_m_ref);
        j["A_Pm"] = to_json(imp.A_Pm);
        j["B_Pm"] = to_json(imp.B_Pm);
        j["C_Pm"] = to_json(imp.C_Pm);
        j["C_Dm"] = to_json(imp.C_Dm);
        j["feedforward_fallback"] = imp.feedforward_fallback;
        j["warning"] = imp.warning;
        out << j.dump(2) << '\n';
      },
      cfg);
  return kOk;
}

// ----------------------------------------------------------- simulate

struct SimulateOptions {
  std::optional<std::string> scenario, waveform;
  std::optional<double> duration;
  std::optional<std::string> out_prefix;  // writes <prefix>.csv and <prefix>.json
};

/// Summary JSON on `out`; exit code 3 if the run faulted.
inline int cmd_simulate(const AnyConfig& cfg, const SimulateOptions& opt, std::ostream& out) {
  bool faulted = false;
  std::visit(
      [&](const auto& c) {
        const auto mech = make_mechanism(c);
        auto sim = c.sim;
        if (opt.scenario) {
          const auto s = parse_scenario(*opt.scenario);
          if (!s) throw UsageError("--scenario must be serial_pd, transferred_gains or feedforward_only");
          sim.scenario = *s;
        }
        if (opt.waveform) {
          const auto w = parse_waveform(*opt.waveform);
          if (!w) throw UsageError("--waveform must be constant, sine, chirp or step");
          sim.reference.kind = *w;
        }
        if (opt.duration) {
          if (!(*opt.duration >= 0.0)) throw UsageError("--duration must be non-negative");
          sim.duration = *opt.duration;
        }
        const auto trace = simulate(mech, sim);
        const auto summary = trace_summary(trace);
        if (opt.out_prefix) {
          auto csv = open_output(*opt.out_prefix + ".csv");
          write_trace_csv(csv, trace);
          auto js = open_output(*opt.out_prefix + ".json");
          js << summary.dump(2) << '\n';
        }
        out << summary.dump(2) << '\n';
        faulted = trace.fault.has_value();
      },
      cfg);
  return faulted ? kSimulationFault : kOk;
}

}  // namespace spt::cli

#pragma once

// JSON mechanism configuration. Every object is closed: unknown keys are
// rejected. Unbounded motor limits are written as null.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "spt/ankle.hpp"
#include "spt/errors.hpp"
#include "spt/fourbar.hpp"
#include "spt/mechanism.hpp"
#include "spt/simulator.hpp"

namespace spt {

template <class Params, std::size_t N>
struct MechanismConfig {
  Params params;
  SimConfig<N> sim;  // plant, gains, rates, reference, initial state, duration
};

using FourBarConfig = MechanismConfig<FourBarParams, 1>;
using AnkleConfig = MechanismConfig<AnkleParams, 2>;
using AnyConfig = std::variant<FourBarConfig, AnkleConfig>;

namespace config_detail {

using json = nlohmann::json;

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
  throw TransmissionError(ErrorKind::config, where + ": " + what);
}

inline void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(where, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) fail(where, "unknown key \"" + k + "\"");
}

inline const json& need(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) fail(where, std::string("missing key \"") + key + "\"");
  return j.at(key);
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "expected a finite number");
  return v;
}

inline double positive(const json& j, const std::string& where) {
  const double v = number(j, where);
  if (!(v > 0.0)) fail(where, "must be positive");
  return v;
}

/// Number, or null for the given unbounded value.
inline double bound(const json& j, const std::string& where, double if_null) {
  return j.is_null() ? if_null : number(j, where);
}

/// For N = 1 a bare number is accepted in place of a one-element array.
template <std::size_t N>
Vec<N> vec(const json& j, const std::string& where) {
  Vec<N> v;
  if (N == 1 && j.is_number()) {
    v[0] = number(j, where);
    return v;
  }
  if (!j.is_array() || j.size() != N) fail(where, "expected an array of " + std::to_string(N) + " numbers");
  for (std::size_t i = 0; i < N; ++i) v[i] = number(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

inline std::int64_t rate(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<std::int64_t>() <= 0) fail(where, "expected a positive integer");
  return j.get<std::int64_t>();
}

inline FourBarParams fourbar_geometry(const json& root) {
  FourBarParams p;
  const json& g = need(root, "config", "geometry");
  allow_keys(g, "geometry", {"l1", "l2", "l3", "l4"});
  p.l1 = positive(need(g, "geometry", "l1"), "geometry.l1");
  p.l2 = positive(need(g, "geometry", "l2"), "geometry.l2");
  p.l3 = positive(need(g, "geometry", "l3"), "geometry.l3");
  p.l4 = positive(need(g, "geometry", "l4"), "geometry.l4");

  const json& r = need(root, "config", "serial_range");
  allow_keys(r, "serial_range", {"min", "max"});
  p.q_s_min = number(need(r, "serial_range", "min"), "serial_range.min");
  p.q_s_max = number(need(r, "serial_range", "max"), "serial_range.max");

  if (root.contains("motor_bounds")) {
    const json& b = root.at("motor_bounds");
    allow_keys(b, "motor_bounds", {"lo", "hi"});
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (b.contains("lo")) p.q_m_lo = bound(b.at("lo"), "motor_bounds.lo", -inf);
    if (b.contains("hi")) p.q_m_hi = bound(b.at("hi"), "motor_bounds.hi", inf);
  }
  return p;
}

inline AnkleParams ankle_geometry(const json& root) {
  AnkleParams p;
  const json& g = need(root, "config", "geometry");
  allow_keys(g, "geometry", {"joint", "alpha", "beta"});
  const json& jt = need(g, "geometry", "joint");
  allow_keys(jt, "geometry.joint", {"center", "first_axis", "second_axis"});
  p.joint.center = vec<3>(need(jt, "geometry.joint", "center"), "geometry.joint.center");
  p.joint.first_axis = vec<3>(need(jt, "geometry.joint", "first_axis"), "geometry.joint.first_axis");
  p.joint.second_axis = vec<3>(need(jt, "geometry.joint", "second_axis"), "geometry.joint.second_axis");
  for (Side s : {Side::alpha, Side::beta}) {
    const std::string w = std::string("geometry.") + to_string(s);
    const json& sj = need(g, "geometry", to_string(s));
    allow_keys(sj, w, {"attachment", "motor_origin", "motor_axis", "crank", "rod"});
    AnkleSide& sd = p.sides[s == Side::alpha ? 0 : 1];
    sd.attachment = vec<3>(need(sj, w, "attachment"), w + ".attachment");
    sd.motor_origin = vec<3>(need(sj, w, "motor_origin"), w + ".motor_origin");
    sd.motor_axis = vec<3>(need(sj, w, "motor_axis"), w + ".motor_axis");
    sd.crank = positive(need(sj, w, "crank"), w + ".crank");
    sd.rod = positive(need(sj, w, "rod"), w + ".rod");
  }

  const json& r = need(root, "config", "serial_range");
  allow_keys(r, "serial_range", {"min", "max"});
  p.q_s_min = vec<2>(need(r, "serial_range", "min"), "serial_range.min");
  p.q_s_max = vec<2>(need(r, "serial_range", "max"), "serial_range.max");

  if (root.contains("motor_bounds")) {
    const json& b = root.at("motor_bounds");
    allow_keys(b, "motor_bounds", {"alpha", "beta"});
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (Side s : {Side::alpha, Side::beta}) {
      if (!b.contains(to_string(s))) continue;
      const std::string w = std::string("motor_bounds.") + to_string(s);
      const json& lh = b.at(to_string(s));
      if (!lh.is_array() || lh.size() != 2) fail(w, "expected [lo, hi]");
      AnkleSide& sd = p.sides[s == Side::alpha ? 0 : 1];
      sd.q_m_lo = bound(lh[0], w + "[0]", -inf);
      sd.q_m_hi = bound(lh[1], w + "[1]", inf);
    }
  }
  return p;
}

template <std::size_t N>
void sim_sections(const json& root, SimConfig<N>& c, const Vec<N>& midpoint) {
  for (std::size_t i = 0; i < N; ++i) {
    c.plant.inertia[i] = 0.01;
    c.plant.damping[i] = 0.02;
    c.kp[i] = 20.0;
    c.kd[i] = 0.5;
  }
  c.reference.offset = midpoint;

  if (root.contains("plant")) {
    const json& p = root.at("plant");
    allow_keys(p, "plant", {"inertia", "damping", "gravity"});
    if (p.contains("inertia")) c.plant.inertia = vec<N>(p.at("inertia"), "plant.inertia");
    if (p.contains("damping")) c.plant.damping = vec<N>(p.at("damping"), "plant.damping");
    if (p.contains("gravity")) c.plant.gravity = vec<N>(p.at("gravity"), "plant.gravity");
  }
  if (root.contains("gains")) {
    const json& g = root.at("gains");
    allow_keys(g, "gains", {"kp", "kd"});
    if (g.contains("kp")) c.kp = vec<N>(g.at("kp"), "gains.kp");
    if (g.contains("kd")) c.kd = vec<N>(g.at("kd"), "gains.kd");
  }
  if (root.contains("rates")) {
    const json& r = root.at("rates");
    allow_keys(r, "rates", {"policy_hz", "gains_hz", "motor_hz", "physics_hz"});
    if (r.contains("policy_hz")) c.rates.policy_hz = rate(r.at("policy_hz"), "rates.policy_hz");
    if (r.contains("gains_hz")) c.rates.gains_hz = rate(r.at("gains_hz"), "rates.gains_hz");
    if (r.contains("motor_hz")) c.rates.motor_hz = rate(r.at("motor_hz"), "rates.motor_hz");
    if (r.contains("physics_hz")) c.rates.physics_hz = rate(r.at("physics_hz"), "rates.physics_hz");
  }
  if (root.contains("reference")) {
    const json& r = root.at("reference");
    allow_keys(r, "reference",
               {"waveform", "offset", "amplitude", "frequency", "phase", "f0", "f1", "sweep_time", "step_time"});
    if (r.contains("waveform")) {
      if (!r.at("waveform").is_string()) fail("reference.waveform", "expected a string");
      const auto k = parse_waveform(r.at("waveform").get<std::string>());
      if (!k) fail("reference.waveform", "expected constant, sine, chirp or step");
      c.reference.kind = *k;
    }
    if (r.contains("offset")) c.reference.offset = vec<N>(r.at("offset"), "reference.offset");
    if (r.contains("amplitude")) c.reference.amplitude = vec<N>(r.at("amplitude"), "reference.amplitude");
    if (r.contains("frequency")) c.reference.frequency = number(r.at("frequency"), "reference.frequency");
    if (r.contains("phase")) c.reference.phase = number(r.at("phase"), "reference.phase");
    if (r.contains("f0")) c.reference.f0 = number(r.at("f0"), "reference.f0");
    if (r.contains("f1")) c.reference.f1 = number(r.at("f1"), "reference.f1");
    if (r.contains("sweep_time")) c.reference.sweep_time = positive(r.at("sweep_time"), "reference.sweep_time");
    if (r.contains("step_time")) c.reference.step_time = number(r.at("step_time"), "reference.step_time");
  }
  c.q0 = c.reference(0.0);
  if (root.contains("initial")) {
    const json& s = root.at("initial");
    allow_keys(s, "initial", {"q_s", "qd_s"});
    if (s.contains("q_s")) c.q0 = vec<N>(s.at("q_s"), "initial.q_s");
    if (s.contains("qd_s")) c.qd0 = vec<N>(s.at("qd_s"), "initial.qd_s");
  }
  if (root.contains("duration")) {
    c.duration = number(root.at("duration"), "duration");
    if (c.duration < 0.0) fail("duration", "must be non-negative");
  }
  c.plant.validate();
  c.rates.validate();
}

}  // namespace config_detail

inline AnyConfig parse_config(const nlohmann::json& root) {
  using namespace config_detail;
  allow_keys(root, "config",
             {"mechanism", "geometry", "serial_range", "motor_bounds", "plant", "gains", "rates", "reference",
              "initial", "duration"});
  const json& kind = need(root, "config", "mechanism");
  if (!kind.is_string()) fail("mechanism", "expected \"fourbar\" or \"ankle\"");
  const std::string k = kind.get<std::string>();
  if (k == "fourbar") {
    FourBarConfig c;
    c.params = fourbar_geometry(root);
    validate(c.params);
    sim_sections<1>(root, c.sim, serial_midpoint(FourBar(c.params)));
    return c;
  }
  if (k == "ankle") {
    AnkleConfig c;
    c.params = ankle_geometry(root);
    validate(c.params);
    sim_sections<2>(root, c.sim, serial_midpoint(Ankle(c.params)));
    return c;
  }
  fail("mechanism", "expected \"fourbar\" or \"ankle\", got \"" + k + "\"");
}

inline AnyConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TransmissionError(ErrorKind::config, "cannot open config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw TransmissionError(ErrorKind::config, path + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace spt

#pragma once

// CSV and JSON export of simulation traces.

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spt/format.hpp"
#include "spt/simulator.hpp"

namespace spt {

namespace detail {

inline std::string indexed(const std::string& base, std::size_t n, std::size_t i) {
  return n == 1 ? base : base + std::to_string(i + 1);
}

inline std::string indexed(const std::string& base, std::size_t n, std::size_t i, std::size_t j) {
  return n == 1 ? base : base + "_" + std::to_string(i + 1) + std::to_string(j + 1);
}

}  // namespace detail

/// Column names for an N-DoF trace. Vectors get a 1-based DoF/motor suffix
/// when N > 1 (q_s1, q_s2, ...); matrices get row/column suffixes (K_Pm_12).
template <std::size_t N>
std::vector<std::string> trace_columns() {
  std::vector<std::string> cols{"t"};
  for (const char* v : {"q_s", "qd_s", "q_m", "qd_m", "tau_m", "tau_s", "q_s_ref", "q_m_ref"})
    for (std::size_t i = 0; i < N; ++i) cols.push_back(detail::indexed(v, N, i));
  for (const char* m : {"K_Pm", "K_Dm"})
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) cols.push_back(detail::indexed(m, N, i, j));
  cols.push_back("iterations");
  cols.push_back("fallback");
  return cols;
}

template <std::size_t N>
void write_trace_csv(std::ostream& os, const SimTrace<N>& trace) {
  const auto cols = trace_columns<N>();
  for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
  os << '\n';
  for (const auto& s : trace.samples) {
    os << format_double(s.t);
    for (const Vec<N>* v : {&s.q_s, &s.qd_s, &s.q_m, &s.qd_m, &s.tau_m, &s.tau_s, &s.q_s_ref, &s.q_m_ref})
      for (std::size_t i = 0; i < N; ++i) os << ',' << csv_cell((*v)[i]);
    for (const Mat<N, N>* m : {&s.K_Pm, &s.K_Dm})
      for (std::size_t i = 0; i < N * N; ++i) os << ',' << csv_cell((*m)[i]);
    os << ',' << s.iterations << ',' << (s.fallback ? 1 : 0) << '\n';
  }
}

template <std::size_t N>
nlohmann::json to_json(const Vec<N>& v) {
  auto a = nlohmann::json::array();
  for (std::size_t i = 0; i < N; ++i) a.push_back(v[i]);
  return a;
}

template <std::size_t R, std::size_t C>
nlohmann::json to_json(const Mat<R, C>& m) {
  auto a = nlohmann::json::array();
  for (std::size_t i = 0; i < R; ++i) {
    auto row = nlohmann::json::array();
    for (std::size_t j = 0; j < C; ++j) row.push_back(m(i, j));
    a.push_back(row);
  }
  return a;
}

template <std::size_t N>
nlohmann::json trace_summary(const SimTrace<N>& trace) {
  nlohmann::json j;
  j["scenario"] = to_string(trace.scenario);
  j["duration"] = trace.duration;
  j["rates"] = {{"policy_hz", trace.rates.policy_hz},
                {"gains_hz", trace.rates.gains_hz},
                {"motor_hz", trace.rates.motor_hz},
                {"physics_hz", trace.rates.physics_hz}};
  j["steps"] = trace.samples.size();
  j["fault"] = trace.fault ? nlohmann::json{{"t", trace.fault->t}, {"reason", trace.fault->reason}} : nlohmann::json();
  j["rms_error"] = to_json(trace.metrics.rms_error);
  j["max_error"] = to_json(trace.metrics.max_error);
  j["rms_error_norm"] = trace.metrics.rms_error_norm;
  j["iteration_histogram"] = trace.metrics.iteration_histogram;
  j["fallback_ticks"] = trace.metrics.fallback_ticks;
  return j;
}

}  // namespace spt

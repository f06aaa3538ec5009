#pragma once

// Planar four-bar ("knee") transmission: frame OM = l4, crank MA = l1,
// coupler AB = l2, serial lever OB = l3.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "spt/errors.hpp"
#include "spt/mechanism.hpp"

namespace spt {

struct FourBarParams {
  double l1 = 0.0;  // crank |MA|, m
  double l2 = 0.0;  // coupler |AB|, m
  double l3 = 0.0;  // serial lever |OB|, m
  double l4 = 0.0;  // frame |OM|, m
  double q_s_min = 0.0;
  double q_s_max = 0.0;
  double q_m_lo = -std::numeric_limits<double>::infinity();
  double q_m_hi = std::numeric_limits<double>::infinity();
};

inline FourBarEval eval_closure(const FourBarParams& p, double q_s) {
  return solve_closure(fk_planar(p.l3, p.l4, q_s).b, p.l1, p.l2);
}

/// Throws a config error unless lengths are positive, the serial range is
/// ordered, and some configuration in it closes.
inline void validate(const FourBarParams& p) {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(p.l1) || !positive(p.l2) || !positive(p.l3) || !positive(p.l4))
    throw TransmissionError(ErrorKind::config, "four-bar lengths must be positive");
  if (!(p.q_s_min < p.q_s_max))
    throw TransmissionError(ErrorKind::config, "serial range must satisfy q_s_min < q_s_max");
  if (!(p.q_m_lo <= p.q_m_hi))
    throw TransmissionError(ErrorKind::config, "motor bounds must satisfy q_m_lo <= q_m_hi");
  constexpr int kProbe = 1001;
  for (int k = 0; k < kProbe; ++k) {
    const double q = p.q_s_min + (p.q_s_max - p.q_s_min) * k / (kProbe - 1);
    if (eval_closure(p, q).feasible) return;
  }
  throw TransmissionError(ErrorKind::config, "no closing configuration on the serial range");
}

class FourBar {
 public:
  static constexpr std::size_t dofs = 1;

  explicit FourBar(const FourBarParams& p) : p_(p) { validate(p_); }

  const FourBarParams& params() const { return p_; }

  std::array<SideKinematics<1>, 1> sides(const Vec<1>& q) const {
    return {SideKinematics<1>{fk_planar(p_.l3, p_.l4, q[0]), p_.l1, p_.l2}};
  }

  Vec<1> serial_min() const { return Vec<1>{p_.q_s_min}; }
  Vec<1> serial_max() const { return Vec<1>{p_.q_s_max}; }
  Vec<1> motor_lo() const { return Vec<1>{p_.q_m_lo}; }
  Vec<1> motor_hi() const { return Vec<1>{p_.q_m_hi}; }

 private:
  FourBarParams p_;
};

/// q_m = f(q_s) with the full closure record. Throws Infeasible when
/// |r| > 1 + slack; `near_singular` is only a warning.
inline FourBarEval eval_f(const FourBarParams& p, double q_s) {
  const FourBarEval e = eval_closure(p, q_s);
  require_feasible(e, Side::alpha);
  return e;
}

struct LimitSample {
  double q_s = 0.0;
  Verdict verdict = Verdict::closure_infeasible;
  double q_m = std::numeric_limits<double>::quiet_NaN();
};

/// Uniform sweep of [lo, hi] with `samples` points (endpoints included),
/// classified against closure and q_m_lo ≤ f(q_s) ≤ q_m_hi.
inline std::vector<LimitSample> motor_limit_map(const FourBarParams& p, double lo, double hi,
                                                std::size_t samples) {
  std::vector<LimitSample> out;
  out.reserve(samples);
  const FourBar mech(p);
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = samples > 1 ? static_cast<double>(k) / static_cast<double>(samples - 1) : 0.0;
    const double q = lo + (hi - lo) * t;
    const auto ev = probe(mech, Vec<1>{q});
    LimitSample s;
    s.q_s = q;
    s.verdict = classify(mech, ev);
    if (ev.feasible()) s.q_m = ev.q_m[0];
    out.push_back(s);
  }
  return out;
}

}  // namespace spt

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace spt {

enum class Side { alpha = 0, beta = 1 };

inline const char* to_string(Side s) { return s == Side::alpha ? "alpha" : "beta"; }

enum class ErrorKind {
  infeasible,         // linkage closure has no real solution
  rod_too_short,      // l2² ≤ z_B², projected rod length undefined
  singular,           // crank and coupler collinear, or J_A not invertible
  no_convergence,     // inverse-map solver ran out of iterations
  out_of_workspace,   // inverse-map residual stalled: q_m not reachable
  non_invertible_kpm, // transferred stiffness cannot be inverted for q_m*
  config,             // malformed mechanism configuration
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::rod_too_short: return "rod_too_short";
    case ErrorKind::singular: return "singular";
    case ErrorKind::no_convergence: return "no_convergence";
    case ErrorKind::out_of_workspace: return "out_of_workspace";
    case ErrorKind::non_invertible_kpm: return "non_invertible_kpm";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

class TransmissionError : public std::runtime_error {
 public:
  TransmissionError(ErrorKind kind, const std::string& what, std::optional<Side> side = std::nullopt)
      : std::runtime_error(format(kind, what, side)), kind_(kind), side_(side) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<Side> side() const noexcept { return side_; }

 private:
  static std::string format(ErrorKind kind, const std::string& what, std::optional<Side> side) {
    std::string msg = to_string(kind);
    if (side) msg += std::string("[") + to_string(*side) + "]";
    return msg + ": " + what;
  }

  ErrorKind kind_;
  std::optional<Side> side_;
};

}  // namespace spt

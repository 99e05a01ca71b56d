#pragma once

#include <span>
#include <vector>

#include "greedylab/core.hpp"
#include "greedylab/json_io.hpp"

namespace greedylab::spaces {

/// A weight w = (w_n) with w_1 > 0, w_n >= 0, and its primitive weight
/// s_m = Σ_{n<=m} w_n. Closed-form rules are evaluated lazily; explicit
/// lists only cover their own length.
class Weight {
 public:
  enum class Rule { Explicit, Power, PowerLog, Geometric };

  /// Explicit finite list w_1..w_n.
  static Weight from_list(std::vector<double> w);
  /// s_m = m^alpha, alpha > 0.
  static Weight power(double alpha);
  /// s_m = m^alpha (1 + log_b m)^beta with alpha > 0, beta >= 0, b > 1.
  static Weight power_log(double alpha, double beta, double log_base = 2.0);
  /// s_m = base^m, base >= 1.
  static Weight geometric(double base);

  [[nodiscard]] Rule rule() const noexcept { return rule_; }
  [[nodiscard]] double w(Index n) const;
  [[nodiscard]] double s(Index m) const;
  /// Largest index available; SIZE_MAX for closed-form rules.
  [[nodiscard]] std::size_t horizon() const noexcept;

  [[nodiscard]] Json to_json() const;
  static Weight from_json(const Json& j);

  friend bool operator==(const Weight&, const Weight&) = default;

 private:
  Rule rule_ = Rule::Power;
  double alpha_ = 1.0;
  double beta_ = 0.0;
  double base_ = 2.0;
  std::vector<double> list_;
  std::vector<double> prefix_;
};

/// s_1..s_n.
std::vector<double> primitive_weight(const Weight& w, std::size_t n);

struct DoublingReport {
  bool doubling;
  /// max_{m <= horizon} s_{2m} / s_m
  double constant;
  std::size_t argmax;
};

/// Finite-horizon doubling diagnostic. The flag is set when the running max of
/// s_{2m}/s_m does not grow (relative tolerance 1e-9) over m in (horizon/2, horizon].
/// `s` holds s_1..s_n with n >= 2*horizon.
DoublingReport is_doubling(std::span<const double> s, std::size_t horizon);

}  // namespace greedylab::spaces

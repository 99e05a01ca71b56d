#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "greedylab/json_io.hpp"

namespace greedylab {

/// Measured constant of an inequality. Every sampled ratio lies in
/// [lower_const, upper_const]; for sup-type constants upper_const is the
/// reported value, and it is only an empirical lower bound on the true sup.
struct TwoSidedEstimate {
  double lower_const = 0.0;
  double upper_const = 0.0;
  std::vector<std::pair<std::size_t, double>> samples;
  std::string sampler;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t evaluations = 0;
  /// True when the value came from exhaustive enumeration.
  bool exact = false;

  /// Adds one ratio and widens the bounds.
  void record(std::size_t m, double value);
  [[nodiscard]] Json to_json(bool with_samples = false) const;
};

}  // namespace greedylab

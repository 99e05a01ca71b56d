#include "greedylab/core.hpp"

#include <algorithm>
#include <cmath>

namespace greedylab {

double log_sum_exp(std::span<const double> log_terms) noexcept {
  double top = -kInfinity;
  for (double x : log_terms) top = std::max(top, x);
  if (top == -kInfinity) return -kInfinity;
  if (top == kInfinity) return kInfinity;
  CompensatedSum acc;
  for (double x : log_terms) acc.add(std::exp(x - top));
  return top + std::log(acc.value());
}

void require_exponent(double p, const char* what) {
  if (!(p > 0.0)) {
    throw ConfigError(std::string(what) + " must lie in (0, inf]");
  }
}

}  // namespace greedylab

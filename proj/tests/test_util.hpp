#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "greedylab/coefficients.hpp"
#include "greedylab/space.hpp"

namespace testutil {

using greedylab::CoefficientVector;
using greedylab::Entry;
using greedylab::Index;

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Random real vector with roughly `density` of the coordinates nonzero.
inline CoefficientVector random_vector(std::mt19937_64& rng, std::size_t n, double density = 0.6) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::bernoulli_distribution keep(density);
  std::vector<Entry> e;
  for (Index i = 1; i <= n; ++i) {
    if (keep(rng)) e.push_back({i, u(rng)});
  }
  return CoefficientVector(n, std::move(e));
}

/// Random vector with heavy ties: values drawn from {±1, ±2, ±3} and zeros.
inline CoefficientVector random_tied_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> v(-3, 3);
  std::vector<Entry> e;
  for (Index i = 1; i <= n; ++i) e.push_back({i, static_cast<double>(v(rng))});
  return CoefficientVector(n, std::move(e));
}

/// Spaces of every non-Haar kind, each valid at ambient size kSampleAmbient.
inline std::vector<greedylab::spaces::SpaceSpec> sample_spaces() {
  using namespace greedylab::spaces;
  return {
      lp(0.5),
      lp(1.0),
      lp(0.2),
      lp(greedylab::kInfinity),
      lorentz(0.5, 1.0),
      lorentz(2.0, 0.7),
      lorentz(0.75, greedylab::kInfinity),
      weak_lorentz(Weight::power(2.0)),
      weak_lorentz(Weight::power_log(1.0, 1.0)),
      direct_sum({{lp(0.5), 7}, {lp(0.25), 7}}),
      direct_sum({{lp(1.0), 4}, {lorentz(0.5, 2.0), 10}}, 0.5),
      mixed_increasing(0.5, 0.25),
      mixed_uniform(1.0, 0.5, 3),
  };
}

inline constexpr std::size_t kSampleAmbient = 14;

}  // namespace testutil

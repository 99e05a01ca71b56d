#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace greedylab {

using Scalar = std::complex<double>;

/// Basis indices are 1-based throughout: a vector of ambient size N lives on 1..N.
using Index = std::size_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Base class of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad JSON, unknown preset, invalid parameters, block mismatch.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A quantity overflowed or underflowed even after log-domain evaluation.
class NumericGuard : public Error {
 public:
  using Error::Error;
};

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

/// log(Σ exp(x_i)) over the given log-terms; -inf for an empty range.
double log_sum_exp(std::span<const double> log_terms) noexcept;

/// Throws ConfigError unless 0 < p <= inf.
void require_exponent(double p, const char* what);

}  // namespace greedylab

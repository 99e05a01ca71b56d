#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "greedylab/core.hpp"

namespace greedylab {

struct Entry {
  Index index;
  Scalar value;
};

/// Finitely supported coefficient family on 1..N.
///
/// Entries are kept sorted by index with no duplicates. Explicit zeros may be
/// stored; every operation (equality included) treats them as absent.
class CoefficientVector {
 public:
  CoefficientVector() = default;
  explicit CoefficientVector(std::size_t ambient);
  CoefficientVector(std::size_t ambient, std::vector<Entry> entries);

  static CoefficientVector dense(std::span<const double> values);
  static CoefficientVector dense(std::span<const Scalar> values);
  static CoefficientVector dense(std::initializer_list<double> values);
  static CoefficientVector indicator(std::size_t ambient, std::span<const Index> set);

  [[nodiscard]] std::size_t ambient_size() const noexcept { return ambient_; }
  [[nodiscard]] std::span<const Entry> entries() const noexcept { return entries_; }
  [[nodiscard]] Scalar operator[](Index i) const;

  /// Number of nonzero coefficients.
  [[nodiscard]] std::size_t support_size() const noexcept;
  [[nodiscard]] std::vector<Index> support() const;
  [[nodiscard]] std::vector<Scalar> to_dense() const;
  [[nodiscard]] bool is_real() const noexcept;
  /// Largest modulus, 0 for the zero vector.
  [[nodiscard]] double sup_modulus() const noexcept;

  /// The same vector with explicit zeros dropped.
  [[nodiscard]] CoefficientVector pruned() const;
  /// Pointwise modulus |f|.
  [[nodiscard]] CoefficientVector modulus() const;

  friend bool operator==(const CoefficientVector& a, const CoefficientVector& b);

  friend CoefficientVector operator+(const CoefficientVector& a, const CoefficientVector& b);
  friend CoefficientVector operator-(const CoefficientVector& a, const CoefficientVector& b);
  friend CoefficientVector operator*(Scalar lambda, const CoefficientVector& f);

 private:
  std::size_t ambient_ = 0;
  std::vector<Entry> entries_;
};

}  // namespace greedylab

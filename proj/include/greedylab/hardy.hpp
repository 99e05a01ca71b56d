#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "greedylab/core.hpp"
#include "greedylab/json_io.hpp"

/// Dyadic square-function model of H_p on the d-dimensional polydisc.
///
/// The basis element attached to a dyadic rectangle R is the L_p-normalized
/// tensor Haar function x_R = h_R / |R|^{1/p}, and the quasi-norm of
/// f = Σ c_R x_R is the L_p norm of its square function
///     S(x) = (Σ_R |c_R|² |R|^{-2/p} 1_R(x))^{1/2}.
/// Every integrand is piecewise constant on a dyadic grid, so evaluation on
/// that grid is exact up to rounding.
namespace greedylab::hardy {

inline constexpr int kMaxDimension = 3;
/// Largest grid we are willing to allocate, in cells.
inline constexpr int kMaxGridLog2 = 26;

/// Product of dyadic intervals [k 2^{-j}, (k+1) 2^{-j}) in [0,1)^d.
class HaarRectangle {
 public:
  HaarRectangle() = default;
  HaarRectangle(std::vector<int> levels, std::vector<std::uint64_t> positions);

  [[nodiscard]] int dimension() const noexcept { return static_cast<int>(levels_.size()); }
  [[nodiscard]] std::span<const int> levels() const noexcept { return levels_; }
  [[nodiscard]] std::span<const std::uint64_t> positions() const noexcept { return positions_; }
  [[nodiscard]] int total_level() const noexcept;
  [[nodiscard]] int max_level() const noexcept;
  /// |R| = 2^{-Σ j_t}.
  [[nodiscard]] double measure() const noexcept;

  friend auto operator<=>(const HaarRectangle&, const HaarRectangle&) = default;

 private:
  std::vector<int> levels_;
  std::vector<std::uint64_t> positions_;
};

/// L_∞-normalized tensor Haar value on one cell of the 2^{J d} grid:
/// +1 on the left half of each axis interval, -1 on the right half, 0 outside.
/// Needs J >= level+1 on every axis.
int haar_value(const HaarRectangle& r, std::span<const std::uint64_t> cell, int J);

struct HaarTerm {
  HaarRectangle rect;
  Scalar coeff;
};

/// Finite expansion Σ c_R x_R on a declared grid level J.
struct HaarExpansion {
  double p = 1.0;
  int d = 1;
  int J = 0;
  std::vector<HaarTerm> terms;

  /// Throws ConfigError unless 0 < p <= 1, 1 <= d <= 3, each rectangle has
  /// dimension d and every per-axis level is at most J.
  void validate() const;
};

/// ‖Σ c_R x_R‖ in the square-function model. Empty expansions have norm 0.
/// The grid used is the coarsest one resolving every support, so refining J
/// leaves the result bit-identical.
double hp_norm(const HaarExpansion& e);

/// m pairwise disjoint congruent rectangles at the given level, row-major
/// (axis 0 slowest).
std::vector<HaarRectangle> family_disjoint(std::size_t m, int d, int level);

/// All dyadic rectangles of measure 2^{-k}: every level split (j_1..j_d) with
/// Σ j_t = k in lexicographic order, all positions row-major within a split.
/// Size C(k+d-1, d-1) 2^k.
std::vector<HaarRectangle> family_hyperbolic(int k, int d);

/// Expansion with every coefficient equal to 1.
HaarExpansion unit_expansion(std::span<const HaarRectangle> family, double p, int J);

/// Sequence-space view: rectangles whose per-axis levels are < L, numbered
/// 1..(2^L - 1)^d. Axis t contributes its heap index 2^j + k in 1..2^L - 1,
/// combined in mixed radix with axis 0 most significant.
class HaarIndexing {
 public:
  HaarIndexing(int d, int max_level);

  [[nodiscard]] int dimension() const noexcept { return d_; }
  [[nodiscard]] int max_level() const noexcept { return L_; }
  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] Index index_of(const HaarRectangle& r) const;
  [[nodiscard]] HaarRectangle rectangle(Index n) const;

 private:
  int d_;
  int L_;
  std::size_t radix_;
  std::size_t size_;
};

Json expansion_to_json(const HaarExpansion& e);
HaarExpansion expansion_from_json(const Json& j);

}  // namespace greedylab::hardy

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "greedylab/coefficients.hpp"
#include "greedylab/estimate.hpp"
#include "greedylab/random.hpp"
#include "greedylab/space.hpp"

/// Lattice sums and averages, Khintchine/Maurey sign averages, convexity
/// constants and strong absoluteness.
namespace greedylab::convexity {

/// Finite family (f_i) of vectors with a common ambient size in one space.
struct LatticeFamily {
  std::vector<CoefficientVector> vectors;
  spaces::SpaceSpec space;

  /// Throws ConfigError when empty or the ambient sizes differ.
  void validate() const;
  [[nodiscard]] std::size_t ambient() const { return vectors.front().ambient_size(); }
};

/// Coordinatewise (Σ|f_i|^r)^{1/r}; max when r = inf.
CoefficientVector lattice_r_sum(std::span<const CoefficientVector> fam, double r);
/// |A|^{-1/r} (Σ|f_i|^r)^{1/r}, r finite.
CoefficientVector lattice_r_average(std::span<const CoefficientVector> fam, double r);

/// Families larger than this are refused by sign enumeration.
inline constexpr std::size_t kMaxSignFamily = 20;

struct KhintchineResult {
  /// (Ave_ε |Σ ε_i f_i|^r)^{1/r}, coordinatewise.
  CoefficientVector average;
  /// (Σ|f_i|²)^{1/2}.
  CoefficientVector square;
  double norm_average = 0.0;
  double norm_square = 0.0;
  /// Extremes of square_n / average_n over the support: the family's own
  /// constants are C_r = 1/min_ratio and T_r = max_ratio.
  double min_ratio = 1.0;
  double max_ratio = 1.0;
};

/// Exact over real signs. Signs of vectors vanishing at a coordinate do not
/// change that coordinate, so each coordinate enumerates only the vectors
/// present there.
KhintchineResult khintchine_check(const LatticeFamily& fam, double r);

/// Range [lo, hi] of (Σ|a_i|²)^{1/2} / (E|Σ ε_i a_i|^r)^{1/r} over real
/// scalars: the sharp scalar Khintchine constants (Haagerup).
std::pair<double, double> scalar_khintchine_range(double r);

struct MaureyResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 1.0;
};

/// lhs = ‖(Σ|f_i|²)^{1/2}‖, rhs = (Ave_ε ‖Σ ε_i f_i‖^r)^{1/r}.
MaureyResult maurey_check(const LatticeFamily& fam, double r);

/// Source of vector families.
struct FamilySampler {
  std::string id;
  std::uint64_t seed = 0;
  std::function<std::optional<std::vector<CoefficientVector>>(std::size_t)> draw;
};

/// Up to max_size random vectors with random supports.
FamilySampler random_families(std::size_t n, std::size_t max_size, std::uint64_t seed);
/// Pairwise disjoint random supports (random values), up to max_size vectors.
FamilySampler disjoint_families(std::size_t n, std::size_t max_size, std::uint64_t seed);
/// Several copies of one random vector, plus noise on a shared support.
FamilySampler overlapping_families(std::size_t n, std::size_t max_size, std::uint64_t seed);
FamilySampler family_sampler_by_id(const std::string& id, std::size_t n, std::size_t max_size,
                                   std::uint64_t seed);

/// ‖(Σ|f_i|^r)^{1/r}‖ / (Σ‖f_i‖^r)^{1/r} over sampled families; upper_const
/// is an empirical lower bound on M^(r).
TwoSidedEstimate convexity_constant(const spaces::SpaceSpec& space, double r,
                                    const FamilySampler& sampler, std::size_t trials);

struct LConvexityReport {
  std::vector<double> eps;
  /// Configurations meeting the hypothesis, per ε.
  std::vector<std::size_t> tested;
  std::vector<std::size_t> violations;
  /// Largest grid ε with no violation found, if any.
  std::optional<double> best_eps;
};

/// For sampled f ≥ 0 and families f_i = f·1_{B_i}, checks
/// (1−ε)|A| f ≤ Σ f_i ⇒ ε‖f‖ ≤ max‖f_i‖ for every ε of the grid.
LConvexityReport l_convexity_probe(const spaces::SpaceSpec& space, std::span<const double> eps_grid,
                                   const random::VectorSampler& sampler, std::size_t trials);

struct AbsolutenessProfile {
  std::vector<double> R_values;
  std::vector<double> C_values;
  /// C(R) computed from vectors with support at most half the ambient size.
  std::vector<double> C_half;
  /// C(R) still grows when supports beyond half the ambient are admitted.
  std::vector<bool> diverged;
};

/// C(R) = max over sampled f with Σ|a_n| > ‖f‖/R of Σ|a_n| / sup|a_n|
/// (0 when no sample qualifies). Assumes ‖e_n‖ = 1.
AbsolutenessProfile strong_absoluteness_profile(const spaces::SpaceSpec& space,
                                                std::span<const double> R_values,
                                                const random::VectorSampler& sampler,
                                                std::size_t trials);

enum class SeriesVerdict { Converges, Diverges, Inconclusive };
std::string to_string(SeriesVerdict v);

struct SeriesReport {
  double partial_sum = 0.0;
  /// Growth fit of s: s_m ≈ C m^a (1 + log m)^b.
  double a = 0.0;
  double b = 0.0;
  SeriesVerdict verdict = SeriesVerdict::Inconclusive;
};

/// Σ_{m ≤ horizon} 1/s_m with a verdict from the fitted growth of s:
/// a > 1.1 converges, a < 0.9 diverges; when |a − 1| ≤ 0.1 the same margins
/// are applied to b. s must be positive and nondecreasing, s.size() ≥ horizon.
SeriesReport sa_series_test(std::span<const double> s, std::size_t horizon);

}  // namespace greedylab::convexity

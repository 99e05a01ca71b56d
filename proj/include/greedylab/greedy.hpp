#pragma once

#include <map>
#include <vector>

#include "greedylab/coefficients.hpp"
#include "greedylab/estimate.hpp"
#include "greedylab/random.hpp"
#include "greedylab/space.hpp"

/// Thresholding greedy algorithm and empirical estimates of its constants.
namespace greedylab::greedy {

/// 1 for a = 0, a/|a| otherwise.
Scalar sgn(Scalar a) noexcept;

/// Indices ordered by |a_i| descending, ties by index ascending. Zero
/// coefficients come last, in index order.
struct GreedyOrdering {
  CoefficientVector f;
  std::vector<Index> permutation;
};

GreedyOrdering greedy_ordering(const CoefficientVector& f);

/// A_m(f): the first m entries of the greedy ordering, returned ascending.
/// Only the support is sorted, so this stays cheap on large sparse vectors.
std::vector<Index> greedy_set(const CoefficientVector& f, std::size_t m);

/// 𝒢_m(f): f restricted to A_m(f).
CoefficientVector greedy_approximation(const CoefficientVector& f, std::size_t m);

/// ℛ_m(f) = (min_{n ∈ A_m} |a_n|) Σ_{n ∈ A_m} sgn(a_n) e_n.
CoefficientVector restricted_truncation(const CoefficientVector& f, std::size_t m);

/// S_A(f).
CoefficientVector coordinate_projection(const CoefficientVector& f, std::span<const Index> a);

/// Unimodular values on a finite index set.
class SignPattern {
 public:
  SignPattern() = default;
  explicit SignPattern(std::map<Index, Scalar> values);
  /// ε(f) = (sgn a_n) on the given set.
  static SignPattern of(const CoefficientVector& f, std::span<const Index> a);
  /// ε ≡ 1 on the set.
  static SignPattern ones(std::span<const Index> a);

  [[nodiscard]] const std::map<Index, Scalar>& values() const noexcept { return values_; }
  [[nodiscard]] Scalar at(Index n) const;

 private:
  std::map<Index, Scalar> values_;
};

/// 1_{ε,A} = Σ_{n ∈ A} ε_n e_n.
CoefficientVector indicator_sum(std::size_t ambient, const SignPattern& eps, std::span<const Index> a);

/// ‖a‖ / ‖b‖, through logs when the space needs them.
double norm_ratio(const spaces::SpaceSpec& space, const CoefficientVector& a,
                  const CoefficientVector& b);

/// Ratios ‖𝒢_m f‖/‖f‖ over `trials` draws and every m up to |supp f|.
/// upper_const is the empirical lower bound on the quasi-greedy constant.
TwoSidedEstimate quasi_greedy_constant(const spaces::SpaceSpec& space,
                                       const random::VectorSampler& sampler, std::size_t trials);

/// Same with ℛ_m: an empirical lower bound on C_r.
TwoSidedEstimate truncation_qg_constant(const spaces::SpaceSpec& space,
                                        const random::VectorSampler& sampler, std::size_t trials);

/// Sets with at most this many elements get exhaustive real sign enumeration.
inline constexpr std::size_t kExactSignLimit = 12;
inline constexpr std::size_t kMinSignSamples = std::size_t{1} << 12;

struct UccOptions {
  std::size_t ambient = 0;
  bool complex_signs = false;
};

/// max over sampled A and sign pairs of ‖1_{δ,A}‖/‖1_{ε,A}‖, one sample per set.
/// `sets` is drawn `set_trials` times.
TwoSidedEstimate ucc_constant(const spaces::SpaceSpec& space, const random::SetSampler& sets,
                              std::size_t set_trials, std::size_t sign_trials,
                              const UccOptions& options);

}  // namespace greedylab::greedy

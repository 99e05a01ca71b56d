#pragma once

#include <Eigen/Core>
#include <map>
#include <vector>

#include "greedylab/core.hpp"
#include "greedylab/json_io.hpp"

/// K-fold marriage (every index i ∈ I gets a partner in N_i, each partner
/// used at most K times, split into K injective classes) and Ω_δ sets.
namespace greedylab::matching {

struct MarriageInstance {
  /// sets[i-1] = N_i ⊆ 1..n; I = 1..sets.size().
  std::vector<std::vector<Index>> sets;
  std::size_t K = 1;

  void validate() const;
  /// Largest partner index mentioned.
  [[nodiscard]] std::size_t partner_count() const;
  [[nodiscard]] Json to_json() const;
  static MarriageInstance from_json(const Json& j);
};

struct MarriageSolution {
  /// cls[i-1] ∈ 1..K.
  std::vector<std::size_t> cls;
  /// partner[i-1] = ν_{cls(i)}(i).
  std::vector<Index> partner;

  [[nodiscard]] Json to_json() const;
};

struct HallReport {
  bool feasible = false;
  std::size_t flow = 0;
  /// When infeasible: F ⊆ I with |F| > K |∪_{i∈F} N_i|.
  std::vector<Index> violator;
  /// When feasible: the matched partner of each i.
  std::vector<Index> partner;
};

/// Max-flow source → i (1) → n (|I|) → sink (K). Feasible iff the flow is |I|;
/// otherwise the source side of the min cut yields the violator.
HallReport hall_defect_check(const MarriageInstance& inst);

/// Thrown by k_fold_marriage on infeasible instances.
class InfeasibleMarriage : public Error {
 public:
  InfeasibleMarriage(std::vector<Index> violator);
  [[nodiscard]] const std::vector<Index>& violator() const noexcept { return violator_; }

 private:
  std::vector<Index> violator_;
};

/// Flow, then the t-th partner (by index) of each n joins class t.
MarriageSolution k_fold_marriage(const MarriageInstance& inst);

bool verify_marriage(const MarriageInstance& inst, const MarriageSolution& sol);

struct BiorthogonalSample {
  /// Y(i, n) = x_n*(y_i), Z(i, n) = z_i*(x_n), 0-based storage.
  Eigen::MatrixXd Y;
  Eigen::MatrixXd Z;
  double delta = 0.0;
};

struct OmegaSets {
  /// {n : max_i |Y(i,n) Z(i,n)| ≥ δ}, 1-based.
  std::vector<Index> omega;
  /// Ω_i per row.
  std::vector<std::vector<Index>> rows;
};

OmegaSets omega_delta(const BiorthogonalSample& sample);

}  // namespace greedylab::matching

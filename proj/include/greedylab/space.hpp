#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "greedylab/coefficients.hpp"
#include "greedylab/json_io.hpp"
#include "greedylab/weight.hpp"

/// Concrete sequence spaces and their quasi-norms.
///
/// JSON schema (round-trips losslessly):
///   {"kind": "lp", "p": P}
///   {"kind": "lorentz", "p": P, "q": Q}
///   {"kind": "weak_lorentz", "weight": {"rule": ..., ...}}
///   {"kind": "direct_sum", "blocks": [{"size": n, "space": {...}}, ...], "outer": R?}
///   {"kind": "mixed", "outer": P, "inner": Q,
///    "blocks": "increasing" | {"uniform": n} | [n_1, n_2, ...]}
///   {"kind": "haar", "p": P, "d": D, "max_level": L}
/// Exponents are positive numbers or "inf".
namespace greedylab::spaces {

class SpaceSpec;

struct Lp {
  double p;
};

/// ‖f‖ = (Σ_m (a_m m^{1/p})^q / m)^{1/q} on the non-increasing rearrangement;
/// sup_m a_m m^{1/p} when q = inf.
struct LorentzPQ {
  double p;
  double q;
};

/// ‖f‖ = sup_m s_m a_m.
struct WeakLorentz {
  Weight weight;
};

struct DirectSumBlock;

/// Blocks occupy consecutive index ranges in order. The outer exponent
/// defaults to the smallest natural exponent among the blocks.
struct DirectSum {
  std::vector<DirectSumBlock> blocks;
  std::optional<double> outer;
};

/// (⊕_b ℓ_inner^{n_b})_{ℓ_outer}. The block layout is generated for the
/// ambient size: "increasing" gives 1,2,3,..., "uniform" gives n,n,...;
/// both truncate the last block. Explicit sizes must add up to the ambient.
struct Mixed {
  enum class Layout { Increasing, Uniform, Explicit };
  double outer;
  double inner;
  Layout layout = Layout::Increasing;
  std::size_t uniform_size = 1;
  std::vector<std::size_t> sizes = {};
};

/// Square-function model of H_p on [0,1)^d in the Haar tensor basis, indexed
/// by hardy::HaarIndexing(d, max_level).
struct HaarHp {
  double p;
  int d;
  int max_level;
};

class SpaceSpec {
 public:
  using Kind = std::variant<Lp, LorentzPQ, WeakLorentz, DirectSum, Mixed, HaarHp>;

  SpaceSpec(Kind kind);  // NOLINT(google-explicit-constructor)

  [[nodiscard]] const Kind& kind() const noexcept { return kind_; }
  [[nodiscard]] std::string kind_name() const;

  /// Lp, Lorentz and weak Lorentz spaces are rearrangement invariant.
  [[nodiscard]] bool is_symmetric() const noexcept;

  /// Ambient size forced by the block structure, if any.
  [[nodiscard]] std::optional<std::size_t> fixed_ambient() const;

  /// True when some exponent in the tree is below 1/4; norms are then
  /// accumulated in the log domain.
  [[nodiscard]] bool uses_log_domain() const noexcept;

  /// Exponent r for which the space is naturally r-normed: p for ℓ_p and the
  /// Haar model, min(p,q) for ℓ_{p,q}, 1 for weak Lorentz, min over parts for sums.
  [[nodiscard]] double natural_exponent() const noexcept;

  [[nodiscard]] Json to_json() const;
  static SpaceSpec from_json(const Json& j);

 private:
  Kind kind_;
};

struct DirectSumBlock {
  SpaceSpec space;
  std::size_t size;
};

SpaceSpec lp(double p);
SpaceSpec lorentz(double p, double q);
SpaceSpec weak_lorentz(Weight w);
SpaceSpec direct_sum(std::vector<DirectSumBlock> blocks, std::optional<double> outer = {});
SpaceSpec mixed_increasing(double outer, double inner);
SpaceSpec mixed_uniform(double outer, double inner, std::size_t block_size);
SpaceSpec haar(double p, int d, int max_level);

/// Sizes of the blocks of a mixed-norm space over 1..ambient.
std::vector<std::size_t> block_layout(const Mixed& m, std::size_t ambient);

/// |f| sorted descending, padded with zeros to the ambient size.
std::vector<double> nonincreasing_rearrangement(const CoefficientVector& f);

/// The quasi-norm of f. Throws ConfigError("block mismatch ...") when f does
/// not fit the block structure and NumericGuard when the value overflows.
double quasi_norm(const SpaceSpec& space, const CoefficientVector& f);

/// log ‖f‖ (-inf for f = 0), valid even when ‖f‖ itself would overflow.
double log_quasi_norm(const SpaceSpec& space, const CoefficientVector& f);

/// ‖1_A‖ for |A| = m in a symmetric space. Non-symmetric spaces throw.
double fundamental_function_unit_vectors(const SpaceSpec& space, std::size_t m);

}  // namespace greedylab::spaces

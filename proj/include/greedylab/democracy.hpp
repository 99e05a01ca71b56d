#pragma once

#include <optional>
#include <string>
#include <vector>

#include "greedylab/coefficients.hpp"
#include "greedylab/estimate.hpp"
#include "greedylab/random.hpp"
#include "greedylab/space.hpp"

/// Democracy functions, the parameters k_m and μ_m, Lebesgue constants and the
/// C m^a (1 + log m)^b regression.
///
/// Every implemented space is a lattice for indicator vectors: enlarging A
/// never decreases ‖1_A‖. So sup_{|A|≤m} and inf_{|A|≥m} are both attained
/// at |A| = m, and φ_l coincides with its equal-cardinality variant.
namespace greedylab::democracy {

enum class Strategy { Auto, Exhaustive, Families };

Strategy strategy_from_string(const std::string& s);
std::string to_string(Strategy s);

/// Exhaustive search is allowed up to this many subsets.
inline constexpr double kExhaustiveLimit = 1e5;

struct SearchOptions {
  Strategy strategy = Strategy::Auto;
  /// Needed for spaces without a fixed ambient size (mixed layouts); symmetric
  /// spaces default to m.
  std::size_t ambient = 0;
  std::uint64_t seed = 0;
  /// Random subsets tried on top of the structured candidates (Haar only).
  std::size_t restarts = 4;
};

struct DemocracyValue {
  double value = 0.0;
  std::vector<Index> witness;
  /// Closed form, exact block search or exhaustive enumeration. Otherwise the
  /// value is the best candidate found: a lower bound for φ_u, an upper bound
  /// for φ_l.
  bool exact = false;
  std::string method;
};

DemocracyValue phi_upper(const spaces::SpaceSpec& space, std::size_t m, const SearchOptions& options = {});
DemocracyValue phi_lower(const spaces::SpaceSpec& space, std::size_t m, const SearchOptions& options = {});
/// inf over |A| = m; identical to phi_lower on lattices, kept for clarity.
DemocracyValue phi_lower_eq(const spaces::SpaceSpec& space, std::size_t m, const SearchOptions& options = {});

/// Ambient size used for the search: fixed_ambient, else options.ambient,
/// else m for symmetric spaces.
std::size_t search_ambient(const spaces::SpaceSpec& space, std::size_t m, const SearchOptions& options);

/// sup_{l ∈ checkpoints, l ≤ m} φ_u(l)/φ_l(l). With no checkpoints every
/// l = 1..m is used, except in the Haar model, where powers of two, the
/// hyperbolic family sizes and m itself are used.
double democracy_parameter_mum(const spaces::SpaceSpec& space, std::size_t m,
                               const SearchOptions& options = {},
                               std::vector<std::size_t> checkpoints = {});

/// sup_{|A|≤m} ‖S_A f‖/‖f‖. Lattice systems short-circuit to 1; pass a
/// sampler and force_sampling to measure it instead.
struct KmOptions {
  std::optional<random::VectorSampler> sampler;
  std::size_t trials = 64;
  std::size_t sets_per_vector = 16;
  bool force_sampling = false;
};
double unconditionality_parameter_km(const spaces::SpaceSpec& space, std::size_t m,
                                     const KmOptions& options = {});

struct LebesgueOptions {
  SearchOptions search;
  std::optional<random::VectorSampler> sampler;
  std::size_t trials = 64;
  std::size_t competitors = 32;
};

/// mode "proxy": max{k_m, μ_m}. mode "direct": sampled sup of
/// ‖f − 𝒢_m f‖/‖f − S_B f‖ over |B| ≤ m, a lower bound on L_m.
double lebesgue_constant(const spaces::SpaceSpec& space, std::size_t m, const std::string& mode,
                         const LebesgueOptions& options = {});

struct FitResult {
  double a = 0.0;
  double b = 0.0;
  double C = 0.0;
  /// max |fitted/value − 1| over the fitted points.
  double residual = 0.0;
  [[nodiscard]] Json to_json() const;
};

/// Least squares of log v against (log m, log(1 + log m), 1), natural logs.
/// Needs at least 4 distinct m spanning two octaves.
FitResult fit_power_log(std::span<const double> m_values, std::span<const double> values);

/// v ≈ C (1 + log_base m)^b with b fixed. C from least squares in log space;
/// `residual` is the max |ln v − ln(C (1 + log_base m)^b)|.
FitResult fit_log_fixed(std::span<const double> m_values, std::span<const double> values, double b,
                        double log_base = 2.0);

/// v ≈ C (1 + log_base m)^b with b free; residual as in fit_log_fixed.
FitResult fit_log_free(std::span<const double> m_values, std::span<const double> values,
                       double log_base = 2.0);

struct DemocracyProfile {
  std::vector<std::size_t> m_values;
  std::vector<DemocracyValue> phi_u;
  std::vector<DemocracyValue> phi_l;
  std::vector<DemocracyValue> phi_l_eq;
  /// Running sup of φ_u/φ_l_eq over the profile's own m values.
  std::vector<double> mu;
  std::vector<double> k;
};

DemocracyProfile democracy_profile(const spaces::SpaceSpec& space, std::vector<std::size_t> m_values,
                                   const SearchOptions& options = {});

}  // namespace greedylab::democracy

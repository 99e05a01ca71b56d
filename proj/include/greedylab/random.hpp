#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "greedylab/coefficients.hpp"

/// Seeded sampling. Every random draw is keyed by (seed, trial): trial i uses
/// an engine seeded with derive_seed(seed, i), so results do not depend on
/// the order in which trials run.
namespace greedylab::random {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer of seed ^ golden-ratio multiple of i.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i) noexcept;

Engine engine_for(std::uint64_t seed, std::uint64_t trial);

/// Uniform double in [0, 1) from the top 53 bits; platform independent.
double uniform01(Engine& rng) noexcept;
std::size_t uniform_index(Engine& rng, std::size_t lo, std::size_t hi);
/// k distinct indices from 1..n, ascending.
std::vector<Index> random_subset(Engine& rng, std::size_t n, std::size_t k);

/// A source of coefficient vectors. draw(i) returns nullopt once exhausted.
struct VectorSampler {
  std::string id;
  std::uint64_t seed = 0;
  std::function<std::optional<CoefficientVector>(std::size_t)> draw;
};

/// A source of index sets. draw(i) returns nullopt once exhausted.
struct SetSampler {
  std::string id;
  std::uint64_t seed = 0;
  std::function<std::optional<std::vector<Index>>(std::size_t)> draw;
};

/// Random support of uniform size, coefficients uniform in [-1, 1]
/// (unimodular phases times uniform moduli when `complex_values`).
VectorSampler uniform_support(std::size_t n, std::uint64_t seed, bool complex_values = false);
/// Coefficients r^k along a random permutation with random signs, r in [0.3, 0.95).
VectorSampler geometric_profile(std::size_t n, std::uint64_t seed);
/// Two disjoint random blocks with moduli c(1+η) and c, η small: the greedy
/// algorithm has to choose between them.
VectorSampler two_block(std::size_t n, std::uint64_t seed);
/// Integer coefficients in {-3..3}: many ties.
VectorSampler tied_values(std::size_t n, std::uint64_t seed);
/// Cycles uniform_support, geometric_profile, two_block by trial index.
VectorSampler mixture(std::size_t n, std::uint64_t seed);
/// 1_{[m]} for m = 1..n, then exhausted.
VectorSampler initial_indicators(std::size_t n);
/// A fixed finite list.
VectorSampler from_list(std::vector<CoefficientVector> vectors, std::string id = "list");

/// Looks a sampler up by id: uniform-support, geometric, two-block, ties,
/// mixture, indicators.
VectorSampler sampler_by_id(const std::string& id, std::size_t n, std::uint64_t seed);

/// Random subsets of 1..n with sizes uniform in [1, max_size].
SetSampler random_sets(std::size_t n, std::size_t max_size, std::uint64_t seed);
SetSampler sets_from_list(std::vector<std::vector<Index>> sets);

}  // namespace greedylab::random

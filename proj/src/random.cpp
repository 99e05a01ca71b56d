#include "greedylab/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <unordered_set>

namespace greedylab::random {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i) noexcept {
  std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL * (i + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Engine engine_for(std::uint64_t seed, std::uint64_t trial) {
  return Engine(derive_seed(seed, trial));
}

double uniform01(Engine& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Rejection sampling keeps the draw unbiased.
std::size_t uniform_index(Engine& rng, std::size_t lo, std::size_t hi) {
  if (hi < lo) throw ConfigError("uniform_index: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return lo + rng();
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return lo + static_cast<std::size_t>(x % span);
}

std::vector<Index> random_subset(Engine& rng, std::size_t n, std::size_t k) {
  if (k > n) throw ConfigError("random_subset: k exceeds n");
  if (k * 4 < n) {
    // Sparse case: rejection keeps memory proportional to k.
    std::unordered_set<Index> seen;
    std::vector<Index> out;
    out.reserve(k);
    while (out.size() < k) {
      const Index i = uniform_index(rng, 1, n);
      if (seen.insert(i).second) out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  std::vector<Index> all(n);
  std::iota(all.begin(), all.end(), Index{1});
  for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[uniform_index(rng, i, n - 1)]);
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

namespace {

double random_sign(Engine& rng) { return (rng() >> 63) ? -1.0 : 1.0; }

void require_ambient(std::size_t n) {
  if (n == 0) throw ConfigError("sampler needs a positive ambient size");
}

}  // namespace

VectorSampler uniform_support(std::size_t n, std::uint64_t seed, bool complex_values) {
  require_ambient(n);
  return {complex_values ? "uniform-support-complex" : "uniform-support", seed,
          [=](std::size_t trial) -> std::optional<CoefficientVector> {
            auto rng = engine_for(seed, trial);
            const auto k = uniform_index(rng, 1, n);
            std::vector<Entry> e;
            for (Index i : random_subset(rng, n, k)) {
              if (complex_values) {
                const double r = uniform01(rng);
                const double theta = 2.0 * std::numbers::pi * uniform01(rng);
                e.push_back({i, std::polar(r, theta)});
              } else {
                e.push_back({i, 2.0 * uniform01(rng) - 1.0});
              }
            }
            return CoefficientVector(n, std::move(e));
          }};
}

VectorSampler geometric_profile(std::size_t n, std::uint64_t seed) {
  require_ambient(n);
  return {"geometric", seed, [=](std::size_t trial) -> std::optional<CoefficientVector> {
            auto rng = engine_for(seed, trial);
            const double r = 0.3 + 0.65 * uniform01(rng);
            std::vector<Index> order(n);
            std::iota(order.begin(), order.end(), Index{1});
            for (std::size_t i = 0; i + 1 < n; ++i) {
              std::swap(order[i], order[uniform_index(rng, i, n - 1)]);
            }
            std::vector<Entry> e;
            double value = 1.0;
            for (Index i : order) {
              e.push_back({i, random_sign(rng) * value});
              value *= r;
            }
            std::sort(e.begin(), e.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
            return CoefficientVector(n, std::move(e));
          }};
}

VectorSampler two_block(std::size_t n, std::uint64_t seed) {
  require_ambient(n);
  return {"two-block", seed, [=](std::size_t trial) -> std::optional<CoefficientVector> {
            auto rng = engine_for(seed, trial);
            const auto k = uniform_index(rng, 1, n);
            const auto chosen = random_subset(rng, n, k);
            // Split the support at a random point into the larger block A and the rest.
            const auto cut = uniform_index(rng, 1, k);
            std::vector<std::size_t> order(k);
            std::iota(order.begin(), order.end(), std::size_t{0});
            for (std::size_t i = 0; i + 1 < k; ++i) std::swap(order[i], order[uniform_index(rng, i, k - 1)]);
            const double eta = 1e-3 + 0.05 * uniform01(rng);
            std::vector<Entry> e(k);
            for (std::size_t t = 0; t < k; ++t) {
              const double mod = t < cut ? 1.0 + eta : 1.0;
              e[order[t]] = {chosen[order[t]], random_sign(rng) * mod};
            }
            return CoefficientVector(n, std::move(e));
          }};
}

VectorSampler tied_values(std::size_t n, std::uint64_t seed) {
  require_ambient(n);
  return {"ties", seed, [=](std::size_t trial) -> std::optional<CoefficientVector> {
            auto rng = engine_for(seed, trial);
            std::vector<Entry> e;
            for (Index i = 1; i <= n; ++i) {
              const auto v = static_cast<int>(uniform_index(rng, 0, 6)) - 3;
              if (v != 0) e.push_back({i, static_cast<double>(v)});
            }
            return CoefficientVector(n, std::move(e));
          }};
}

VectorSampler mixture(std::size_t n, std::uint64_t seed) {
  require_ambient(n);
  auto a = uniform_support(n, seed);
  auto b = geometric_profile(n, derive_seed(seed, 0xb10c));
  auto c = two_block(n, derive_seed(seed, 0x2b10c));
  return {"mixture", seed, [=](std::size_t trial) -> std::optional<CoefficientVector> {
            switch (trial % 3) {
              case 0: return a.draw(trial / 3);
              case 1: return b.draw(trial / 3);
              default: return c.draw(trial / 3);
            }
          }};
}

VectorSampler initial_indicators(std::size_t n) {
  require_ambient(n);
  return {"indicators", 0, [=](std::size_t trial) -> std::optional<CoefficientVector> {
            if (trial >= n) return std::nullopt;
            std::vector<Entry> e;
            for (Index i = 1; i <= trial + 1; ++i) e.push_back({i, 1.0});
            return CoefficientVector(n, std::move(e));
          }};
}

VectorSampler from_list(std::vector<CoefficientVector> vectors, std::string id) {
  auto shared = std::make_shared<const std::vector<CoefficientVector>>(std::move(vectors));
  return {std::move(id), 0, [shared](std::size_t trial) -> std::optional<CoefficientVector> {
            if (trial >= shared->size()) return std::nullopt;
            return (*shared)[trial];
          }};
}

VectorSampler sampler_by_id(const std::string& id, std::size_t n, std::uint64_t seed) {
  if (id == "uniform-support") return uniform_support(n, seed);
  if (id == "uniform-support-complex") return uniform_support(n, seed, true);
  if (id == "geometric") return geometric_profile(n, seed);
  if (id == "two-block") return two_block(n, seed);
  if (id == "ties") return tied_values(n, seed);
  if (id == "mixture") return mixture(n, seed);
  if (id == "indicators") return initial_indicators(n);
  throw ConfigError("unknown sampler '" + id + "'");
}

SetSampler random_sets(std::size_t n, std::size_t max_size, std::uint64_t seed) {
  require_ambient(n);
  if (max_size == 0 || max_size > n) throw ConfigError("random_sets: max_size must lie in 1..n");
  return {"random-sets", seed, [=](std::size_t trial) -> std::optional<std::vector<Index>> {
            auto rng = engine_for(seed, trial);
            return random_subset(rng, n, uniform_index(rng, 1, max_size));
          }};
}

SetSampler sets_from_list(std::vector<std::vector<Index>> sets) {
  auto shared = std::make_shared<const std::vector<std::vector<Index>>>(std::move(sets));
  return {"list", 0, [shared](std::size_t trial) -> std::optional<std::vector<Index>> {
            if (trial >= shared->size()) return std::nullopt;
            return (*shared)[trial];
          }};
}

}  // namespace greedylab::random

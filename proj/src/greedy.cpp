#include "greedylab/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "greedylab/parallel.hpp"

namespace greedylab::greedy {

Scalar sgn(Scalar a) noexcept {
  const double r = std::abs(a);
  return r == 0.0 ? Scalar(1.0) : a / r;
}

namespace {

struct Ranked {
  Index index;
  double modulus;
  Scalar value;
};

bool before(const Ranked& a, const Ranked& b) {
  if (a.modulus != b.modulus) return a.modulus > b.modulus;
  return a.index < b.index;
}

void require_m(const CoefficientVector& f, std::size_t m) {
  if (m > f.ambient_size()) {
    throw ConfigError("m = " + std::to_string(m) + " exceeds the ambient size " +
                      std::to_string(f.ambient_size()));
  }
}

// Nonzero entries in greedy order.
std::vector<Ranked> ranked_support(const CoefficientVector& f) {
  std::vector<Ranked> r;
  r.reserve(f.entries().size());
  for (const auto& e : f.entries()) {
    const double mod = std::abs(e.value);
    if (mod != 0.0) r.push_back({e.index, mod, e.value});
  }
  std::sort(r.begin(), r.end(), before);
  return r;
}

// The first `count` indices of 1..N outside the (ascending) support.
void append_zero_indices(const CoefficientVector& f, std::size_t count, std::vector<Index>& out) {
  const auto support = f.support();
  std::size_t s = 0;
  for (Index i = 1; count > 0 && i <= f.ambient_size(); ++i) {
    while (s < support.size() && support[s] < i) ++s;
    if (s < support.size() && support[s] == i) continue;
    out.push_back(i);
    --count;
  }
}

}  // namespace

GreedyOrdering greedy_ordering(const CoefficientVector& f) {
  GreedyOrdering g{f, {}};
  g.permutation.reserve(f.ambient_size());
  const auto ranked = ranked_support(f);
  for (const auto& r : ranked) g.permutation.push_back(r.index);
  append_zero_indices(f, f.ambient_size() - ranked.size(), g.permutation);
  return g;
}

std::vector<Index> greedy_set(const CoefficientVector& f, std::size_t m) {
  require_m(f, m);
  const auto ranked = ranked_support(f);
  std::vector<Index> a;
  a.reserve(m);
  for (std::size_t k = 0; k < std::min(m, ranked.size()); ++k) a.push_back(ranked[k].index);
  if (m > ranked.size()) append_zero_indices(f, m - ranked.size(), a);
  std::sort(a.begin(), a.end());
  return a;
}

CoefficientVector greedy_approximation(const CoefficientVector& f, std::size_t m) {
  const auto a = greedy_set(f, m);
  return coordinate_projection(f, a);
}

CoefficientVector restricted_truncation(const CoefficientVector& f, std::size_t m) {
  require_m(f, m);
  const auto ranked = ranked_support(f);
  // Past the support the m-th largest modulus is 0, and so is ℛ_m(f).
  if (m == 0 || m > ranked.size()) return CoefficientVector(f.ambient_size());
  const double level = ranked[m - 1].modulus;
  std::vector<Entry> e;
  e.reserve(m);
  for (std::size_t k = 0; k < m; ++k) e.push_back({ranked[k].index, level * sgn(ranked[k].value)});
  std::sort(e.begin(), e.end(), [](const Entry& x, const Entry& y) { return x.index < y.index; });
  return CoefficientVector(f.ambient_size(), std::move(e));
}

CoefficientVector coordinate_projection(const CoefficientVector& f, std::span<const Index> a) {
  std::vector<Index> set(a.begin(), a.end());
  std::sort(set.begin(), set.end());
  for (Index i : set) {
    if (i < 1 || i > f.ambient_size()) throw ConfigError("projection index out of range");
  }
  std::vector<Entry> e;
  for (const auto& entry : f.entries()) {
    if (std::binary_search(set.begin(), set.end(), entry.index)) e.push_back(entry);
  }
  return CoefficientVector(f.ambient_size(), std::move(e));
}

SignPattern::SignPattern(std::map<Index, Scalar> values) : values_(std::move(values)) {
  for (const auto& [i, v] : values_) {
    if (std::abs(std::abs(v) - 1.0) > 1e-12) {
      throw ConfigError("sign at index " + std::to_string(i) + " is not unimodular");
    }
  }
}

SignPattern SignPattern::of(const CoefficientVector& f, std::span<const Index> a) {
  std::map<Index, Scalar> v;
  for (Index i : a) v[i] = sgn(f[i]);
  return SignPattern(std::move(v));
}

SignPattern SignPattern::ones(std::span<const Index> a) {
  std::map<Index, Scalar> v;
  for (Index i : a) v[i] = 1.0;
  return SignPattern(std::move(v));
}

Scalar SignPattern::at(Index n) const {
  const auto it = values_.find(n);
  if (it == values_.end()) throw ConfigError("sign pattern undefined at " + std::to_string(n));
  return it->second;
}

CoefficientVector indicator_sum(std::size_t ambient, const SignPattern& eps, std::span<const Index> a) {
  std::vector<Entry> e;
  e.reserve(a.size());
  for (Index i : a) e.push_back({i, eps.at(i)});
  std::sort(e.begin(), e.end(), [](const Entry& x, const Entry& y) { return x.index < y.index; });
  return CoefficientVector(ambient, std::move(e));
}

double norm_ratio(const spaces::SpaceSpec& space, const CoefficientVector& a,
                  const CoefficientVector& b) {
  if (!space.uses_log_domain()) return spaces::quasi_norm(space, a) / spaces::quasi_norm(space, b);
  const double la = spaces::log_quasi_norm(space, a);
  const double lb = spaces::log_quasi_norm(space, b);
  if (la == lb) return 1.0;
  return std::exp(la - lb);
}

namespace {

template <class Operator>
TwoSidedEstimate operator_constant(const spaces::SpaceSpec& space,
                                   const random::VectorSampler& sampler, std::size_t trials,
                                   Operator op) {
  if (trials == 0) throw ConfigError("trials must be at least 1");
  auto per_trial = parallel_map(trials, default_threads(), [&](std::size_t t) {
    const auto f = sampler.draw(t);
    if (!f) throw ConfigError("sampler exhausted after " + std::to_string(t) + " draws");
    std::vector<std::pair<std::size_t, double>> out;
    const std::size_t support = f->support_size();
    if (support == 0) return out;
    for (std::size_t m = 1; m <= support; ++m) out.emplace_back(m, norm_ratio(space, op(*f, m), *f));
    return out;
  });
  TwoSidedEstimate est;
  est.sampler = sampler.id;
  est.seed = sampler.seed;
  est.trials = trials;
  for (const auto& rows : per_trial) {
    for (auto [m, v] : rows) est.record(m, v);
    est.evaluations += 2 * rows.size();
  }
  if (est.samples.empty()) throw ConfigError("sampler produced only zero vectors");
  return est;
}

}  // namespace

TwoSidedEstimate quasi_greedy_constant(const spaces::SpaceSpec& space,
                                       const random::VectorSampler& sampler, std::size_t trials) {
  return operator_constant(space, sampler, trials, greedy_approximation);
}

TwoSidedEstimate truncation_qg_constant(const spaces::SpaceSpec& space,
                                        const random::VectorSampler& sampler, std::size_t trials) {
  return operator_constant(space, sampler, trials, restricted_truncation);
}

TwoSidedEstimate ucc_constant(const spaces::SpaceSpec& space, const random::SetSampler& sets,
                              std::size_t set_trials, std::size_t sign_trials,
                              const UccOptions& options) {
  if (set_trials == 0) throw ConfigError("trials must be at least 1");
  if (sign_trials == 0) throw ConfigError("sign_trials must be at least 1");
  const std::size_t ambient = space.fixed_ambient().value_or(options.ambient);
  if (ambient == 0) throw ConfigError("ucc_constant needs an ambient size");

  struct Row {
    std::size_t size;
    double ratio;
    std::size_t evaluations;
    bool exact;
  };
  auto rows = parallel_map(set_trials, default_threads(), [&](std::size_t t) {
    auto a = sets.draw(t);
    if (!a) throw ConfigError("set sampler exhausted after " + std::to_string(t) + " draws");
    std::sort(a->begin(), a->end());
    a->erase(std::unique(a->begin(), a->end()), a->end());
    const std::size_t k = a->size();
    if (k == 0) return Row{0, 1.0, 0, true};
    const bool exact = k <= kExactSignLimit && !options.complex_signs;
    const std::size_t count = exact ? std::size_t{1} << k : std::max(sign_trials, kMinSignSamples);
    auto rng = random::engine_for(sets.seed ^ 0x5157a9e1ULL, t);
    double lo = kInfinity, hi = 0.0;
    std::vector<Entry> e(k);
    for (std::size_t s = 0; s < count; ++s) {
      for (std::size_t i = 0; i < k; ++i) {
        Scalar v;
        if (exact) {
          v = (s >> i) & 1U ? -1.0 : 1.0;
        } else if (options.complex_signs) {
          v = std::polar(1.0, 2.0 * std::numbers::pi * random::uniform01(rng));
        } else {
          v = (rng() >> 63) ? -1.0 : 1.0;
        }
        e[i] = {(*a)[i], v};
      }
      const CoefficientVector x(ambient, e);
      const double value = space.uses_log_domain() ? spaces::log_quasi_norm(space, x)
                                                   : spaces::quasi_norm(space, x);
      lo = std::min(lo, value);
      hi = std::max(hi, value);
    }
    double ratio;
    if (space.uses_log_domain()) {
      ratio = hi == lo ? 1.0 : std::exp(hi - lo);
    } else {
      ratio = hi / lo;
    }
    return Row{k, ratio, count, exact};
  });

  TwoSidedEstimate est;
  est.sampler = sets.id;
  est.seed = sets.seed;
  est.trials = set_trials;
  est.exact = true;
  for (const auto& r : rows) {
    est.record(r.size, r.ratio);
    est.evaluations += r.evaluations;
    est.exact = est.exact && r.exact;
  }
  return est;
}

}  // namespace greedylab::greedy

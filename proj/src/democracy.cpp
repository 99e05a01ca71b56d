#include "greedylab/democracy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "greedylab/greedy.hpp"
#include "greedylab/hardy.hpp"
#include "greedylab/parallel.hpp"

namespace greedylab::democracy {

namespace sp = greedylab::spaces;

Strategy strategy_from_string(const std::string& s) {
  if (s == "auto") return Strategy::Auto;
  if (s == "exhaustive") return Strategy::Exhaustive;
  if (s == "families") return Strategy::Families;
  throw ConfigError("unknown strategy '" + s + "' (expected auto, exhaustive or families)");
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Auto: return "auto";
    case Strategy::Exhaustive: return "exhaustive";
    case Strategy::Families: return "families";
  }
  return "auto";
}

namespace {

std::vector<Index> first_indices(std::size_t m) {
  std::vector<Index> a(m);
  std::iota(a.begin(), a.end(), Index{1});
  return a;
}

double indicator_norm(const sp::SpaceSpec& space, std::size_t ambient, std::span<const Index> a) {
  return sp::quasi_norm(space, CoefficientVector::indicator(ambient, a));
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

bool better(double candidate, double incumbent, bool upper) {
  return upper ? candidate > incumbent : candidate < incumbent;
}

DemocracyValue exhaustive(const sp::SpaceSpec& space, std::size_t ambient, std::size_t m, bool upper) {
  if (binomial(ambient, m) > kExhaustiveLimit) {
    throw ConfigError("exhaustive search over C(" + std::to_string(ambient) + ", " +
                      std::to_string(m) + ") subsets exceeds the limit of 1e5");
  }
  DemocracyValue best{upper ? -1.0 : kInfinity, {}, true, "exhaustive"};
  std::vector<Index> a = first_indices(m);
  while (true) {
    const double v = indicator_norm(space, ambient, a);
    if (best.witness.empty() || better(v, best.value, upper)) {
      best.value = v;
      best.witness = a;
    }
    // Next combination in lexicographic order.
    std::size_t i = m;
    while (i > 0 && a[i - 1] == ambient - m + i) --i;
    if (i == 0) break;
    ++a[i - 1];
    for (std::size_t j = i; j < m; ++j) a[j] = a[j - 1] + 1;
  }
  return best;
}

// Extremal ‖1_A‖ over |A| = c for c = 0..cmax in a space whose norm depends
// only on how many indices each block receives. Exact: the outer quasi-norm is
// increasing in every block norm, so block-wise extremes combine.
struct BlockProfile {
  std::vector<double> value;
  std::vector<std::vector<Index>> witness;
};

BlockProfile block_profile(const sp::SpaceSpec& space, std::size_t n, std::size_t cmax, bool upper);

bool is_block_space(const sp::SpaceSpec& s) {
  return std::holds_alternative<sp::DirectSum>(s.kind()) || std::holds_alternative<sp::Mixed>(s.kind());
}

BlockProfile block_profile(const sp::SpaceSpec& space, std::size_t n, std::size_t cmax, bool upper) {
  cmax = std::min(cmax, n);
  BlockProfile out;
  if (space.is_symmetric()) {
    for (std::size_t c = 0; c <= cmax; ++c) {
      out.value.push_back(c == 0 ? 0.0 : sp::fundamental_function_unit_vectors(space, c));
      out.witness.push_back(first_indices(c));
    }
    return out;
  }
  if (!is_block_space(space)) {
    throw ConfigError("block search does not support " + space.kind_name() + " blocks");
  }

  std::vector<const sp::SpaceSpec*> parts;
  std::vector<std::size_t> sizes;
  double outer;
  std::vector<sp::SpaceSpec> owned;
  if (const auto* ds = std::get_if<sp::DirectSum>(&space.kind())) {
    for (const auto& b : ds->blocks) {
      parts.push_back(&b.space);
      sizes.push_back(b.size);
    }
    std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    if (total != n) {
      throw ConfigError("block mismatch: direct_sum expects ambient size " + std::to_string(total) +
                        ", got " + std::to_string(n));
    }
    outer = ds->outer.value_or(kInfinity);
    if (!ds->outer) {
      for (const auto& b : ds->blocks) outer = std::min(outer, b.space.natural_exponent());
    }
  } else {
    const auto& mx = std::get<sp::Mixed>(space.kind());
    sizes = sp::block_layout(mx, n);
    owned.push_back(sp::lp(mx.inner));
    parts.assign(sizes.size(), &owned.front());
    outer = mx.outer;
  }

  // Profiles of identical symmetric blocks are shared.
  std::vector<BlockProfile> sub;
  sub.reserve(parts.size());
  for (std::size_t b = 0; b < parts.size(); ++b) {
    const std::size_t cap = std::min(cmax, sizes[b]);
    if (b > 0 && parts[b] == parts[b - 1] && parts[b]->is_symmetric() && sub[b - 1].value.size() > cap) {
      BlockProfile copy = sub[b - 1];
      copy.value.resize(cap + 1);
      copy.witness.resize(cap + 1);
      sub.push_back(std::move(copy));
    } else {
      sub.push_back(block_profile(*parts[b], sizes[b], cap, upper));
    }
  }

  // key(c) over the first j blocks: Σ g^r, or max g when r = ∞.
  auto key_of = [&](double g) { return outer == kInfinity ? g : std::pow(g, outer); };
  const double unset = upper ? -kInfinity : kInfinity;
  std::vector<double> dp(cmax + 1, unset);
  dp[0] = 0.0;
  std::vector<std::vector<std::size_t>> choice(parts.size(), std::vector<std::size_t>(cmax + 1, 0));
  std::size_t reach = 0;
  for (std::size_t b = 0; b < parts.size(); ++b) {
    std::vector<double> next(cmax + 1, unset);
    const std::size_t cap = sub[b].value.size() - 1;
    for (std::size_t c = 0; c <= std::min(cmax, reach + cap); ++c) {
      // Descending, so ties put indices in later blocks.
      for (std::size_t here = std::min(cap, c) + 1; here-- > 0;) {
        const std::size_t before = c - here;
        if (before > reach || dp[before] == unset) continue;
        const double k = key_of(sub[b].value[here]);
        const double total = outer == kInfinity ? std::max(dp[before], k) : dp[before] + k;
        if (next[c] == unset || better(total, next[c], upper)) {
          next[c] = total;
          choice[b][c] = here;
        }
      }
    }
    dp = std::move(next);
    reach = std::min(cmax, reach + cap);
  }

  std::vector<std::size_t> offsets(sizes.size(), 0);
  for (std::size_t b = 1; b < sizes.size(); ++b) offsets[b] = offsets[b - 1] + sizes[b - 1];
  for (std::size_t c = 0; c <= cmax; ++c) {
    std::vector<Index> w;
    std::size_t left = c;
    for (std::size_t b = parts.size(); b-- > 0;) {
      const std::size_t here = choice[b][left];
      for (std::size_t t = 0; t < here; ++t) w.push_back(offsets[b] + sub[b].witness[here][t]);
      left -= here;
    }
    std::sort(w.begin(), w.end());
    out.value.push_back(c == 0 ? 0.0 : indicator_norm(space, n, w));
    out.witness.push_back(std::move(w));
  }
  return out;
}

// Haar model: structured candidate families plus random restarts.
struct HaarSearch {
  const sp::HaarHp& h;
  hardy::HaarIndexing indexing;

  explicit HaarSearch(const sp::HaarHp& haar) : h(haar), indexing(haar.d, haar.max_level) {}

  double norm(std::span<const hardy::HaarRectangle> family) const {
    return hardy::hp_norm(hardy::unit_expansion(family, h.p, h.max_level));
  }

  std::vector<Index> indices(std::span<const hardy::HaarRectangle> family) const {
    std::vector<Index> w;
    for (const auto& r : family) w.push_back(indexing.index_of(r));
    std::sort(w.begin(), w.end());
    return w;
  }

  // Smallest per-axis level ℓ < L with 2^{ℓ d} ≥ m.
  std::optional<int> disjoint_level(std::size_t m) const {
    for (int level = 0; level < h.max_level; ++level) {
      if (level * h.d >= 63 || (std::size_t{1} << (level * h.d)) >= m) return level;
    }
    return std::nullopt;
  }

  DemocracyValue upper(std::size_t m) const {
    DemocracyValue best{-1.0, {}, false, "families"};
    const double bound = std::pow(static_cast<double>(m), 1.0 / h.p);
    if (const auto level = disjoint_level(m)) {
      const auto fam = hardy::family_disjoint(m, h.d, *level);
      best = {norm(fam), indices(fam), false, "family_disjoint"};
    } else {
      // Too many rectangles for one disjoint layer: fall back to heap order.
      std::vector<hardy::HaarRectangle> fam;
      for (Index n = 1; n <= m; ++n) fam.push_back(indexing.rectangle(n));
      best = {norm(fam), first_indices(m), false, "heap_prefix"};
    }
    // ‖1_A‖^p ≤ Σ ‖x_R‖^p = m, so reaching m^{1/p} settles the sup.
    best.exact = best.value >= bound * (1.0 - 1e-12);
    return best;
  }

  DemocracyValue lower(std::size_t m, std::uint64_t seed, std::size_t restarts) const {
    DemocracyValue best{kInfinity, {}, false, "families"};
    auto consider = [&](std::vector<hardy::HaarRectangle> fam, const char* method) {
      const double v = norm(fam);
      if (v < best.value) best = {v, indices(fam), false, method};
    };
    int k0 = 0;
    while (hardy::family_hyperbolic(k0, h.d).size() < m && k0 < h.max_level) ++k0;
    for (int k = k0; k < std::min(h.max_level, k0 + 4); ++k) {
      auto fam = hardy::family_hyperbolic(k, h.d);
      if (fam.size() < m) continue;
      fam.resize(m);
      consider(std::move(fam), "family_hyperbolic");
    }
    if (const auto level = disjoint_level(m)) consider(hardy::family_disjoint(m, h.d, *level), "family_disjoint");
    for (std::size_t r = 0; r < restarts; ++r) {
      auto rng = random::engine_for(seed, r);
      std::vector<hardy::HaarRectangle> fam;
      for (Index n : random::random_subset(rng, indexing.size(), m)) fam.push_back(indexing.rectangle(n));
      consider(std::move(fam), "random_restart");
    }
    return best;
  }
};

DemocracyValue search(const sp::SpaceSpec& space, std::size_t m, const SearchOptions& options, bool upper) {
  const std::size_t ambient = search_ambient(space, m, options);
  if (m == 0) return {0.0, {}, true, "empty"};
  const bool feasible = binomial(ambient, m) <= kExhaustiveLimit;
  if (options.strategy == Strategy::Exhaustive) return exhaustive(space, ambient, m, upper);

  if (space.is_symmetric()) {
    return {sp::fundamental_function_unit_vectors(space, m), first_indices(m), true, "closed_form"};
  }
  if (is_block_space(space)) {
    auto prof = block_profile(space, ambient, m, upper);
    return {prof.value[m], std::move(prof.witness[m]), true, "block_search"};
  }
  const auto& h = std::get<sp::HaarHp>(space.kind());
  if (options.strategy == Strategy::Auto && feasible) return exhaustive(space, ambient, m, upper);
  const HaarSearch hs(h);
  return upper ? hs.upper(m) : hs.lower(m, random::derive_seed(options.seed, m), options.restarts);
}

void check_fit_input(std::span<const double> m, std::span<const double> v) {
  if (m.size() != v.size()) throw ConfigError("fit: m_values and values differ in length");
  std::set<double> distinct(m.begin(), m.end());
  if (distinct.size() < 4) throw ConfigError("fit needs at least 4 distinct m values");
  if (*distinct.begin() < 1.0) throw ConfigError("fit needs m >= 1");
  if (*distinct.rbegin() < 4.0 * *distinct.begin()) throw ConfigError("fit needs m values spanning two octaves");
  for (double x : v) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError("fit needs positive finite values");
  }
}

}  // namespace

std::size_t search_ambient(const sp::SpaceSpec& space, std::size_t m, const SearchOptions& options) {
  std::size_t ambient = options.ambient;
  if (const auto fixed = space.fixed_ambient()) {
    if (ambient != 0 && ambient != *fixed) {
      throw ConfigError("block mismatch: space has ambient size " + std::to_string(*fixed) +
                        ", requested " + std::to_string(ambient));
    }
    ambient = *fixed;
  } else if (const auto* h = std::get_if<sp::HaarHp>(&space.kind())) {
    ambient = hardy::HaarIndexing(h->d, h->max_level).size();
  }
  if (ambient == 0) {
    if (!space.is_symmetric()) throw ConfigError(space.kind_name() + " space needs an ambient size");
    ambient = m;
  }
  if (m > ambient) {
    throw ConfigError("m = " + std::to_string(m) + " exceeds the ambient size " + std::to_string(ambient));
  }
  return ambient;
}

DemocracyValue phi_upper(const sp::SpaceSpec& space, std::size_t m, const SearchOptions& options) {
  return search(space, m, options, true);
}

DemocracyValue phi_lower(const sp::SpaceSpec& space, std::size_t m, const SearchOptions& options) {
  return search(space, m, options, false);
}

DemocracyValue phi_lower_eq(const sp::SpaceSpec& space, std::size_t m, const SearchOptions& options) {
  return search(space, m, options, false);
}

double democracy_parameter_mum(const sp::SpaceSpec& space, std::size_t m, const SearchOptions& options,
                               std::vector<std::size_t> checkpoints) {
  if (m == 0) throw ConfigError("m >= 1 required");
  (void)search_ambient(space, m, options);
  if (space.is_symmetric()) return 1.0;
  if (checkpoints.empty()) {
    if (const auto* h = std::get_if<sp::HaarHp>(&space.kind())) {
      for (std::size_t l = 1; l <= m; l *= 2) checkpoints.push_back(l);
      for (int k = 0; k < h->max_level; ++k) {
        const auto size = hardy::family_hyperbolic(k, h->d).size();
        if (size <= m) checkpoints.push_back(size);
      }
      checkpoints.push_back(m);
    } else {
      checkpoints = first_indices(m);
    }
  }
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  std::erase_if(checkpoints, [&](std::size_t l) { return l == 0 || l > m; });

  if (is_block_space(space) && options.strategy != Strategy::Exhaustive) {
    const std::size_t ambient = search_ambient(space, m, options);
    const auto up = block_profile(space, ambient, m, true);
    const auto lo = block_profile(space, ambient, m, false);
    double mu = 1.0;
    for (std::size_t l : checkpoints) mu = std::max(mu, up.value[l] / lo.value[l]);
    return mu;
  }
  const auto ratios = parallel_map(checkpoints.size(), default_threads(), [&](std::size_t i) {
    const std::size_t l = checkpoints[i];
    return phi_upper(space, l, options).value / phi_lower_eq(space, l, options).value;
  });
  return std::max(1.0, *std::max_element(ratios.begin(), ratios.end()));
}

double unconditionality_parameter_km(const sp::SpaceSpec& space, std::size_t m, const KmOptions& options) {
  if (m == 0) throw ConfigError("m >= 1 required");
  // Lattice norms (the Haar square function included) only see |coefficients|,
  // and dropping coordinates never increases them.
  if (!options.force_sampling) return 1.0;
  if (!options.sampler) throw ConfigError("k_m sampling needs a sampler");
  if (options.trials == 0) throw ConfigError("trials must be at least 1");
  const auto& sampler = *options.sampler;
  const auto rows = parallel_map(options.trials, default_threads(), [&](std::size_t t) {
    const auto f = sampler.draw(t);
    if (!f) throw ConfigError("sampler exhausted after " + std::to_string(t) + " draws");
    const auto supp = f->support();
    if (supp.empty()) return 0.0;
    auto rng = random::engine_for(sampler.seed ^ 0x6b6dULL, t);
    double best = 0.0;
    for (std::size_t s = 0; s < options.sets_per_vector; ++s) {
      const std::size_t size = random::uniform_index(rng, 1, std::min(m, supp.size()));
      std::vector<Index> b;
      for (Index pos : random::random_subset(rng, supp.size(), size)) b.push_back(supp[pos - 1]);
      best = std::max(best, greedy::norm_ratio(space, greedy::coordinate_projection(*f, b), *f));
    }
    return best;
  });
  return *std::max_element(rows.begin(), rows.end());
}

double lebesgue_constant(const sp::SpaceSpec& space, std::size_t m, const std::string& mode,
                         const LebesgueOptions& options) {
  if (mode != "proxy" && mode != "direct") {
    throw ConfigError("unknown Lebesgue mode '" + mode + "' (expected proxy or direct)");
  }
  if (m == 0) throw ConfigError("m >= 1 required");
  if (mode == "proxy") {
    return std::max(unconditionality_parameter_km(space, m), democracy_parameter_mum(space, m, options.search));
  }
  const std::size_t ambient = search_ambient(space, m, options.search);
  const auto sampler = options.sampler ? *options.sampler : random::mixture(ambient, options.search.seed);
  if (options.trials == 0) throw ConfigError("trials must be at least 1");
  const auto rows = parallel_map(options.trials, default_threads(), [&](std::size_t t) {
    const auto f = sampler.draw(t);
    if (!f) throw ConfigError("sampler exhausted after " + std::to_string(t) + " draws");
    const auto residual = *f - greedy::greedy_approximation(*f, m);
    if (residual.support_size() == 0) return 0.0;
    const auto supp = f->support();
    const std::size_t size = std::min(m, supp.size());
    const auto order = greedy::greedy_ordering(*f).permutation;
    std::vector<std::vector<Index>> competitors;
    competitors.emplace_back();
    // Greedy set with one member swapped for the next candidate.
    for (std::size_t i = 0; i < size && size < supp.size(); ++i) {
      std::vector<Index> b(order.begin(), order.begin() + static_cast<long>(size));
      b[i] = order[size];
      competitors.push_back(std::move(b));
    }
    auto rng = random::engine_for(sampler.seed ^ 0x1eb5ULL, t);
    for (std::size_t c = 0; c < options.competitors; ++c) {
      std::vector<Index> b;
      for (Index pos : random::random_subset(rng, supp.size(), size)) b.push_back(supp[pos - 1]);
      competitors.push_back(std::move(b));
    }
    double best = 1.0;  // B = A_m gives exactly 1
    for (const auto& b : competitors) {
      const auto diff = *f - greedy::coordinate_projection(*f, b);
      if (diff.support_size() == 0) continue;
      best = std::max(best, greedy::norm_ratio(space, residual, diff));
    }
    return best;
  });
  return std::max(1.0, *std::max_element(rows.begin(), rows.end()));
}

Json FitResult::to_json() const { return {{"a", a}, {"b", b}, {"C", C}, {"residual", residual}}; }

FitResult fit_power_log(std::span<const double> m_values, std::span<const double> values) {
  check_fit_input(m_values, values);
  const auto n = static_cast<Eigen::Index>(m_values.size());
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lm = std::log(m_values[i]);
    X(i, 0) = lm;
    X(i, 1) = std::log1p(lm);
    X(i, 2) = 1.0;
    y(i) = std::log(values[i]);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) throw ConfigError("fit: degenerate design matrix");
  const Eigen::VectorXd beta = qr.solve(y);
  FitResult r{beta(0), beta(1), std::exp(beta(2)), 0.0};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double fitted = std::exp((X.row(i) * beta)(0));
    r.residual = std::max(r.residual, std::abs(fitted / values[i] - 1.0));
  }
  return r;
}

namespace {

FitResult log_fit(std::span<const double> m_values, std::span<const double> values, std::optional<double> fixed_b,
                  double log_base) {
  if (m_values.size() != values.size() || m_values.empty()) throw ConfigError("fit: bad input sizes");
  if (!(log_base > 1.0)) throw ConfigError("fit: log base must exceed 1");
  const double lb = std::log(log_base);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !(m_values[i] >= 1.0)) throw ConfigError("fit needs positive values and m >= 1");
    x.push_back(std::log(1.0 + std::log(m_values[i]) / lb) / lb);
    y.push_back(std::log(values[i]) / lb);
  }
  const auto n = static_cast<double>(x.size());
  double b;
  if (fixed_b) {
    b = *fixed_b;
  } else {
    if (std::set<double>(x.begin(), x.end()).size() < 2) throw ConfigError("fit: degenerate design matrix");
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
    }
    b = sxy / sxx;
  }
  double logc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) logc += y[i] - b * x[i];
  logc /= n;
  FitResult r{0.0, b, std::pow(log_base, logc), 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) r.residual = std::max(r.residual, std::abs(y[i] - logc - b * x[i]));
  r.residual *= lb;  // natural-log units
  return r;
}

}  // namespace

FitResult fit_log_fixed(std::span<const double> m_values, std::span<const double> values, double b,
                        double log_base) {
  return log_fit(m_values, values, b, log_base);
}

FitResult fit_log_free(std::span<const double> m_values, std::span<const double> values, double log_base) {
  return log_fit(m_values, values, std::nullopt, log_base);
}

DemocracyProfile democracy_profile(const sp::SpaceSpec& space, std::vector<std::size_t> m_values,
                                   const SearchOptions& options) {
  std::sort(m_values.begin(), m_values.end());
  m_values.erase(std::unique(m_values.begin(), m_values.end()), m_values.end());
  if (m_values.empty() || m_values.front() == 0) throw ConfigError("profile needs m values >= 1");
  DemocracyProfile prof;
  prof.m_values = m_values;
  struct Cell {
    DemocracyValue up, lo;
  };
  auto cells = parallel_map(m_values.size(), default_threads(), [&](std::size_t i) {
    return Cell{phi_upper(space, m_values[i], options), phi_lower(space, m_values[i], options)};
  });
  double mu = 1.0;
  for (auto& c : cells) {
    mu = std::max(mu, c.up.value / c.lo.value);
    prof.phi_u.push_back(c.up);
    prof.phi_l_eq.push_back(c.lo);
    prof.phi_l.push_back(std::move(c.lo));
    prof.mu.push_back(mu);
    prof.k.push_back(1.0);
  }
  return prof;
}

}  // namespace greedylab::democracy

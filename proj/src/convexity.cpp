#include "greedylab/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "greedylab/democracy.hpp"
#include "greedylab/parallel.hpp"

namespace greedylab::convexity {

namespace sp = greedylab::spaces;

void LatticeFamily::validate() const {
  if (vectors.empty()) throw ConfigError("lattice family is empty");
  for (const auto& v : vectors) {
    if (v.ambient_size() != vectors.front().ambient_size()) {
      throw ConfigError("lattice family vectors have different ambient sizes");
    }
  }
}

namespace {

void check_family(std::span<const CoefficientVector> fam) {
  if (fam.empty()) throw ConfigError("lattice family is empty");
  for (const auto& v : fam) {
    if (v.ambient_size() != fam.front().ambient_size()) {
      throw ConfigError("lattice family vectors have different ambient sizes");
    }
  }
}

// index -> values of the family members that are nonzero there.
std::map<Index, std::vector<Scalar>> columns(std::span<const CoefficientVector> fam) {
  std::map<Index, std::vector<Scalar>> cols;
  for (const auto& v : fam) {
    for (const auto& e : v.entries()) {
      if (e.value != Scalar(0.0)) cols[e.index].push_back(e.value);
    }
  }
  return cols;
}

CoefficientVector from_columns(std::size_t ambient, const std::map<Index, double>& values) {
  std::vector<Entry> e;
  for (const auto& [i, v] : values) e.push_back({i, v});
  return CoefficientVector(ambient, std::move(e));
}

double log_norm(const sp::SpaceSpec& space, const CoefficientVector& f) {
  return space.uses_log_domain() ? sp::log_quasi_norm(space, f) : std::log(sp::quasi_norm(space, f));
}

// (Ave over real sign vectors of ‖Σ ε_i f_i‖^r)^{1/r}, returned as a log.
// ε and −ε give the same norm, so ε_1 = +1 is fixed.
double log_sign_average(const LatticeFamily& fam, double r) {
  const std::size_t k = fam.vectors.size();
  const std::size_t count = std::size_t{1} << (k - 1);
  std::vector<double> logs(count);
  for (std::size_t s = 0; s < count; ++s) {
    CoefficientVector sum = fam.vectors[0];
    for (std::size_t i = 1; i < k; ++i) {
      sum = ((s >> (i - 1)) & 1U) ? sum - fam.vectors[i] : sum + fam.vectors[i];
    }
    logs[s] = r * log_norm(fam.space, sum);
  }
  return (log_sum_exp(logs) - std::log(static_cast<double>(count))) / r;
}

void require_sign_family(const LatticeFamily& fam) {
  fam.validate();
  if (fam.vectors.size() > kMaxSignFamily) {
    throw ConfigError("family of " + std::to_string(fam.vectors.size()) +
                      " vectors exceeds the sign enumeration cap of 20");
  }
}

}  // namespace

CoefficientVector lattice_r_sum(std::span<const CoefficientVector> fam, double r) {
  check_family(fam);
  require_exponent(r, "lattice sum exponent");
  std::map<Index, double> out;
  for (const auto& [i, col] : columns(fam)) {
    if (r == kInfinity) {
      double m = 0.0;
      for (auto v : col) m = std::max(m, std::abs(v));
      out[i] = m;
    } else if (col.size() == 1) {
      out[i] = std::abs(col.front());
    } else {
      CompensatedSum acc;
      for (auto v : col) acc.add(std::pow(std::abs(v), r));
      out[i] = std::pow(acc.value(), 1.0 / r);
    }
  }
  return from_columns(fam.front().ambient_size(), out);
}

CoefficientVector lattice_r_average(std::span<const CoefficientVector> fam, double r) {
  check_family(fam);
  if (r == kInfinity) throw ConfigError("lattice average needs a finite exponent");
  require_exponent(r, "lattice average exponent");
  const double k = static_cast<double>(fam.size());
  std::map<Index, double> out;
  for (const auto& [i, col] : columns(fam)) {
    const double first = std::abs(col.front());
    if (col.size() == fam.size() &&
        std::all_of(col.begin(), col.end(), [&](Scalar v) { return std::abs(v) == first; })) {
      out[i] = first;  // equal members average to themselves exactly
      continue;
    }
    CompensatedSum acc;
    for (auto v : col) acc.add(std::pow(std::abs(v), r));
    out[i] = std::pow(acc.value() / k, 1.0 / r);
  }
  return from_columns(fam.front().ambient_size(), out);
}

KhintchineResult khintchine_check(const LatticeFamily& fam, double r) {
  require_sign_family(fam);
  if (!(r > 0.0) || r == kInfinity) throw ConfigError("khintchine_check needs a finite r > 0");
  KhintchineResult out;
  std::map<Index, double> avg, sq;
  bool first = true;
  for (const auto& [i, col] : columns(fam.vectors)) {
    const std::size_t k = col.size();
    CompensatedSum s2;
    for (auto v : col) s2.add(std::norm(v));
    const double square = std::sqrt(s2.value());
    double average;
    if (k == 1) {
      average = std::abs(col.front());
    } else {
      const std::size_t count = std::size_t{1} << (k - 1);
      CompensatedSum acc;
      for (std::size_t s = 0; s < count; ++s) {
        Scalar total = col[0];
        for (std::size_t t = 1; t < k; ++t) total += ((s >> (t - 1)) & 1U) ? -col[t] : col[t];
        acc.add(std::pow(std::abs(total), r));
      }
      average = std::pow(acc.value() / static_cast<double>(count), 1.0 / r);
    }
    avg[i] = average;
    sq[i] = square;
    if (average > 0.0) {
      const double ratio = k == 1 ? 1.0 : square / average;
      out.min_ratio = first ? ratio : std::min(out.min_ratio, ratio);
      out.max_ratio = first ? ratio : std::max(out.max_ratio, ratio);
      first = false;
    }
  }
  out.average = from_columns(fam.ambient(), avg);
  out.square = from_columns(fam.ambient(), sq);
  out.norm_average = sp::quasi_norm(fam.space, out.average);
  out.norm_square = sp::quasi_norm(fam.space, out.square);
  return out;
}

std::pair<double, double> scalar_khintchine_range(double r) {
  if (!(r > 0.0) || r == kInfinity) throw ConfigError("Khintchine constants need a finite r > 0");
  // Gaussian moment constant √2 (Γ((r+1)/2)/√π)^{1/r}.
  const double gauss = std::sqrt(2.0) * std::pow(std::tgamma((r + 1.0) / 2.0) / std::sqrt(std::numbers::pi), 1.0 / r);
  constexpr double r0 = 1.8474163;  // where 2^{1/2-1/r} meets the Gaussian constant
  if (r >= 2.0) return {1.0 / gauss, 1.0};
  const double a = r <= r0 ? std::pow(2.0, 0.5 - 1.0 / r) : gauss;
  return {1.0, 1.0 / a};
}

MaureyResult maurey_check(const LatticeFamily& fam, double r) {
  require_sign_family(fam);
  if (!(r > 0.0) || r == kInfinity) throw ConfigError("maurey_check needs a finite r > 0");
  const auto square = lattice_r_sum(fam.vectors, 2.0);
  const double log_lhs = log_norm(fam.space, square);
  const double log_rhs = log_sign_average(fam, r);
  MaureyResult out;
  out.lhs = std::exp(log_lhs);
  out.rhs = std::exp(log_rhs);
  out.ratio = log_lhs == log_rhs ? 1.0 : std::exp(log_lhs - log_rhs);
  return out;
}

namespace {

CoefficientVector random_on(random::Engine& rng, std::size_t n, std::span<const Index> support) {
  std::vector<Entry> e;
  for (Index i : support) {
    double v = 0.0;
    while (v == 0.0) v = 2.0 * random::uniform01(rng) - 1.0;
    e.push_back({i, v});
  }
  return CoefficientVector(n, std::move(e));
}

}  // namespace

FamilySampler random_families(std::size_t n, std::size_t max_size, std::uint64_t seed) {
  if (n == 0 || max_size == 0) throw ConfigError("family sampler needs positive sizes");
  return {"random", seed, [=](std::size_t t) -> std::optional<std::vector<CoefficientVector>> {
            auto rng = random::engine_for(seed, t);
            const auto k = random::uniform_index(rng, 1, max_size);
            std::vector<CoefficientVector> fam;
            for (std::size_t i = 0; i < k; ++i) {
              const auto support = random::random_subset(rng, n, random::uniform_index(rng, 1, n));
              fam.push_back(random_on(rng, n, support));
            }
            return fam;
          }};
}

FamilySampler disjoint_families(std::size_t n, std::size_t max_size, std::uint64_t seed) {
  if (n == 0 || max_size == 0) throw ConfigError("family sampler needs positive sizes");
  return {"disjoint", seed, [=](std::size_t t) -> std::optional<std::vector<CoefficientVector>> {
            auto rng = random::engine_for(seed, t);
            const auto k = random::uniform_index(rng, 1, std::min(max_size, n));
            // A random permutation cut into k nonempty consecutive pieces.
            std::vector<Index> perm(n);
            std::iota(perm.begin(), perm.end(), Index{1});
            for (std::size_t i = 0; i + 1 < n; ++i) std::swap(perm[i], perm[random::uniform_index(rng, i, n - 1)]);
            const auto used = random::uniform_index(rng, k, n);
            auto cuts = random::random_subset(rng, used - 1, k - 1);
            cuts.push_back(used);
            std::vector<CoefficientVector> fam;
            std::size_t start = 0;
            for (Index cut : cuts) {
              std::vector<Index> support(perm.begin() + static_cast<long>(start), perm.begin() + static_cast<long>(cut));
              std::sort(support.begin(), support.end());
              fam.push_back(random_on(rng, n, support));
              start = cut;
            }
            return fam;
          }};
}

FamilySampler overlapping_families(std::size_t n, std::size_t max_size, std::uint64_t seed) {
  if (n == 0 || max_size == 0) throw ConfigError("family sampler needs positive sizes");
  return {"overlapping", seed, [=](std::size_t t) -> std::optional<std::vector<CoefficientVector>> {
            auto rng = random::engine_for(seed, t);
            const auto k = random::uniform_index(rng, 1, max_size);
            const auto support = random::random_subset(rng, n, random::uniform_index(rng, 1, n));
            const auto base = random_on(rng, n, support);
            const double noise = random::uniform01(rng) < 0.5 ? 0.0 : 0.5;
            std::vector<CoefficientVector> fam;
            for (std::size_t i = 0; i < k; ++i) {
              std::vector<Entry> e;
              for (const auto& entry : base.entries()) {
                e.push_back({entry.index, entry.value * (1.0 + noise * (2.0 * random::uniform01(rng) - 1.0))});
              }
              fam.emplace_back(n, std::move(e));
            }
            return fam;
          }};
}

FamilySampler family_sampler_by_id(const std::string& id, std::size_t n, std::size_t max_size,
                                   std::uint64_t seed) {
  if (id == "random") return random_families(n, max_size, seed);
  if (id == "disjoint") return disjoint_families(n, max_size, seed);
  if (id == "overlapping") return overlapping_families(n, max_size, seed);
  throw ConfigError("unknown family sampler '" + id + "'");
}

TwoSidedEstimate convexity_constant(const sp::SpaceSpec& space, double r, const FamilySampler& sampler,
                                    std::size_t trials) {
  if (trials == 0) throw ConfigError("trials must be at least 1");
  require_exponent(r, "convexity exponent r");
  const auto rows = parallel_map(trials, default_threads(), [&](std::size_t t) {
    const auto fam = sampler.draw(t);
    if (!fam) throw ConfigError("sampler exhausted after " + std::to_string(t) + " draws");
    check_family(*fam);
    std::vector<double> logs;
    for (const auto& f : *fam) {
      if (f.support_size() > 0) logs.push_back(log_norm(space, f));
    }
    if (logs.empty()) return std::pair<std::size_t, double>{fam->size(), -1.0};
    double log_den;
    if (r == kInfinity) {
      log_den = *std::max_element(logs.begin(), logs.end());
    } else {
      for (auto& l : logs) l *= r;
      log_den = log_sum_exp(logs) / r;
    }
    const double log_num = log_norm(space, lattice_r_sum(*fam, r));
    return std::pair<std::size_t, double>{fam->size(), log_num == log_den ? 1.0 : std::exp(log_num - log_den)};
  });
  TwoSidedEstimate est;
  est.sampler = sampler.id;
  est.seed = sampler.seed;
  est.trials = trials;
  for (auto [k, v] : rows) {
    if (v < 0.0) continue;
    est.record(k, v);
    est.evaluations += k + 1;
  }
  if (est.samples.empty()) throw ConfigError("sampler produced only zero families");
  return est;
}

LConvexityReport l_convexity_probe(const sp::SpaceSpec& space, std::span<const double> eps_grid,
                                   const random::VectorSampler& sampler, std::size_t trials) {
  if (eps_grid.empty()) throw ConfigError("l_convexity_probe needs a nonempty eps grid");
  for (double e : eps_grid) {
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("eps grid values must lie in (0, 1)");
  }
  if (trials == 0) throw ConfigError("trials must be at least 1");
  LConvexityReport rep;
  rep.eps.assign(eps_grid.begin(), eps_grid.end());
  std::sort(rep.eps.begin(), rep.eps.end());
  rep.tested.assign(rep.eps.size(), 0);
  rep.violations.assign(rep.eps.size(), 0);

  struct Outcome {
    std::vector<bool> tested, violated;
  };
  const auto rows = parallel_map(trials, default_threads(), [&](std::size_t t) {
    const auto g = sampler.draw(t);
    if (!g) throw ConfigError("sampler exhausted after " + std::to_string(t) + " draws");
    const auto f = g->modulus().pruned();
    Outcome o{std::vector<bool>(rep.eps.size(), false), std::vector<bool>(rep.eps.size(), false)};
    const auto support = f.support();
    if (support.empty()) return o;
    auto rng = random::engine_for(sampler.seed ^ 0x1c0ffULL, t);
    const std::size_t k = random::uniform_index(rng, 2, 8);
    std::vector<std::vector<Index>> members(k);
    if (t % 2 == 0) {
      // Leave one block out: every coordinate is covered k−1 times.
      std::vector<std::size_t> block(support.size());
      for (auto& b : block) b = random::uniform_index(rng, 0, k - 1);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t s = 0; s < support.size(); ++s) {
          if (block[s] != i) members[i].push_back(support[s]);
        }
      }
    } else {
      const double keep = 0.5 + 0.5 * random::uniform01(rng);
      for (std::size_t i = 0; i < k; ++i) {
        for (Index n : support) {
          if (random::uniform01(rng) < keep) members[i].push_back(n);
        }
      }
    }
    std::size_t min_cover = k;
    for (Index n : support) {
      std::size_t c = 0;
      for (const auto& m : members) c += std::binary_search(m.begin(), m.end(), n) ? 1 : 0;
      min_cover = std::min(min_cover, c);
    }
    double log_max = -kInfinity;
    for (const auto& m : members) {
      std::vector<Entry> e;
      for (Index n : m) e.push_back({n, f[n]});
      const CoefficientVector fi(f.ambient_size(), std::move(e));
      if (fi.support_size() > 0) log_max = std::max(log_max, log_norm(space, fi));
    }
    const double log_f = log_norm(space, f);
    for (std::size_t j = 0; j < rep.eps.size(); ++j) {
      const double eps = rep.eps[j];
      if (static_cast<double>(min_cover) < (1.0 - eps) * static_cast<double>(k)) continue;
      o.tested[j] = true;
      o.violated[j] = std::log(eps) + log_f > log_max + 1e-12;
    }
    return o;
  });
  for (const auto& o : rows) {
    for (std::size_t j = 0; j < rep.eps.size(); ++j) {
      rep.tested[j] += o.tested[j] ? 1 : 0;
      rep.violations[j] += o.violated[j] ? 1 : 0;
    }
  }
  for (std::size_t j = 0; j < rep.eps.size(); ++j) {
    if (rep.violations[j] == 0) rep.best_eps = rep.eps[j];
  }
  return rep;
}

AbsolutenessProfile strong_absoluteness_profile(const sp::SpaceSpec& space, std::span<const double> R_values,
                                                const random::VectorSampler& sampler, std::size_t trials) {
  if (R_values.empty()) throw ConfigError("strong_absoluteness_profile needs R values");
  for (double R : R_values) {
    if (!(R > 0.0)) throw ConfigError("R values must be positive");
  }
  if (trials == 0) throw ConfigError("trials must be at least 1");
  struct Sample {
    double log_l1, log_norm, spread;
    std::size_t support, ambient;
  };
  // A finite family (such as the initial indicators) simply ends the sweep.
  std::vector<Sample> samples;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto f = sampler.draw(t);
    if (!f) {
      if (t == 0) throw ConfigError("sampler exhausted before the first draw");
      break;
    }
    if (f->support_size() == 0) continue;
    CompensatedSum l1;
    for (const auto& e : f->entries()) l1.add(std::abs(e.value));
    samples.push_back({std::log(l1.value()), log_norm(space, *f), l1.value() / f->sup_modulus(),
                       f->support_size(), f->ambient_size()});
  }
  AbsolutenessProfile prof;
  prof.R_values.assign(R_values.begin(), R_values.end());
  for (double R : prof.R_values) {
    double full = 0.0, half = 0.0;
    for (const auto& s : samples) {
      if (!(s.log_l1 > s.log_norm - std::log(R))) continue;
      full = std::max(full, s.spread);
      if (2 * s.support <= s.ambient) half = std::max(half, s.spread);
    }
    prof.C_values.push_back(full);
    prof.C_half.push_back(half);
    prof.diverged.push_back(full > half * (1.0 + 1e-12));
  }
  return prof;
}

std::string to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::Converges: return "converges";
    case SeriesVerdict::Diverges: return "diverges";
    case SeriesVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

SeriesReport sa_series_test(std::span<const double> s, std::size_t horizon) {
  if (horizon < 8) throw ConfigError("sa_series_test needs a horizon of at least 8");
  if (s.size() < horizon) throw ConfigError("sequence shorter than the horizon");
  CompensatedSum acc;
  for (std::size_t m = 0; m < horizon; ++m) {
    if (!(s[m] > 0.0)) throw ConfigError("s must be positive");
    if (m > 0 && s[m] < s[m - 1]) throw ConfigError("s must be nondecreasing");
  }
  // Small terms first.
  for (std::size_t m = horizon; m-- > 0;) acc.add(1.0 / s[m]);
  std::vector<double> ms, vs;
  for (std::size_t m = 1; m <= horizon; m *= 2) {
    ms.push_back(static_cast<double>(m));
    vs.push_back(s[m - 1]);
  }
  if (ms.back() != static_cast<double>(horizon)) {
    ms.push_back(static_cast<double>(horizon));
    vs.push_back(s[horizon - 1]);
  }
  const auto fit = democracy::fit_power_log(ms, vs);
  SeriesReport rep{acc.value(), fit.a, fit.b, SeriesVerdict::Inconclusive};
  const double margin = 0.1;
  double key = fit.a;
  if (std::abs(fit.a - 1.0) <= margin) key = fit.b;
  if (key > 1.0 + margin) rep.verdict = SeriesVerdict::Converges;
  if (key < 1.0 - margin) rep.verdict = SeriesVerdict::Diverges;
  return rep;
}

}  // namespace greedylab::convexity

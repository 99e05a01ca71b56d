#include "greedylab/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "greedylab/convexity.hpp"
#include "greedylab/democracy.hpp"
#include "greedylab/greedy.hpp"
#include "greedylab/hardy.hpp"
#include "greedylab/matching.hpp"
#include "greedylab/parallel.hpp"
#include "greedylab/random.hpp"
#include "greedylab/space.hpp"

namespace greedylab::harness {

namespace sp = greedylab::spaces;
namespace dem = greedylab::democracy;
namespace cvx = greedylab::convexity;

// ---- config ---------------------------------------------------------------

Json ExperimentConfig::to_json() const {
  Json j = {{"schema_version", kSchemaVersion}, {"experiment", experiment}, {"seed", seed}};
  if (schedule) j["schedule"] = *schedule;
  if (trials) j["trials"] = *trials;
  if (p) j["p"] = exponent_to_json(*p);
  if (d) j["d"] = *d;
  if (space) j["space"] = *space;
  if (!params.empty()) j["params"] = params;
  if (!output.empty()) j["output"] = output;
  if (record_time) j["record_time"] = true;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  try {
    if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
    const int version = j.value("schema_version", kSchemaVersion);
    if (version != kSchemaVersion) {
      throw ConfigError("unsupported schema_version " + std::to_string(version));
    }
    ExperimentConfig c;
    if (!j.contains("experiment")) throw ConfigError("experiment config needs an \"experiment\" id");
    c.experiment = j.at("experiment").get<std::string>();
    c.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("schedule")) c.schedule = j.at("schedule").get<std::vector<std::size_t>>();
    if (j.contains("trials")) c.trials = j.at("trials").get<std::size_t>();
    if (j.contains("p")) c.p = exponent_from_json(j.at("p"), "p");
    if (j.contains("d")) c.d = j.at("d").get<int>();
    if (j.contains("space")) c.space = j.at("space");
    if (j.contains("params")) c.params = j.at("params");
    c.output = j.value("output", std::string{});
    c.record_time = j.value("record_time", false);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad experiment config: ") + e.what());
  }
}

ResultRow& ResultRow::set(const std::string& key, Cell value) {
  for (auto& [k, v] : fields) {
    if (k == key) {
      v = std::move(value);
      return *this;
    }
  }
  fields.emplace_back(key, std::move(value));
  return *this;
}

const Cell* ResultRow::get(const std::string& key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return &v;
  }
  return nullptr;
}

// ---- presets --------------------------------------------------------------

namespace {

using Rows = std::vector<ResultRow>;

std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> v;
  for (std::size_t i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

std::vector<std::size_t> powers_of_two(int lo, int hi) {
  std::vector<std::size_t> v;
  for (int j = lo; j <= hi; ++j) v.push_back(std::size_t{1} << j);
  return v;
}

double rel_err(double got, double want) {
  if (got == want) return 0.0;
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

template <class T>
T param(const ExperimentConfig& c, const char* key, T fallback) {
  if (!c.params.contains(key)) return fallback;
  try {
    return c.params.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad parameter '") + key + "': " + e.what());
  }
}

std::string label(const sp::SpaceSpec& s) { return s.to_json().dump(); }

std::string join(std::span<const Index> a) {
  std::string out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(a[i]);
  }
  return out;
}

ResultRow row(const ExperimentConfig& c) {
  ResultRow r;
  r.set("experiment", Cell(c.experiment));
  r.set("seed", Cell(static_cast<std::int64_t>(c.seed)));
  return r;
}

std::size_t trials_or(const ExperimentConfig& c, std::size_t fallback) {
  const std::size_t t = c.trials.value_or(fallback);
  if (t == 0) throw ConfigError("trials must be positive");
  return t;
}

std::optional<double> closed_form_phi(const sp::SpaceSpec& s, std::size_t m) {
  if (const auto* l = std::get_if<sp::Lp>(&s.kind())) {
    if (std::isinf(l->p)) return 1.0;
    return std::pow(static_cast<double>(m), 1.0 / l->p);
  }
  if (const auto* w = std::get_if<sp::WeakLorentz>(&s.kind())) return w->weight.s(m);
  return std::nullopt;
}

Rows fundamental(const ExperimentConfig& c) {
  std::vector<sp::SpaceSpec> spaces;
  if (c.space) {
    spaces.push_back(sp::SpaceSpec::from_json(*c.space));
  } else {
    spaces = {sp::lp(0.25), sp::lp(0.5), sp::lp(0.75), sp::lp(1.0),
              sp::weak_lorentz(sp::Weight::power_log(1.0, 1.0)), sp::weak_lorentz(sp::Weight::power(0.5))};
  }
  const auto ms = c.schedule.value_or(range(1, 1024));
  Rows out;
  for (const auto& s : spaces) {
    dem::SearchOptions opt;
    opt.seed = c.seed;
    auto vals = parallel_map(ms.size(), default_threads(), [&](std::size_t i) {
      return std::pair{dem::phi_upper(s, ms[i], opt), dem::phi_lower(s, ms[i], opt)};
    });
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const auto& [u, l] = vals[i];
      ResultRow r = row(c);
      r.set("space", Cell(label(s))).set("m", ms[i]).set("phi_u", Cell(u.value)).set("phi_l", Cell(l.value));
      if (auto cf = closed_form_phi(s, ms[i])) {
        r.set("closed_form", Cell(*cf))
            .set("rel_err_u", Cell(rel_err(u.value, *cf)))
            .set("rel_err_l", Cell(rel_err(l.value, *cf)));
      }
      r.set("exact", Cell(u.exact && l.exact)).set("method", Cell(u.method));
      out.push_back(std::move(r));
    }
  }
  return out;
}

Rows hardy_fundamental(const ExperimentConfig& c) {
  const double p = c.p.value_or(0.5);
  const int d = c.d.value_or(2);
  const auto ks = c.schedule.value_or(range(1, 6));
  const int J = param<int>(c, "J", static_cast<int>(ks.back()));
  const double exponent = (d - 1) * (0.5 - 1.0 / p);
  auto norms = parallel_map(ks.size(), default_threads(), [&](std::size_t i) {
    const auto fam = hardy::family_hyperbolic(static_cast<int>(ks[i]), d);
    return std::pair{fam.size(), hardy::hp_norm(hardy::unit_expansion(fam, p, J))};
  });
  std::vector<double> mv, vv;
  for (const auto& [m, v] : norms) {
    mv.push_back(static_cast<double>(m));
    vv.push_back(v);
  }
  std::optional<dem::FitResult> fit;
  if (ks.size() >= 4) fit = dem::fit_power_log(mv, vv);
  Rows out;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double ratio = vv[i] / std::pow(mv[i], 1.0 / p);
    const double closed = std::pow(static_cast<double>(ks[i] + 1), exponent);
    ResultRow r = row(c);
    r.set("p", Cell(p)).set("d", d).set("J", J).set("k", ks[i]).set("m", norms[i].first);
    r.set("hp_norm", Cell(vv[i])).set("ratio", Cell(ratio)).set("closed_form", Cell(closed));
    r.set("rel_err", Cell(rel_err(ratio, closed))).set("target_b", Cell(exponent));
    if (fit) r.set("fit_a", Cell(fit->a)).set("fit_b", Cell(fit->b)).set("fit_C", Cell(fit->C));
    out.push_back(std::move(r));
  }
  return out;
}

Rows hardy_upper(const ExperimentConfig& c) {
  const double p = c.p.value_or(0.5);
  std::vector<int> ds = c.d ? std::vector<int>{*c.d} : std::vector<int>{1, 2};
  const auto ms = c.schedule.value_or(powers_of_two(1, 10));
  Rows out;
  for (int d : ds) {
    auto vals = parallel_map(ms.size(), default_threads(), [&](std::size_t i) {
      int level = 0;
      while ((std::size_t{1} << (level * d)) < ms[i]) ++level;
      const auto fam = hardy::family_disjoint(ms[i], d, level);
      return std::pair{level, hardy::hp_norm(hardy::unit_expansion(fam, p, level))};
    });
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const double want = std::pow(static_cast<double>(ms[i]), 1.0 / p);
      ResultRow r = row(c);
      r.set("p", Cell(p)).set("d", d).set("m", ms[i]).set("level", vals[i].first);
      r.set("hp_norm", Cell(vals[i].second)).set("closed_form", Cell(want));
      r.set("rel_err", Cell(rel_err(vals[i].second, want)));
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::size_t hyperbolic_size(int k, int d) {
  // C(k+d-1, d-1) 2^k
  double c = 1.0;
  for (int i = 1; i < d; ++i) c = c * (k + i) / i;
  return static_cast<std::size_t>(std::llround(c)) << k;
}

// μ on the witness families: φ_u from disjoint rectangles, φ_l from the full
// hyperbolic layer of the same size. The full democracy search (with random
// restarts) is reported next to it as mu_search.
Rows hardy_mu(const ExperimentConfig& c) {
  const double p = c.p.value_or(0.5);
  std::vector<int> ds = c.d ? std::vector<int>{*c.d} : std::vector<int>{2, 1};
  const auto ks = c.schedule.value_or(range(1, param<std::size_t>(c, "kmax", 8)));
  const bool search = param<bool>(c, "search", true);
  Rows out;
  for (int d : ds) {
    const int kmax = static_cast<int>(ks.back());
    std::vector<std::size_t> ms;
    for (auto k : ks) ms.push_back(hyperbolic_size(static_cast<int>(k), d));
    auto wit = parallel_map(ks.size(), default_threads(), [&](std::size_t i) {
      int level = 0;
      while ((std::size_t{1} << (level * d)) < ms[i]) ++level;
      const auto disj = hardy::family_disjoint(ms[i], d, level);
      const auto hyp = hardy::family_hyperbolic(static_cast<int>(ks[i]), d);
      const int J = std::max(level, static_cast<int>(ks[i]));
      return std::pair{hardy::hp_norm(hardy::unit_expansion(disj, p, J)),
                       hardy::hp_norm(hardy::unit_expansion(hyp, p, J))};
    });
    std::vector<double> mu;
    for (const auto& [u, l] : wit) mu.push_back(std::max(mu.empty() ? 0.0 : mu.back(), u / l));
    std::optional<dem::DemocracyProfile> prof;
    if (search) {
      dem::SearchOptions opt;
      opt.seed = c.seed;
      prof = dem::democracy_profile(sp::haar(p, d, kmax + 1), ms, opt);
    }
    std::vector<double> mv(ms.begin(), ms.end());
    const double alpha = std::abs((d - 1) * (0.5 - 1.0 / p));
    std::optional<dem::FitResult> fixed, literal, free, free_search;
    if (ms.size() >= 2) {
      fixed = dem::fit_log_fixed(mv, mu, alpha);
      literal = dem::fit_log_fixed(mv, mu, 1.0);
      free = dem::fit_log_free(mv, mu);
      if (prof) free_search = dem::fit_log_free(mv, prof->mu);
    }
    for (std::size_t i = 0; i < ms.size(); ++i) {
      ResultRow r = row(c);
      r.set("p", Cell(p)).set("d", d).set("k", ks[i]).set("m", ms[i]);
      r.set("phi_u_witness", Cell(wit[i].first)).set("phi_l_witness", Cell(wit[i].second));
      r.set("mu", Cell(mu[i])).set("alpha", Cell(alpha));
      if (fixed) {
        r.set("fit_C", Cell(fixed->C)).set("fit_residual", Cell(fixed->residual));
        r.set("fit1_C", Cell(literal->C)).set("fit1_residual", Cell(literal->residual));
        r.set("free_b", Cell(free->b)).set("free_C", Cell(free->C)).set("free_residual", Cell(free->residual));
      }
      if (prof) {
        r.set("phi_l_search", Cell(prof->phi_l[i].value)).set("method_l", Cell(prof->phi_l[i].method));
        r.set("mu_search", Cell(prof->mu[i]));
        if (free_search) r.set("free_b_search", Cell(free_search->b));
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

Rows mixed_mu(const ExperimentConfig& c) {
  const std::size_t half = param<std::size_t>(c, "block", 1024);
  const bool default_space = !c.space;
  const auto space = default_space ? sp::direct_sum({{sp::lp(0.5), half}, {sp::lp(0.25), half}})
                                   : sp::SpaceSpec::from_json(*c.space);
  const auto ms = c.schedule.value_or(range(1, 64));
  dem::SearchOptions opt;
  opt.seed = c.seed;
  opt.ambient = param<std::size_t>(c, "ambient", 0);
  const auto prof = dem::democracy_profile(space, ms, opt);
  Rows out;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    ResultRow r = row(c);
    r.set("space", Cell(label(space))).set("m", ms[i]);
    r.set("phi_u", Cell(prof.phi_u[i].value)).set("phi_l", Cell(prof.phi_l[i].value));
    r.set("mu", Cell(prof.mu[i]));
    if (default_space) {
      const double want = static_cast<double>(ms[i]) * static_cast<double>(ms[i]);
      r.set("closed_form", Cell(want)).set("rel_err", Cell(rel_err(prof.mu[i], want)));
    }
    r.set("exact", Cell(prof.phi_u[i].exact && prof.phi_l[i].exact));
    r.set("witness_u", Cell(join(prof.phi_u[i].witness))).set("witness_l", Cell(join(prof.phi_l[i].witness)));
    out.push_back(std::move(r));
  }
  return out;
}

// Hall's condition over every subset of I, independent of the flow solver.
bool hall_oracle(const matching::MarriageInstance& inst) {
  const std::size_t m = inst.sets.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<Index> nb;
    std::size_t count = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!(mask >> i & 1)) continue;
      ++count;
      nb.insert(nb.end(), inst.sets[i].begin(), inst.sets[i].end());
    }
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    if (count > inst.K * nb.size()) return false;
  }
  return true;
}

Rows marriage_suite(const ExperimentConfig& c) {
  const std::size_t n_inst = trials_or(c, 200);
  const auto max_i = param<std::size_t>(c, "max_I", 10);
  const auto max_n = param<std::size_t>(c, "max_N", 12);
  const auto max_k = param<std::size_t>(c, "max_K", 3);
  if (max_i == 0 || max_i > 20 || max_n == 0 || max_k == 0) {
    throw ConfigError("marriage-suite needs 1 <= max_I <= 20, max_N >= 1, max_K >= 1");
  }
  auto rows = parallel_map(n_inst, default_threads(), [&](std::size_t t) {
    auto rng = random::engine_for(c.seed, t);
    matching::MarriageInstance inst;
    const std::size_t m = random::uniform_index(rng, 1, max_i);
    const std::size_t n = random::uniform_index(rng, 1, max_n);
    inst.K = random::uniform_index(rng, 1, max_k);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t k = random::uniform_index(rng, 1, std::min<std::size_t>(n, 4));
      inst.sets.push_back(random::random_subset(rng, n, k));
    }
    const auto rep = matching::hall_defect_check(inst);
    const bool oracle = hall_oracle(inst);
    ResultRow r = row(c);
    r.set("instance", t).set("size_I", m).set("size_N", n).set("K", inst.K);
    r.set("feasible", Cell(rep.feasible)).set("oracle", Cell(oracle));
    if (rep.feasible) {
      r.set("verified", Cell(matching::verify_marriage(inst, matching::k_fold_marriage(inst))));
    } else {
      std::vector<Index> nb;
      for (Index i : rep.violator) nb.insert(nb.end(), inst.sets[i - 1].begin(), inst.sets[i - 1].end());
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
      r.set("verified", Cell(!rep.violator.empty() && rep.violator.size() > inst.K * nb.size()));
      r.set("violator", Cell(join(rep.violator)));
    }
    r.set("instance_json", Cell(inst.to_json().dump()));
    return r;
  });
  return rows;
}

Rows khintchine_suite(const ExperimentConfig& c) {
  const std::size_t per_space = trials_or(c, 100);
  const double r_exp = param<double>(c, "r", 1.0);
  const auto max_size = param<std::size_t>(c, "max_size", 10);
  if (max_size == 0 || max_size > cvx::kMaxSignFamily) throw ConfigError("max_size must be in 1..20");
  const std::vector<std::pair<sp::SpaceSpec, std::size_t>> spaces = {
      {sp::lp(0.5), 12}, {sp::lp(1.0), 12}, {sp::haar(0.5, 2, 3), 49}};
  const auto [lo, hi] = cvx::scalar_khintchine_range(r_exp);
  Rows out;
  for (std::size_t si = 0; si < spaces.size(); ++si) {
    const auto& [space, n] = spaces[si];
    const std::uint64_t seed = random::derive_seed(c.seed, si);
    const std::array<cvx::FamilySampler, 3> samplers = {cvx::random_families(n, max_size, seed),
                                                        cvx::disjoint_families(n, max_size, seed),
                                                        cvx::overlapping_families(n, max_size, seed)};
    auto rows = parallel_map(per_space, default_threads(), [&](std::size_t t) {
      const auto& sampler = samplers[t % 3];
      auto fam_vecs = sampler.draw(t / 3);
      if (!fam_vecs) throw ConfigError("family sampler exhausted");
      const cvx::LatticeFamily fam{*fam_vecs, space};
      const auto kh = cvx::khintchine_check(fam, r_exp);
      const auto ma = cvx::maurey_check(fam, r_exp);
      const double C = 1.0 / kh.min_ratio;
      const double T = kh.max_ratio;
      constexpr double tol = 1e-10;
      const bool sandwich = kh.norm_average <= C * kh.norm_square * (1 + tol) &&
                            kh.norm_square <= T * kh.norm_average * (1 + tol);
      ResultRow r = row(c);
      r.set("space", Cell(label(space))).set("family", t).set("sampler", Cell(sampler.id));
      r.set("size", fam.vectors.size()).set("r", Cell(r_exp));
      r.set("min_ratio", Cell(kh.min_ratio)).set("max_ratio", Cell(kh.max_ratio));
      r.set("scalar_lo", Cell(lo)).set("scalar_hi", Cell(hi));
      r.set("within_scalar", Cell(kh.min_ratio >= lo * (1 - tol) && kh.max_ratio <= hi * (1 + tol)));
      r.set("norm_average", Cell(kh.norm_average)).set("norm_square", Cell(kh.norm_square));
      r.set("sandwich", Cell(sandwich));
      r.set("maurey_lhs", Cell(ma.lhs)).set("maurey_rhs", Cell(ma.rhs)).set("maurey_ratio", Cell(ma.ratio));
      return r;
    });
    for (auto& r : rows) out.push_back(std::move(r));
  }
  return out;
}

Rows sa_profile(const ExperimentConfig& c) {
  const auto Rs = param<std::vector<double>>(c, "R", {2.0, 4.0, 8.0, 16.0});
  const auto n = param<std::size_t>(c, "N", 64);
  const auto horizon = param<std::size_t>(c, "horizon", 100000);
  Rows out;
  for (const auto& space : {sp::lp(0.5), sp::lp(1.0)}) {
    const auto prof =
        cvx::strong_absoluteness_profile(space, Rs, random::initial_indicators(n), n);
    for (std::size_t i = 0; i < Rs.size(); ++i) {
      ResultRow r = row(c);
      r.set("space", Cell(label(space))).set("N", n).set("R", Cell(Rs[i]));
      r.set("C", Cell(prof.C_values[i])).set("C_half", Cell(prof.C_half[i]));
      r.set("diverged", Cell(static_cast<bool>(prof.diverged[i])));
      out.push_back(std::move(r));
    }
  }
  const std::vector<std::pair<std::string, std::function<double(double)>>> series = {
      {"m^2", [](double m) { return m * m; }},
      {"m", [](double m) { return m; }},
      {"m(1+log m)^2", [](double m) { return m * std::pow(1 + std::log(m), 2.0); }},
      {"m^1/2", [](double m) { return std::sqrt(m); }}};
  for (const auto& [name, fn] : series) {
    std::vector<double> s(horizon);
    for (std::size_t m = 1; m <= horizon; ++m) s[m - 1] = fn(static_cast<double>(m));
    const auto rep = cvx::sa_series_test(s, horizon);
    ResultRow r = row(c);
    r.set("series", Cell(name)).set("horizon", horizon).set("partial_sum", Cell(rep.partial_sum));
    r.set("fit_a", Cell(rep.a)).set("fit_b", Cell(rep.b)).set("verdict", Cell(cvx::to_string(rep.verdict)));
    out.push_back(std::move(r));
  }
  return out;
}

struct TgaCounts {
  std::size_t nesting = 0, ties = 0, idempotence = 0, modulus = 0;
};

TgaCounts tga_check(const CoefficientVector& f) {
  TgaCounts bad;
  const std::size_t n = f.ambient_size();
  // sort oracle
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{1});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(f[a]) > std::abs(f[b]); });
  std::vector<Index> prev;
  for (std::size_t m = 0; m <= n; ++m) {
    auto a = greedy::greedy_set(f, m);
    std::vector<Index> want(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
    std::sort(want.begin(), want.end());
    if (a != want) ++bad.ties;
    if (!std::includes(a.begin(), a.end(), prev.begin(), prev.end())) ++bad.nesting;
    const auto g = greedy::greedy_approximation(f, m);
    if (!(greedy::greedy_approximation(g, m) == g)) ++bad.idempotence;
    const auto rt = greedy::restricted_truncation(f, m);
    if (m > 0) {
      double t = kInfinity;
      for (Index i : a) t = std::min(t, std::abs(f[i]));
      for (Index i : a) {
        if (std::abs(rt[i] - t * greedy::sgn(f[i])) > 1e-15 * std::max(1.0, t)) {
          ++bad.modulus;
          break;
        }
      }
    }
    prev = std::move(a);
  }
  return bad;
}

Rows tga_suite(const ExperimentConfig& c) {
  const std::size_t vectors = trials_or(c, 100000);
  const auto embed_samples = param<std::size_t>(c, "embed_samples", 1000);
  const std::size_t chunk = 1000;
  const std::size_t chunks = (vectors + chunk - 1) / chunk;
  auto parts = parallel_map(chunks, default_threads(), [&](std::size_t ch) {
    TgaCounts tot;
    for (std::size_t t = ch * chunk; t < std::min(vectors, (ch + 1) * chunk); ++t) {
      auto rng = random::engine_for(c.seed, t);
      const std::size_t n = random::uniform_index(rng, 1, 24);
      std::vector<Entry> e;
      const bool tied = t % 2 == 1;
      for (Index i = 1; i <= n; ++i) {
        if (random::uniform01(rng) < 0.2) continue;
        const double v = tied ? static_cast<double>(random::uniform_index(rng, 0, 6)) - 3.0
                              : 2.0 * random::uniform01(rng) - 1.0;
        e.push_back({i, v});
      }
      const auto b = tga_check(CoefficientVector(n, std::move(e)));
      tot.nesting += b.nesting;
      tot.ties += b.ties;
      tot.idempotence += b.idempotence;
      tot.modulus += b.modulus;
    }
    return tot;
  });
  TgaCounts tot;
  for (const auto& p : parts) {
    tot.nesting += p.nesting;
    tot.ties += p.ties;
    tot.idempotence += p.idempotence;
    tot.modulus += p.modulus;
  }
  Rows out;
  const std::pair<const char*, std::size_t> checks[] = {{"nesting", tot.nesting},
                                                        {"tie_rule", tot.ties},
                                                        {"idempotence", tot.idempotence},
                                                        {"common_modulus", tot.modulus}};
  for (const auto& [name, v] : checks) {
    ResultRow r = row(c);
    r.set("check", name).set("space", "").set("samples", vectors).set("violations", v);
    out.push_back(std::move(r));
  }

  // a*_m φ_l(m) ≤ ‖ℛ_m f‖ ≤ C_r ‖f‖ with C_r measured on the same samples
  constexpr std::size_t n = 24;
  const std::vector<sp::SpaceSpec> spaces = {sp::lp(0.5),
                                             sp::lp(1.0),
                                             sp::lorentz(0.5, 1.0),
                                             sp::weak_lorentz(sp::Weight::power(1.0)),
                                             sp::weak_lorentz(sp::Weight::power_log(1.0, 1.0)),
                                             sp::direct_sum({{sp::lp(0.5), 12}, {sp::lp(0.25), 12}}),
                                             sp::mixed_increasing(1.0, 0.5)};
  for (std::size_t si = 0; si < spaces.size(); ++si) {
    const auto& space = spaces[si];
    const auto sampler = random::mixture(n, random::derive_seed(c.seed, si));
    const double Cr = greedy::truncation_qg_constant(space, sampler, embed_samples).upper_const;
    dem::SearchOptions opt;
    opt.ambient = n;
    std::vector<double> phi(n + 1, 0.0);
    for (std::size_t m = 1; m <= n; ++m) phi[m] = dem::phi_lower(space, m, opt).value;
    auto res = parallel_map(embed_samples, default_threads(), [&](std::size_t t) {
      const auto f = *sampler.draw(t);
      const double nf = sp::quasi_norm(space, f);
      const auto a = sp::nonincreasing_rearrangement(f);
      double worst = 0.0;
      for (std::size_t m = 1; m <= f.support_size(); ++m) {
        worst = std::max(worst, a[m - 1] * phi[m] / nf);
      }
      return worst;
    });
    std::size_t viol = 0;
    double worst = 0.0;
    for (double w : res) {
      worst = std::max(worst, w);
      if (w > Cr * (1 + 1e-12)) ++viol;
    }
    ResultRow r = row(c);
    r.set("check", "lorentz_embed").set("space", Cell(label(space))).set("samples", embed_samples);
    r.set("violations", viol).set("constant", Cell(Cr)).set("max_ratio", Cell(worst));
    out.push_back(std::move(r));
  }
  return out;
}

const std::map<std::string, std::function<Rows(const ExperimentConfig&)>>& registry() {
  static const std::map<std::string, std::function<Rows(const ExperimentConfig&)>> r = {
      {"fundamental", fundamental},       {"hardy-fundamental", hardy_fundamental},
      {"hardy-upper", hardy_upper},       {"hardy-mu", hardy_mu},
      {"mixed-mu", mixed_mu},             {"marriage-suite", marriage_suite},
      {"khintchine-suite", khintchine_suite}, {"sa-profile", sa_profile},
      {"tga-suite", tga_suite}};
  return r;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

ExperimentConfig preset(const std::string& name) {
  if (!registry().contains(name)) throw ConfigError("unknown preset '" + name + "'");
  ExperimentConfig c;
  c.experiment = name;
  return c;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  const auto it = registry().find(cfg.experiment);
  if (it == registry().end()) throw ConfigError("unknown preset '" + cfg.experiment + "'");
  if (cfg.schedule) {
    if (cfg.schedule->empty()) throw ConfigError("empty schedule");
    for (std::size_t i = 1; i < cfg.schedule->size(); ++i) {
      if ((*cfg.schedule)[i] <= (*cfg.schedule)[i - 1]) {
        throw ConfigError("schedule must be strictly increasing");
      }
    }
  }
  const auto start = std::chrono::steady_clock::now();
  auto rows = it->second(cfg);
  if (cfg.record_time) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (auto& r : rows) r.set("wall_time_s", Cell(secs));
  }
  if (!cfg.output.empty()) export_csv(rows, cfg.output);
  return rows;
}

// ---- CSV --------------------------------------------------------------------

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string cell_text(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(const std::string& s) const { return s; }
  } v;
  return std::visit(v, c);
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

std::string to_csv(const std::vector<ResultRow>& rows) {
  // every row starts with these, so an empty result still has a header
  std::vector<std::string> header = {"experiment", "seed"};
  for (const auto& r : rows) {
    for (const auto& [k, v] : r.fields) {
      if (std::find(header.begin(), header.end(), k) == header.end()) header.push_back(k);
    }
  }
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += quote(cells[i]);
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) {
    std::vector<std::string> cells;
    for (const auto& h : header) {
      const Cell* c = r.get(h);
      cells.push_back(c ? cell_text(*c) : std::string{});
    }
    line(cells);
  }
  return out;
}

void export_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open '" + path.string() + "' for writing");
  os << to_csv(rows);
  os.close();
  if (!os) throw Error("failed writing '" + path.string() + "'");
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      rec.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      rec.push_back(std::move(field));
      field.clear();
      out.push_back(std::move(rec));
      rec.clear();
      any = false;
    } else {
      field += ch;
      any = true;
    }
  }
  if (quoted) throw ConfigError("unterminated quoted CSV field");
  if (any || !field.empty()) {
    rec.push_back(std::move(field));
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace greedylab::harness

#include "greedylab/space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "greedylab/hardy.hpp"

namespace greedylab::spaces {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

/// Nonzero moduli with block-relative indices, sorted by index.
struct Moduli {
  std::size_t ambient = 0;
  std::vector<std::pair<Index, double>> items;
};

Moduli moduli_of(const CoefficientVector& f) {
  Moduli out{f.ambient_size(), {}};
  out.items.reserve(f.entries().size());
  for (const auto& e : f.entries()) {
    const double a = std::abs(e.value);
    if (a != 0.0) out.items.emplace_back(e.index, a);
  }
  return out;
}

std::vector<Moduli> split_blocks(const Moduli& f, std::span<const std::size_t> sizes) {
  std::vector<Moduli> out;
  out.reserve(sizes.size());
  Index start = 0;
  auto it = f.items.begin();
  for (std::size_t n : sizes) {
    Moduli block{n, {}};
    while (it != f.items.end() && it->first <= start + n) {
      block.items.emplace_back(it->first - start, it->second);
      ++it;
    }
    out.push_back(std::move(block));
    start += n;
  }
  return out;
}

std::vector<double> sorted_desc(const Moduli& f) {
  std::vector<double> a;
  a.reserve(f.items.size());
  for (const auto& [i, v] : f.items) a.push_back(v);
  std::sort(a.begin(), a.end(), std::greater<>());
  return a;
}

void block_mismatch(const std::string& what, std::size_t expected, std::size_t got) {
  throw ConfigError("block mismatch: " + what + " expects ambient size " +
                    std::to_string(expected) + ", got " + std::to_string(got));
}

// Combines block norms b_k with an outer ℓ_r quasi-norm. A single nonzero block
// is returned unchanged so that pure-block values are exact.
double combine_linear(std::span<const double> b, double r) {
  std::size_t nonzero = 0;
  double only = 0.0;
  for (double x : b) {
    if (x != 0.0) {
      ++nonzero;
      only = x;
    }
  }
  if (nonzero <= 1) return only;
  if (r == kInfinity) return *std::max_element(b.begin(), b.end());
  CompensatedSum acc;
  for (double x : b) {
    if (x != 0.0) acc.add(std::pow(x, r));
  }
  return std::pow(acc.value(), 1.0 / r);
}

double combine_log(std::span<const double> logb, double r) {
  std::size_t nonzero = 0;
  double only = -kInfinity;
  for (double x : logb) {
    if (x != -kInfinity) {
      ++nonzero;
      only = x;
    }
  }
  if (nonzero <= 1) return only;
  if (r == kInfinity) return *std::max_element(logb.begin(), logb.end());
  std::vector<double> terms;
  for (double x : logb) {
    if (x != -kInfinity) terms.push_back(r * x);
  }
  return log_sum_exp(terms) / r;
}

double lp_linear(const Moduli& f, double p) {
  if (p == kInfinity) {
    double top = 0.0;
    for (const auto& [i, v] : f.items) top = std::max(top, v);
    return top;
  }
  CompensatedSum acc;
  for (const auto& [i, v] : f.items) acc.add(p == 1.0 ? v : std::pow(v, p));
  return p == 1.0 ? acc.value() : std::pow(acc.value(), 1.0 / p);
}

double lp_log(const Moduli& f, double p) {
  if (f.items.empty()) return -kInfinity;
  if (p == kInfinity) return std::log(lp_linear(f, p));
  std::vector<double> terms;
  terms.reserve(f.items.size());
  for (const auto& [i, v] : f.items) terms.push_back(p * std::log(v));
  return log_sum_exp(terms) / p;
}

double lorentz_linear(const Moduli& f, double p, double q) {
  const auto a = sorted_desc(f);
  const double inv_p = p == kInfinity ? 0.0 : 1.0 / p;
  if (q == kInfinity) {
    double top = 0.0;
    for (std::size_t m = 1; m <= a.size(); ++m) {
      top = std::max(top, a[m - 1] * std::pow(static_cast<double>(m), inv_p));
    }
    return top;
  }
  CompensatedSum acc;
  for (std::size_t m = 1; m <= a.size(); ++m) {
    const auto mm = static_cast<double>(m);
    acc.add(std::pow(a[m - 1] * std::pow(mm, inv_p), q) / mm);
  }
  return std::pow(acc.value(), 1.0 / q);
}

double lorentz_log(const Moduli& f, double p, double q) {
  const auto a = sorted_desc(f);
  if (a.empty()) return -kInfinity;
  const double inv_p = p == kInfinity ? 0.0 : 1.0 / p;
  std::vector<double> terms;
  terms.reserve(a.size());
  for (std::size_t m = 1; m <= a.size(); ++m) {
    const double lm = std::log(static_cast<double>(m));
    const double base = std::log(a[m - 1]) + inv_p * lm;
    terms.push_back(q == kInfinity ? base : q * base - lm);
  }
  if (q == kInfinity) return *std::max_element(terms.begin(), terms.end());
  return log_sum_exp(terms) / q;
}

double weak_lorentz_linear(const Moduli& f, const Weight& w) {
  const auto a = sorted_desc(f);
  double top = 0.0;
  for (std::size_t m = 1; m <= a.size(); ++m) top = std::max(top, w.s(m) * a[m - 1]);
  return top;
}

double weak_lorentz_log(const Moduli& f, const Weight& w) {
  const auto a = sorted_desc(f);
  double top = -kInfinity;
  for (std::size_t m = 1; m <= a.size(); ++m) {
    top = std::max(top, std::log(w.s(m)) + std::log(a[m - 1]));
  }
  return top;
}

double haar_linear(const Moduli& f, const HaarHp& h) {
  const hardy::HaarIndexing indexing(h.d, h.max_level);
  if (f.ambient != indexing.size()) block_mismatch("haar", indexing.size(), f.ambient);
  hardy::HaarExpansion e;
  e.p = h.p;
  e.d = h.d;
  e.J = h.max_level;
  e.terms.reserve(f.items.size());
  for (const auto& [i, v] : f.items) e.terms.push_back({indexing.rectangle(i), v});
  return hardy::hp_norm(e);
}

std::vector<std::size_t> direct_sum_sizes(const DirectSum& s) {
  std::vector<std::size_t> sizes;
  for (const auto& b : s.blocks) sizes.push_back(b.size);
  return sizes;
}

double direct_sum_outer(const DirectSum& s) {
  if (s.outer) return *s.outer;
  double r = kInfinity;
  for (const auto& b : s.blocks) r = std::min(r, b.space.natural_exponent());
  return r;
}

double eval(const SpaceSpec& space, const Moduli& f, bool log_domain);

double eval_blocks(std::span<const SpaceSpec* const> spaces, const std::vector<Moduli>& parts,
                   double outer, bool log_domain) {
  std::vector<double> values;
  values.reserve(parts.size());
  for (std::size_t k = 0; k < parts.size(); ++k) {
    values.push_back(parts[k].items.empty() ? (log_domain ? -kInfinity : 0.0)
                                            : eval(*spaces[k], parts[k], log_domain));
  }
  return log_domain ? combine_log(values, outer) : combine_linear(values, outer);
}

double eval(const SpaceSpec& space, const Moduli& f, bool log_domain) {
  return std::visit(
      Overloaded{
          [&](const Lp& s) { return log_domain ? lp_log(f, s.p) : lp_linear(f, s.p); },
          [&](const LorentzPQ& s) {
            return log_domain ? lorentz_log(f, s.p, s.q) : lorentz_linear(f, s.p, s.q);
          },
          [&](const WeakLorentz& s) {
            return log_domain ? weak_lorentz_log(f, s.weight) : weak_lorentz_linear(f, s.weight);
          },
          [&](const DirectSum& s) {
            const auto sizes = direct_sum_sizes(s);
            std::size_t total = 0;
            for (auto n : sizes) total += n;
            if (total != f.ambient) block_mismatch("direct_sum", total, f.ambient);
            std::vector<const SpaceSpec*> parts;
            for (const auto& b : s.blocks) parts.push_back(&b.space);
            return eval_blocks(parts, split_blocks(f, sizes), direct_sum_outer(s), log_domain);
          },
          [&](const Mixed& s) {
            const auto sizes = block_layout(s, f.ambient);
            const SpaceSpec inner = lp(s.inner);
            std::vector<const SpaceSpec*> parts(sizes.size(), &inner);
            return eval_blocks(parts, split_blocks(f, sizes), s.outer, log_domain);
          },
          [&](const HaarHp& s) {
            const double v = haar_linear(f, s);
            return log_domain ? std::log(v) : v;
          },
      },
      space.kind());
}

}  // namespace

SpaceSpec::SpaceSpec(Kind kind) : kind_(std::move(kind)) {
  std::visit(Overloaded{
                 [](const Lp& s) { require_exponent(s.p, "lp exponent p"); },
                 [](const LorentzPQ& s) {
                   require_exponent(s.p, "lorentz exponent p");
                   require_exponent(s.q, "lorentz exponent q");
                 },
                 [](const WeakLorentz&) {},
                 [](const DirectSum& s) {
                   if (s.blocks.empty()) throw ConfigError("direct_sum needs at least one block");
                   for (const auto& b : s.blocks) {
                     if (b.size == 0) throw ConfigError("direct_sum block size must be positive");
                     if (!b.space.fixed_ambient()) continue;
                     if (*b.space.fixed_ambient() != b.size) {
                       block_mismatch("direct_sum block", *b.space.fixed_ambient(), b.size);
                     }
                   }
                   if (s.outer) require_exponent(*s.outer, "direct_sum outer exponent");
                 },
                 [](const Mixed& s) {
                   require_exponent(s.outer, "mixed outer exponent");
                   require_exponent(s.inner, "mixed inner exponent");
                   if (s.layout == Mixed::Layout::Uniform && s.uniform_size == 0) {
                     throw ConfigError("mixed uniform block size must be positive");
                   }
                   if (s.layout == Mixed::Layout::Explicit &&
                       (s.sizes.empty() ||
                        std::find(s.sizes.begin(), s.sizes.end(), 0u) != s.sizes.end())) {
                     throw ConfigError("mixed explicit block sizes must be positive");
                   }
                 },
                 [](const HaarHp& s) {
                   if (!(s.p > 0.0 && s.p <= 1.0)) throw ConfigError("haar needs 0 < p <= 1");
                   hardy::HaarIndexing check(s.d, s.max_level);
                 },
             },
             kind_);
}

std::string SpaceSpec::kind_name() const {
  static constexpr const char* names[] = {"lp",         "lorentz", "weak_lorentz",
                                          "direct_sum", "mixed",   "haar"};
  return names[kind_.index()];
}

bool SpaceSpec::is_symmetric() const noexcept {
  return std::holds_alternative<Lp>(kind_) || std::holds_alternative<LorentzPQ>(kind_) ||
         std::holds_alternative<WeakLorentz>(kind_);
}

std::optional<std::size_t> SpaceSpec::fixed_ambient() const {
  if (const auto* s = std::get_if<DirectSum>(&kind_)) {
    std::size_t total = 0;
    for (const auto& b : s->blocks) total += b.size;
    return total;
  }
  if (const auto* s = std::get_if<Mixed>(&kind_); s && s->layout == Mixed::Layout::Explicit) {
    std::size_t total = 0;
    for (auto n : s->sizes) total += n;
    return total;
  }
  if (const auto* s = std::get_if<HaarHp>(&kind_)) {
    return hardy::HaarIndexing(s->d, s->max_level).size();
  }
  return std::nullopt;
}

bool SpaceSpec::uses_log_domain() const noexcept {
  return std::visit(Overloaded{
                        [](const Lp& s) { return s.p < 0.25; },
                        [](const LorentzPQ& s) { return s.p < 0.25 || s.q < 0.25; },
                        [](const WeakLorentz&) { return false; },
                        [](const DirectSum& s) {
                          bool any = s.outer && *s.outer < 0.25;
                          for (const auto& b : s.blocks) any = any || b.space.uses_log_domain();
                          return any;
                        },
                        [](const Mixed& s) { return s.outer < 0.25 || s.inner < 0.25; },
                        [](const HaarHp&) { return false; },
                    },
                    kind_);
}

double SpaceSpec::natural_exponent() const noexcept {
  return std::visit(Overloaded{
                        [](const Lp& s) { return s.p; },
                        [](const LorentzPQ& s) { return std::min(s.p, s.q); },
                        [](const WeakLorentz&) { return 1.0; },
                        [](const DirectSum& s) { return direct_sum_outer(s); },
                        [](const Mixed& s) { return std::min(s.outer, s.inner); },
                        [](const HaarHp& s) { return s.p; },
                    },
                    kind_);
}

Json SpaceSpec::to_json() const {
  return std::visit(
      Overloaded{
          [](const Lp& s) -> Json { return {{"kind", "lp"}, {"p", exponent_to_json(s.p)}}; },
          [](const LorentzPQ& s) -> Json {
            return {{"kind", "lorentz"}, {"p", exponent_to_json(s.p)}, {"q", exponent_to_json(s.q)}};
          },
          [](const WeakLorentz& s) -> Json {
            return {{"kind", "weak_lorentz"}, {"weight", s.weight.to_json()}};
          },
          [](const DirectSum& s) -> Json {
            Json blocks = Json::array();
            for (const auto& b : s.blocks) {
              blocks.push_back({{"size", b.size}, {"space", b.space.to_json()}});
            }
            Json out = {{"kind", "direct_sum"}, {"blocks", std::move(blocks)}};
            if (s.outer) out["outer"] = exponent_to_json(*s.outer);
            return out;
          },
          [](const Mixed& s) -> Json {
            Json out = {{"kind", "mixed"},
                        {"outer", exponent_to_json(s.outer)},
                        {"inner", exponent_to_json(s.inner)}};
            switch (s.layout) {
              case Mixed::Layout::Increasing:
                out["blocks"] = "increasing";
                break;
              case Mixed::Layout::Uniform:
                out["blocks"] = {{"uniform", s.uniform_size}};
                break;
              case Mixed::Layout::Explicit:
                out["blocks"] = s.sizes;
                break;
            }
            return out;
          },
          [](const HaarHp& s) -> Json {
            return {{"kind", "haar"}, {"p", s.p}, {"d", s.d}, {"max_level", s.max_level}};
          },
      },
      kind_);
}

SpaceSpec SpaceSpec::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("space must be an object with \"kind\"");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "lp") return lp(exponent_from_json(j.at("p"), "p"));
  if (kind == "lorentz") {
    return lorentz(exponent_from_json(j.at("p"), "p"), exponent_from_json(j.at("q"), "q"));
  }
  if (kind == "weak_lorentz") return weak_lorentz(Weight::from_json(j.at("weight")));
  if (kind == "direct_sum") {
    std::vector<DirectSumBlock> blocks;
    for (const auto& b : j.at("blocks")) {
      blocks.push_back({from_json(b.at("space")), b.at("size").get<std::size_t>()});
    }
    std::optional<double> outer;
    if (j.contains("outer")) outer = exponent_from_json(j.at("outer"), "outer");
    return direct_sum(std::move(blocks), outer);
  }
  if (kind == "mixed") {
    Mixed m{exponent_from_json(j.at("outer"), "outer"), exponent_from_json(j.at("inner"), "inner")};
    const Json blocks = j.value("blocks", Json("increasing"));
    if (blocks.is_string()) {
      if (blocks.get<std::string>() != "increasing") throw ConfigError("unknown block layout");
    } else if (blocks.is_object()) {
      m.layout = Mixed::Layout::Uniform;
      m.uniform_size = blocks.at("uniform").get<std::size_t>();
    } else {
      m.layout = Mixed::Layout::Explicit;
      m.sizes = blocks.get<std::vector<std::size_t>>();
    }
    return SpaceSpec(m);
  }
  if (kind == "haar") {
    return haar(j.at("p").get<double>(), j.at("d").get<int>(), j.at("max_level").get<int>());
  }
  throw ConfigError("unknown space kind \"" + kind + "\"");
}

SpaceSpec lp(double p) { return SpaceSpec(Lp{p}); }
SpaceSpec lorentz(double p, double q) { return SpaceSpec(LorentzPQ{p, q}); }
SpaceSpec weak_lorentz(Weight w) { return SpaceSpec(WeakLorentz{std::move(w)}); }
SpaceSpec direct_sum(std::vector<DirectSumBlock> blocks, std::optional<double> outer) {
  return SpaceSpec(DirectSum{std::move(blocks), outer});
}
SpaceSpec mixed_increasing(double outer, double inner) { return SpaceSpec(Mixed{outer, inner}); }
SpaceSpec mixed_uniform(double outer, double inner, std::size_t block_size) {
  return SpaceSpec(Mixed{outer, inner, Mixed::Layout::Uniform, block_size, {}});
}
SpaceSpec haar(double p, int d, int max_level) { return SpaceSpec(HaarHp{p, d, max_level}); }

std::vector<std::size_t> block_layout(const Mixed& m, std::size_t ambient) {
  if (m.layout == Mixed::Layout::Explicit) {
    std::size_t total = 0;
    for (auto n : m.sizes) total += n;
    if (total != ambient) block_mismatch("mixed", total, ambient);
    return m.sizes;
  }
  std::vector<std::size_t> sizes;
  std::size_t used = 0;
  std::size_t next = m.layout == Mixed::Layout::Uniform ? m.uniform_size : 1;
  while (used < ambient) {
    const std::size_t n = std::min(next, ambient - used);
    sizes.push_back(n);
    used += n;
    if (m.layout == Mixed::Layout::Increasing) ++next;
  }
  return sizes;
}

std::vector<double> nonincreasing_rearrangement(const CoefficientVector& f) {
  std::vector<double> a(f.ambient_size(), 0.0);
  std::size_t k = 0;
  for (const auto& e : f.entries()) a[k++] = std::abs(e.value);
  std::sort(a.begin(), a.end(), std::greater<>());
  return a;
}

double quasi_norm(const SpaceSpec& space, const CoefficientVector& f) {
  const auto moduli = moduli_of(f);
  for (const auto& [i, v] : moduli.items) {
    if (!std::isfinite(v)) throw NumericGuard("non-finite coefficient at index " + std::to_string(i));
  }
  if (space.uses_log_domain()) {
    const double log_value = eval(space, moduli, true);
    const double value = std::exp(log_value);
    if (std::isinf(value)) throw NumericGuard("quasi-norm overflows double range; use log_quasi_norm");
    if (value == 0.0 && log_value != -kInfinity) throw NumericGuard("quasi-norm underflows to 0");
    return value;
  }
  const double value = eval(space, moduli, false);
  if (!std::isfinite(value)) throw NumericGuard("quasi-norm is not finite");
  return value;
}

double log_quasi_norm(const SpaceSpec& space, const CoefficientVector& f) {
  const auto moduli = moduli_of(f);
  if (space.uses_log_domain()) return eval(space, moduli, true);
  return std::log(eval(space, moduli, false));
}

double fundamental_function_unit_vectors(const SpaceSpec& space, std::size_t m) {
  if (m == 0) return 0.0;
  const auto mm = static_cast<double>(m);
  if (const auto* s = std::get_if<Lp>(&space.kind())) {
    return s->p == kInfinity ? 1.0 : std::pow(mm, 1.0 / s->p);
  }
  if (const auto* s = std::get_if<LorentzPQ>(&space.kind())) {
    const double inv_p = s->p == kInfinity ? 0.0 : 1.0 / s->p;
    if (s->q == kInfinity) return std::pow(mm, inv_p);
    CompensatedSum acc;
    for (std::size_t k = 1; k <= m; ++k) {
      acc.add(std::pow(static_cast<double>(k), s->q * inv_p - 1.0));
    }
    return std::pow(acc.value(), 1.0 / s->q);
  }
  if (const auto* s = std::get_if<WeakLorentz>(&space.kind())) return s->weight.s(m);
  throw ConfigError("fundamental function needs a symmetric space; " + space.kind_name() +
                    " is not symmetric (use democracy module search)");
}

}  // namespace greedylab::spaces

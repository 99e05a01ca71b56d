#include "greedylab/hardy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace greedylab::hardy {

HaarRectangle::HaarRectangle(std::vector<int> levels, std::vector<std::uint64_t> positions)
    : levels_(std::move(levels)), positions_(std::move(positions)) {
  if (levels_.empty() || levels_.size() != positions_.size()) {
    throw ConfigError("rectangle needs one (level, position) pair per axis");
  }
  for (std::size_t t = 0; t < levels_.size(); ++t) {
    if (levels_[t] < 0 || levels_[t] > 62) throw ConfigError("dyadic level out of range");
    if (positions_[t] >= (std::uint64_t{1} << levels_[t])) {
      throw ConfigError("dyadic position " + std::to_string(positions_[t]) +
                        " out of range at level " + std::to_string(levels_[t]));
    }
  }
}

int HaarRectangle::total_level() const noexcept {
  int s = 0;
  for (int j : levels_) s += j;
  return s;
}

int HaarRectangle::max_level() const noexcept {
  int s = 0;
  for (int j : levels_) s = std::max(s, j);
  return s;
}

double HaarRectangle::measure() const noexcept { return std::ldexp(1.0, -total_level()); }

int haar_value(const HaarRectangle& r, std::span<const std::uint64_t> cell, int J) {
  if (cell.size() != static_cast<std::size_t>(r.dimension())) {
    throw ConfigError("cell dimension does not match rectangle");
  }
  if (r.max_level() + 1 > J) {
    throw ConfigError("grid resolution too coarse: Haar halves need J >= level + 1");
  }
  int sign = 1;
  for (int t = 0; t < r.dimension(); ++t) {
    if (cell[t] >= (std::uint64_t{1} << J)) throw ConfigError("cell outside grid");
    const int shift = J - r.levels()[t];
    const std::uint64_t width = std::uint64_t{1} << shift;
    const std::uint64_t start = r.positions()[t] << shift;
    if (cell[t] < start || cell[t] >= start + width) return 0;
    if (cell[t] - start >= width / 2) sign = -sign;
  }
  return sign;
}

void HaarExpansion::validate() const {
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("Haar model needs 0 < p <= 1");
  if (d < 1 || d > kMaxDimension) throw ConfigError("Haar model supports 1 <= d <= 3");
  if (J < 0) throw ConfigError("grid level J must be nonnegative");
  for (const auto& term : terms) {
    if (term.rect.dimension() != d) throw ConfigError("rectangle dimension differs from d");
    if (term.rect.max_level() > J) {
      throw ConfigError("grid level J=" + std::to_string(J) + " cannot resolve a level-" +
                        std::to_string(term.rect.max_level()) + " rectangle");
    }
  }
}

double hp_norm(const HaarExpansion& e) {
  e.validate();
  // Weights |c|² |R|^{-2/p} are handled in base 2 and rescaled by an even
  // power of two so that dyadic data stays exact.
  std::vector<double> log2w;
  std::vector<const HaarTerm*> live;
  int grid_level = 0;
  double top = -kInfinity;
  for (const auto& term : e.terms) {
    const double c = std::abs(term.coeff);
    if (c == 0.0) continue;
    const double lw = 2.0 * std::log2(c) + (2.0 / e.p) * term.rect.total_level();
    log2w.push_back(lw);
    live.push_back(&term);
    top = std::max(top, lw);
    grid_level = std::max(grid_level, term.rect.max_level());
  }
  if (live.empty()) return 0.0;
  if (grid_level * e.d > kMaxGridLog2) {
    throw ConfigError("grid of 2^" + std::to_string(grid_level * e.d) + " cells exceeds limit");
  }
  const int scale = 2 * static_cast<int>(std::floor(top / 2.0));

  const std::uint64_t side = std::uint64_t{1} << grid_level;
  std::size_t cells = 1;
  for (int t = 0; t < e.d; ++t) cells *= side;
  std::vector<double> s2(cells, 0.0);

  for (std::size_t n = 0; n < live.size(); ++n) {
    const double w = std::exp2(log2w[n] - scale);
    const auto& rect = live[n]->rect;
    std::array<std::uint64_t, kMaxDimension> lo{0, 0, 0}, hi{1, 1, 1};
    for (int t = 0; t < e.d; ++t) {
      const int shift = grid_level - rect.levels()[t];
      lo[t] = rect.positions()[t] << shift;
      hi[t] = lo[t] + (std::uint64_t{1} << shift);
    }
    // Strides with axis 0 slowest; unused trailing axes have extent 1.
    const std::uint64_t s1 = e.d == 3 ? side : 1;
    const std::uint64_t s0 = e.d == 3 ? side * side : (e.d == 2 ? side : 1);
    for (std::uint64_t x = lo[0]; x < hi[0]; ++x) {
      for (std::uint64_t y = lo[1]; y < hi[1]; ++y) {
        const std::uint64_t row = x * s0 + y * s1;
        for (std::uint64_t z = lo[2]; z < hi[2]; ++z) s2[row + z] += w;
      }
    }
  }

  CompensatedSum acc;
  const double half_p = e.p / 2.0;
  for (double v : s2) {
    if (v > 0.0) acc.add(std::pow(v, half_p));
  }
  const double mean = std::ldexp(acc.value(), -grid_level * e.d);
  const double result = std::ldexp(std::pow(mean, 1.0 / e.p), scale / 2);
  if (!std::isfinite(result)) throw NumericGuard("Haar quasi-norm overflow");
  return result;
}

std::vector<HaarRectangle> family_disjoint(std::size_t m, int d, int level) {
  if (d < 1 || d > kMaxDimension) throw ConfigError("Haar model supports 1 <= d <= 3");
  if (level < 0 || level * d > 62) throw ConfigError("level out of range");
  const std::uint64_t side = std::uint64_t{1} << level;
  const std::uint64_t available = std::uint64_t{1} << (level * d);
  if (m > available) {
    throw ConfigError("family_disjoint: m=" + std::to_string(m) + " exceeds 2^(level*d)=" +
                      std::to_string(available));
  }
  std::vector<HaarRectangle> out;
  out.reserve(m);
  for (std::uint64_t n = 0; n < m; ++n) {
    std::vector<std::uint64_t> pos(d);
    std::uint64_t rest = n;
    for (int t = d - 1; t >= 0; --t) {
      pos[t] = rest % side;
      rest /= side;
    }
    out.emplace_back(std::vector<int>(d, level), std::move(pos));
  }
  return out;
}

namespace {

void compositions(int remaining, int axis, std::vector<int>& current,
                  std::vector<std::vector<int>>& out) {
  if (axis + 1 == static_cast<int>(current.size())) {
    current[axis] = remaining;
    out.push_back(current);
    return;
  }
  for (int j = 0; j <= remaining; ++j) {
    current[axis] = j;
    compositions(remaining - j, axis + 1, current, out);
  }
}

}  // namespace

std::vector<HaarRectangle> family_hyperbolic(int k, int d) {
  if (d < 1 || d > kMaxDimension) throw ConfigError("Haar model supports 1 <= d <= 3");
  if (k < 0 || k > 40) throw ConfigError("hyperbolic level k out of range");
  std::vector<std::vector<int>> splits;
  std::vector<int> current(d, 0);
  compositions(k, 0, current, splits);
  std::vector<HaarRectangle> out;
  for (const auto& levels : splits) {
    std::uint64_t count = std::uint64_t{1} << k;
    for (std::uint64_t n = 0; n < count; ++n) {
      std::vector<std::uint64_t> pos(d);
      std::uint64_t rest = n;
      for (int t = d - 1; t >= 0; --t) {
        const std::uint64_t side = std::uint64_t{1} << levels[t];
        pos[t] = rest % side;
        rest /= side;
      }
      out.emplace_back(levels, std::move(pos));
    }
  }
  return out;
}

HaarExpansion unit_expansion(std::span<const HaarRectangle> family, double p, int J) {
  HaarExpansion e;
  e.p = p;
  e.d = family.empty() ? 1 : family.front().dimension();
  e.J = J;
  e.terms.reserve(family.size());
  for (const auto& r : family) e.terms.push_back({r, 1.0});
  return e;
}

HaarIndexing::HaarIndexing(int d, int max_level) : d_(d), L_(max_level) {
  if (d < 1 || d > kMaxDimension) throw ConfigError("Haar model supports 1 <= d <= 3");
  if (max_level < 1 || max_level * d > 60) throw ConfigError("Haar max_level out of range");
  radix_ = (std::size_t{1} << L_) - 1;
  size_ = 1;
  for (int t = 0; t < d_; ++t) size_ *= radix_;
}

Index HaarIndexing::index_of(const HaarRectangle& r) const {
  if (r.dimension() != d_) throw ConfigError("rectangle dimension differs from indexing");
  std::size_t n = 0;
  for (int t = 0; t < d_; ++t) {
    if (r.levels()[t] >= L_) throw ConfigError("rectangle level exceeds max_level - 1");
    const std::size_t heap = (std::size_t{1} << r.levels()[t]) + r.positions()[t];
    n = n * radix_ + (heap - 1);
  }
  return n + 1;
}

HaarRectangle HaarIndexing::rectangle(Index n) const {
  if (n < 1 || n > size_) throw ConfigError("Haar index out of range");
  std::size_t rest = n - 1;
  std::vector<int> levels(d_);
  std::vector<std::uint64_t> pos(d_);
  for (int t = d_ - 1; t >= 0; --t) {
    const std::size_t heap = rest % radix_ + 1;
    rest /= radix_;
    int j = 0;
    while ((std::size_t{2} << j) <= heap) ++j;
    levels[t] = j;
    pos[t] = heap - (std::size_t{1} << j);
  }
  return {std::move(levels), std::move(pos)};
}

Json expansion_to_json(const HaarExpansion& e) {
  Json terms = Json::array();
  for (const auto& term : e.terms) {
    terms.push_back({{"levels", std::vector<int>(term.rect.levels().begin(), term.rect.levels().end())},
                     {"positions", std::vector<std::uint64_t>(term.rect.positions().begin(),
                                                              term.rect.positions().end())},
                     {"coeff", scalar_to_json(term.coeff)}});
  }
  return {{"p", e.p}, {"d", e.d}, {"J", e.J}, {"terms", std::move(terms)}};
}

HaarExpansion expansion_from_json(const Json& j) {
  HaarExpansion e;
  e.p = j.at("p").get<double>();
  e.d = j.at("d").get<int>();
  e.J = j.at("J").get<int>();
  for (const auto& t : j.at("terms")) {
    e.terms.push_back({HaarRectangle(t.at("levels").get<std::vector<int>>(),
                                     t.at("positions").get<std::vector<std::uint64_t>>()),
                       scalar_from_json(t.at("coeff"))});
  }
  e.validate();
  return e;
}

}  // namespace greedylab::hardy

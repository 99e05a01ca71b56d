#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "greedylab/convexity.hpp"
#include "test_util.hpp"

using namespace greedylab;
using namespace greedylab::convexity;
using testutil::close_rel;
namespace sp = greedylab::spaces;

namespace {

CoefficientVector unit(std::size_t n, Index i) {
  const std::vector<Index> a{i};
  return CoefficientVector::indicator(n, a);
}

// Minimal C for eq. (sb) on the indicators 1_{[m]}, m ≤ n, in ℓ_p:
// the largest m with m > m^{1/p}/R.
double indicator_oracle(double p, double R, std::size_t n) {
  double c = 0.0;
  for (std::size_t m = 1; m <= n; ++m) {
    const double md = static_cast<double>(m);
    if (md > std::pow(md, 1.0 / p) / R) c = md;
  }
  return c;
}

}  // namespace

TEST_CASE("lattice sums and averages") {
  const auto f = CoefficientVector::dense({3, -2});
  const std::vector<CoefficientVector> single{f};
  CHECK(lattice_r_sum(single, 0.7) == f.modulus());
  CHECK(lattice_r_average(single, 0.7) == f.modulus());

  const std::vector<CoefficientVector> pyth{CoefficientVector::dense({3, 0}), CoefficientVector::dense({4, 0})};
  CHECK(lattice_r_sum(pyth, 2.0) == CoefficientVector::dense({5, 0}));
  const std::vector<CoefficientVector> maxes{CoefficientVector::dense({1, 2}), CoefficientVector::dense({2, 1})};
  CHECK(lattice_r_sum(maxes, kInfinity) == CoefficientVector::dense({2, 2}));

  const std::vector<CoefficientVector> same{f, f};
  for (double r : {0.3, 1.0, 2.5}) CHECK(lattice_r_average(same, r) == f.modulus());
  const std::vector<CoefficientVector> split{CoefficientVector::dense({2, 0}), CoefficientVector::dense({0, 2})};
  CHECK(lattice_r_average(split, 1.0) == CoefficientVector::dense({1, 1}));
  CHECK_THROWS_AS(lattice_r_average(split, kInfinity), ConfigError);
  CHECK_THROWS_AS(lattice_r_sum({}, 1.0), ConfigError);

  // Permutation invariance and monotonicity.
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    std::vector<CoefficientVector> fam;
    for (int i = 0; i < 4; ++i) fam.push_back(testutil::random_vector(rng, 9));
    const auto base = lattice_r_sum(fam, 0.6);
    std::reverse(fam.begin(), fam.end());
    const auto rev = lattice_r_sum(fam, 0.6);
    for (Index n = 1; n <= 9; ++n) CHECK(close_rel(std::abs(base[n]), std::abs(rev[n]), 1e-14));
    fam[0] = Scalar(2.0) * fam[0];
    const auto bigger = lattice_r_sum(fam, 0.6);
    for (Index n = 1; n <= 9; ++n) CHECK(std::abs(bigger[n]) >= std::abs(base[n]) * (1 - 1e-14));
  }
}

TEST_CASE("Khintchine examples") {
  const auto e1 = unit(2, 1), e2 = unit(2, 2);
  LatticeFamily one{{CoefficientVector::dense({1.5, -2})}, sp::lp(1.0)};
  auto k = khintchine_check(one, 1.0);
  CHECK(k.average == k.square);
  CHECK(k.min_ratio == 1.0);
  CHECK(k.max_ratio == 1.0);

  LatticeFamily orth{{e1, e2}, sp::lp(1.0)};
  k = khintchine_check(orth, 2.0);
  CHECK(k.square == CoefficientVector::dense({1, 1}));
  CHECK(k.average == CoefficientVector::dense({1, 1}));

  LatticeFamily twice{{e1, e1}, sp::lp(1.0)};
  k = khintchine_check(twice, 1.0);
  CHECK(close_rel(std::abs(k.square[1]), std::sqrt(2.0), 1e-15));
  CHECK(std::abs(k.average[1]) == 1.0);
  CHECK(close_rel(k.max_ratio, std::sqrt(2.0), 1e-15));
  CHECK(k.max_ratio <= scalar_khintchine_range(1.0).second * (1 + 1e-12));

  std::vector<CoefficientVector> many(21, e1);
  CHECK_THROWS_AS(khintchine_check({many, sp::lp(1.0)}, 1.0), ConfigError);
}

TEST_CASE("Khintchine sandwich against the scalar constants") {
  const auto sampler = random_families(8, 10, 77);
  for (double r : {0.5, 1.0, 1.5, 1.9, 2.0, 3.0}) {
    const auto [lo, hi] = scalar_khintchine_range(r);
    for (std::size_t t = 0; t < 20; ++t) {
      const auto k = khintchine_check({*sampler.draw(t), sp::lp(0.5)}, r);
      CHECK(k.min_ratio >= lo * (1 - 1e-12));
      CHECK(k.max_ratio <= hi * (1 + 1e-12));
      CHECK(k.min_ratio <= k.max_ratio);
    }
  }
  // r = 2 on disjoint supports: average equals the square function.
  const auto disjoint = disjoint_families(12, 6, 5);
  for (std::size_t t = 0; t < 20; ++t) {
    const auto k = khintchine_check({*disjoint.draw(t), sp::lp(1.0)}, 2.0);
    for (Index n = 1; n <= 12; ++n) CHECK(close_rel(std::abs(k.average[n]), std::abs(k.square[n]), 1e-15));
  }
}

TEST_CASE("Maurey check") {
  const auto e1 = unit(3, 1);
  CHECK(maurey_check({{CoefficientVector::dense({1, -2, 0.5})}, sp::lp(0.5)}, 0.7).ratio == doctest::Approx(1.0));
  const auto twice = maurey_check({{e1, e1}, sp::lp(1.0)}, 1.0);
  CHECK(close_rel(twice.lhs, std::sqrt(2.0), 1e-14));
  CHECK(close_rel(twice.rhs, 1.0, 1e-14));
  CHECK(close_rel(twice.ratio, std::sqrt(2.0), 1e-14));

  // Disjoint unit vectors in ℓ_p: both sides equal m^{1/p}.
  for (double p : {0.5, 1.0}) {
    for (std::size_t m = 1; m <= 8; ++m) {
      std::vector<CoefficientVector> fam;
      for (Index i = 1; i <= m; ++i) fam.push_back(unit(10, i));
      const auto res = maurey_check({fam, sp::lp(p)}, 1.0);
      CHECK(close_rel(res.lhs, std::pow(m, 1.0 / p), 1e-12));
      CHECK(close_rel(res.ratio, 1.0, 1e-12));
    }
  }
}

TEST_CASE("convexity constants") {
  for (double p : {0.3, 0.5, 1.0}) {
    const auto est = convexity_constant(sp::lp(p), p, random_families(10, 6, 3), 200);
    CHECK(close_rel(est.upper_const, 1.0, 1e-12));
    CHECK(close_rel(est.lower_const, 1.0, 1e-12));
    const auto lower_r = convexity_constant(sp::lp(p), p / 2, random_families(10, 6, 4), 200);
    CHECK(lower_r.upper_const <= 1.0 + 1e-12);
  }
  const auto half = convexity_constant(sp::lp(0.5), 1.0, disjoint_families(10, 2, 9), 50);
  CHECK(half.upper_const > 1.0);
  const std::vector<CoefficientVector> two{unit(2, 1), unit(2, 2)};
  const auto exact = convexity_constant(sp::lp(0.5), 1.0, {"pair", 0, [&](std::size_t) {
                                                              return std::optional(two);
                                                            }},
                                        1);
  CHECK(exact.upper_const == 2.0);
}

TEST_CASE("L-convexity probe") {
  const double grid[] = {0.1, 0.3, 0.5, 0.9};
  // f_i = f for every i: the hypothesis always holds and max‖f_i‖ = ‖f‖.
  const std::vector<CoefficientVector> ind{CoefficientVector::indicator(6, std::vector<Index>{1, 2, 3})};
  const auto rep = l_convexity_probe(sp::lp(0.5), grid, random::from_list(ind), 1);
  CHECK(rep.best_eps.has_value());

  const auto sampled = l_convexity_probe(sp::lp(1.0), grid, random::mixture(12, 3), 100);
  CHECK(sampled.tested.back() > 0);
  const double empty[] = {0.0};
  CHECK_THROWS_AS(l_convexity_probe(sp::lp(1.0), std::span<const double>{}, random::mixture(4, 1), 1),
                  ConfigError);
  CHECK_THROWS_AS(l_convexity_probe(sp::lp(1.0), empty, random::mixture(4, 1), 1), ConfigError);
}

TEST_CASE("strong absoluteness profile on indicators") {
  const double Rs[] = {0.5, 1.0, 2.0, 3.0, 4.0, 8.0, 16.0};
  const std::size_t n = 64;
  const auto half = strong_absoluteness_profile(sp::lp(0.5), Rs, random::initial_indicators(n), n);
  for (std::size_t i = 0; i < std::size(Rs); ++i) {
    CHECK(half.C_values[i] == indicator_oracle(0.5, Rs[i], n));
    CHECK_FALSE(half.diverged[i]);
    if (i > 0) CHECK(half.C_values[i] >= half.C_values[i - 1]);
  }
  CHECK(half.C_values[2] == 1.0);
  CHECK(half.C_values[4] == 3.0);

  const auto one = strong_absoluteness_profile(sp::lp(1.0), Rs, random::initial_indicators(n), n + 10);
  for (std::size_t i = 0; i < std::size(Rs); ++i) {
    CHECK(one.C_values[i] == indicator_oracle(1.0, Rs[i], n));
    CHECK(one.diverged[i] == (Rs[i] > 1.0));
  }
}

TEST_CASE("series tests") {
  std::vector<double> sq(100000), lin(100000), log2(100000);
  for (std::size_t m = 1; m <= sq.size(); ++m) {
    const double x = static_cast<double>(m);
    sq[m - 1] = x * x;
    lin[m - 1] = x;
    log2[m - 1] = x * std::pow(1.0 + std::log(x), 2.0);
  }
  const auto a = sa_series_test(sq, sq.size());
  CHECK(std::abs(a.partial_sum - std::numbers::pi * std::numbers::pi / 6) < 1e-3);
  CHECK(a.verdict == SeriesVerdict::Converges);
  CHECK(sa_series_test(lin, lin.size()).verdict == SeriesVerdict::Diverges);
  const auto c = sa_series_test(log2, log2.size());
  CHECK(c.verdict == SeriesVerdict::Converges);
  // Integral test: Σ 1/(m(1+log m)²) ≤ 1 + ∫_1^H dx/(x(1+log x)²) < 2.
  CHECK(c.partial_sum < 2.0 - 1.0 / (1.0 + std::log(1e5)) + 1e-12);

  std::vector<double> bad{1, 2, 1, 3, 4, 5, 6, 7, 8};
  CHECK_THROWS_AS(sa_series_test(bad, 9), ConfigError);
}

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "greedylab/greedy.hpp"
#include "greedylab/parallel.hpp"
#include "test_util.hpp"

using namespace greedylab;
using namespace greedylab::greedy;
using testutil::close_rel;
namespace sp = greedylab::spaces;

namespace {

// Sort oracle: all of 1..N by (|a| desc, index asc), first m, ascending.
std::vector<Index> sorted_prefix(const CoefficientVector& f, std::size_t m) {
  const auto dense = f.to_dense();
  std::vector<Index> idx(dense.size());
  std::iota(idx.begin(), idx.end(), Index{1});
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    return std::abs(dense[a - 1]) > std::abs(dense[b - 1]);
  });
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<Index> set(std::initializer_list<Index> xs) { return xs; }

}  // namespace

TEST_CASE("sgn") {
  CHECK(sgn(0.0) == Scalar(1.0));
  CHECK(sgn(-3.0) == Scalar(-1.0));
  CHECK(std::abs(sgn({3.0, 4.0}) - Scalar(0.6, 0.8)) < 1e-15);
}

TEST_CASE("greedy sets follow the tie rule") {
  CHECK(greedy_set(CoefficientVector::dense({1, 1, 0.5}), 2) == set({1, 2}));
  CHECK(greedy_set(CoefficientVector::dense({1, 0.5, 1}), 1) == set({1}));
  CHECK(greedy_set(CoefficientVector::dense({0.5, 1, 1}), 2) == set({2, 3}));
  // Past the support, zeros join in index order.
  CHECK(greedy_set(CoefficientVector::dense({0, 2, 0, 1}), 3) == set({1, 2, 4}));
  CHECK(greedy_ordering(CoefficientVector::dense({0, 2, 0, -2})).permutation ==
        std::vector<Index>{2, 4, 1, 3});
  CHECK_THROWS_AS(greedy_set(CoefficientVector::dense({1, 2}), 3), ConfigError);
}

TEST_CASE("greedy approximation, truncation and projection examples") {
  const auto f = CoefficientVector::dense({3, -2, 1});
  CHECK(greedy_approximation(f, 2) == CoefficientVector::dense({3, -2, 0}));
  CHECK(greedy_approximation(f, 3) == f);
  CHECK(greedy_approximation(CoefficientVector::dense({1, 1, 1}), 1) == CoefficientVector::dense({1, 0, 0}));

  CHECK(restricted_truncation(f, 2) == CoefficientVector::dense({2, -2, 0}));
  CHECK(restricted_truncation(CoefficientVector::dense({5}), 1) == CoefficientVector::dense({5}));
  CHECK(restricted_truncation(CoefficientVector::dense({1, 1}), 2) == CoefficientVector::dense({1, 1}));
  CHECK(close_rel(sp::quasi_norm(sp::lp(1.0), restricted_truncation(f, 2)) / sp::quasi_norm(sp::lp(1.0), f),
                  4.0 / 6.0, 1e-15));

  CHECK(coordinate_projection(f, set({1, 3})) == CoefficientVector::dense({3, 0, 1}));
  CHECK(coordinate_projection(f, set({1, 2, 3})) == f);
  CHECK(coordinate_projection(f, {}) == CoefficientVector(3));

  const auto a = set({1, 2});
  CHECK(indicator_sum(4, SignPattern::ones(a), a) == CoefficientVector::dense({1, 1, 0, 0}));
  CHECK(indicator_sum(4, SignPattern({{1, 1.0}, {2, -1.0}}), a) == CoefficientVector::dense({1, -1, 0, 0}));
  CHECK(indicator_sum(4, SignPattern(), {}) == CoefficientVector(4));
  CHECK_THROWS_AS(SignPattern({{1, 0.5}}), ConfigError);
  CHECK(SignPattern::of(f, set({2, 3})).at(2) == Scalar(-1.0));
}

TEST_CASE("TGA invariants on random vectors") {
  std::mt19937_64 rng(314);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + trial % 23;
    const auto f = trial % 2 ? testutil::random_tied_vector(rng, n) : testutil::random_vector(rng, n);
    const auto dense = f.to_dense();
    std::vector<Index> previous;
    for (std::size_t m = 0; m <= n; ++m) {
      const auto a = greedy_set(f, m);
      CHECK(a == sorted_prefix(f, m));
      CHECK(std::includes(a.begin(), a.end(), previous.begin(), previous.end()));
      previous = a;

      const auto g = greedy_approximation(f, m);
      CHECK(greedy_approximation(g, m) == g);

      const auto r = restricted_truncation(f, m);
      if (m >= 1 && m <= f.support_size()) {
        const double level = sp::nonincreasing_rearrangement(f)[m - 1];
        CHECK(r.support() == a);
        for (const auto& e : r.entries()) {
          CHECK(std::abs(e.value) == level);
          CHECK(std::abs(e.value - level * sgn(dense[e.index - 1])) < 1e-15);
        }
      }
    }
    CHECK(greedy_approximation(f, f.support_size()) == f);
  }
}

TEST_CASE("quasi-greedy and truncation constants of unit vector systems") {
  const auto sampler = random::mixture(20, 17);
  for (double p : {0.2, 0.5, 1.0}) {
    const auto qg = quasi_greedy_constant(sp::lp(p), sampler, 60);
    CHECK(qg.upper_const == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(qg.upper_const <= 1.0 + 1e-12);
    CHECK(qg.lower_const > 0.0);
    const auto cr = truncation_qg_constant(sp::lp(p), sampler, 60);
    CHECK(cr.upper_const <= 1.0 + 1e-12);
    CHECK(cr.sampler == "mixture");
    CHECK(cr.seed == 17);
  }
  const auto weak = sp::weak_lorentz(sp::Weight::power(1.0));
  const auto wq = quasi_greedy_constant(weak, random::two_block(30, 3), 50);
  CHECK(wq.upper_const >= 1.0);
  CHECK(std::isfinite(wq.upper_const));

  const std::vector<CoefficientVector> one{CoefficientVector::dense({3, -2, 1})};
  const auto l1 = truncation_qg_constant(sp::lp(1.0), random::from_list(one), 1);
  CHECK(close_rel(l1.samples[1].second, 4.0 / 6.0, 1e-15));

  CHECK_THROWS_AS(quasi_greedy_constant(sp::lp(1.0), sampler, 0), ConfigError);
  CHECK_THROWS_WITH(truncation_qg_constant(sp::lp(1.0), random::from_list({}), 1),
                    doctest::Contains("sampler exhausted"));
}

TEST_CASE("estimates are deterministic and independent of the thread count") {
  const auto space = sp::mixed_increasing(1.0, 0.5);
  const auto sampler = random::mixture(21, 99);
  const auto a = quasi_greedy_constant(space, sampler, 90);
  set_default_threads(4);
  const auto b = quasi_greedy_constant(space, sampler, 90);
  set_default_threads(1);
  CHECK(a.samples == b.samples);
  CHECK(a.to_json(true).dump() == b.to_json(true).dump());
}

TEST_CASE("UCC constant") {
  const auto sets = random::random_sets(14, 12, 5);
  for (const auto& s : testutil::sample_spaces()) {
    if (!s.is_symmetric()) continue;
    const auto est = ucc_constant(s, sets, 10, 1, {14, false});
    CHECK(est.upper_const == 1.0);
    CHECK(est.lower_const == 1.0);
  }
  const std::vector<std::vector<Index>> twelve{{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}};
  const auto exact = ucc_constant(sp::lp(0.5), random::sets_from_list(twelve), 1, 1, {20, false});
  CHECK(exact.exact);
  CHECK(exact.evaluations == 4096);

  const std::vector<std::vector<Index>> big{{1, 3, 5, 7, 9, 11, 13, 15, 17, 19, 20, 2, 4}};
  const auto mc = ucc_constant(sp::lp(0.5), random::sets_from_list(big), 1, 10, {20, false});
  CHECK_FALSE(mc.exact);
  CHECK(mc.evaluations == kMinSignSamples);

  const auto h = sp::haar(0.5, 2, 2);
  const auto hs = ucc_constant(h, random::random_sets(9, 6, 8), 5, 1, {});
  CHECK(close_rel(hs.upper_const, 1.0, 1e-14));
  const auto hc = ucc_constant(h, random::random_sets(9, 6, 8), 2, 16, {0, true});
  CHECK(close_rel(hc.upper_const, 1.0, 1e-12));

  // Block lattices ignore signs as well.
  const auto mixed = ucc_constant(sp::mixed_increasing(1.0, 0.5), sets, 5, 1, {14, false});
  CHECK(mixed.upper_const == 1.0);
  CHECK_THROWS_AS(ucc_constant(sp::lp(1.0), sets, 1, 1, {}), ConfigError);
}

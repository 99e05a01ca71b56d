#include <doctest.h>

#include <cmath>
#include <numeric>

#include "greedylab/democracy.hpp"
#include "greedylab/hardy.hpp"
#include "test_util.hpp"

using namespace greedylab;
using namespace greedylab::democracy;
using testutil::close_rel;
namespace sp = greedylab::spaces;

namespace {

// μ straight from its definition: sup over |A| = |B| ≤ m of ‖1_A‖/‖1_B‖,
// enumerating every subset of 1..n once per cardinality.
double raw_mu(const sp::SpaceSpec& space, std::size_t n, std::size_t m) {
  double mu = 1.0;
  for (std::size_t size = 1; size <= m; ++size) {
    double hi = 0.0, lo = kInfinity;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != size) continue;
      std::vector<Index> a;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1u) a.push_back(i + 1);
      }
      const double v = sp::quasi_norm(space, CoefficientVector::indicator(n, a));
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
    mu = std::max(mu, hi / lo);
  }
  return mu;
}

void check_witness(const sp::SpaceSpec& space, std::size_t ambient, const DemocracyValue& v) {
  CHECK(close_rel(sp::quasi_norm(space, CoefficientVector::indicator(ambient, v.witness)), v.value, 1e-12));
}

}  // namespace

TEST_CASE("fundamental functions of symmetric spaces are exact") {
  for (double p : {0.25, 0.5, 0.75, 1.0}) {
    for (std::size_t m : {1u, 2u, 100u, 1024u}) {
      const auto u = phi_upper(sp::lp(p), m);
      const auto l = phi_lower(sp::lp(p), m);
      CHECK(u.exact);
      CHECK(close_rel(u.value, std::pow(m, 1.0 / p), 1e-12));
      CHECK(u.value == l.value);
    }
  }
  const auto w = sp::Weight::power_log(1.0, 1.0);
  CHECK(phi_lower(sp::weak_lorentz(w), 77).value == w.s(77));
  CHECK(phi_upper(sp::lp(0.5), 4).value == 16.0);
  CHECK(democracy_parameter_mum(sp::lp(0.5), 10) == 1.0);
}

TEST_CASE("direct sum l_{1/2} + l_{1/4}") {
  const auto space = sp::direct_sum({{sp::lp(0.5), 10}, {sp::lp(0.25), 10}});
  const auto u = phi_upper(space, 4);
  CHECK(u.value == 256.0);
  CHECK(u.witness.front() > 10);
  const auto l = phi_lower(space, 4);
  CHECK(l.value == 16.0);
  CHECK(l.witness.back() <= 10);
  check_witness(space, 20, u);
  check_witness(space, 20, l);
  for (std::size_t m = 1; m <= 6; ++m) {
    CHECK(close_rel(democracy_parameter_mum(space, m), std::pow(m, 2.0), 1e-12));
  }
}

TEST_CASE("block search agrees with exhaustive search") {
  std::vector<sp::SpaceSpec> spaces = {
      sp::direct_sum({{sp::lp(0.5), 6}, {sp::lp(0.25), 6}}),
      sp::direct_sum({{sp::lp(1.0), 3}, {sp::lorentz(0.5, 2.0), 5}, {sp::lp(0.3), 4}}, 0.5),
      sp::direct_sum({{sp::lp(2.0), 4}, {sp::weak_lorentz(sp::Weight::power(1.0)), 8}}, kInfinity),
      sp::direct_sum({{sp::direct_sum({{sp::lp(0.5), 3}, {sp::lp(1.0), 3}}), 6}, {sp::lp(0.4), 6}}),
      sp::mixed_increasing(1.0, 0.5),
      sp::mixed_increasing(0.5, 1.0),
      sp::mixed_uniform(0.25, 0.5, 3),
  };
  for (const auto& s : spaces) {
    CAPTURE(s.to_json().dump());
    SearchOptions fast{Strategy::Auto, 12, 0, 0};
    SearchOptions brute{Strategy::Exhaustive, 12, 0, 0};
    for (std::size_t m = 1; m <= 6; ++m) {
      const auto u = phi_upper(s, m, fast);
      const auto l = phi_lower(s, m, fast);
      CHECK(u.exact);
      CHECK(close_rel(u.value, phi_upper(s, m, brute).value, 1e-12));
      CHECK(close_rel(l.value, phi_lower(s, m, brute).value, 1e-12));
      check_witness(s, 12, u);
      check_witness(s, 12, l);
      CHECK(l.value <= u.value);
    }
    // Raw definition of μ against the φ-ratio route: exact agreement.
    const double raw = raw_mu(s, 12, 6);
    CHECK(close_rel(democracy_parameter_mum(s, 6, fast), raw, 1e-12));
  }
}

TEST_CASE("profiles are monotone") {
  const auto space = sp::mixed_increasing(1.0, 0.25);
  std::vector<std::size_t> ms(40);
  std::iota(ms.begin(), ms.end(), std::size_t{1});
  const auto prof = democracy_profile(space, ms, {Strategy::Auto, 200, 0, 0});
  for (std::size_t i = 0; i < ms.size(); ++i) {
    CHECK(prof.phi_l[i].value <= prof.phi_l_eq[i].value);
    CHECK(prof.phi_l_eq[i].value <= prof.phi_u[i].value);
    CHECK(prof.mu[i] >= 1.0);
    if (i > 0) {
      CHECK(prof.phi_u[i].value >= prof.phi_u[i - 1].value);
      CHECK(prof.mu[i] >= prof.mu[i - 1]);
    }
  }
}

TEST_CASE("Haar model: disjoint and hyperbolic witnesses") {
  const auto h = sp::haar(0.5, 2, 4);
  const auto u = phi_upper(h, 32);
  CHECK(u.value == doctest::Approx(1024.0).epsilon(1e-12));
  CHECK(u.exact);
  CHECK(u.method == "family_disjoint");
  const auto l = phi_lower(h, 32);
  CHECK(l.value == doctest::Approx(128.0).epsilon(1e-12));
  CHECK_FALSE(l.exact);
  CHECK(l.method == "family_hyperbolic");
  const std::size_t n = hardy::HaarIndexing(2, 4).size();
  check_witness(h, n, u);
  check_witness(h, n, l);
  CHECK(close_rel(democracy_parameter_mum(h, 32, {}, {32}), 8.0, 1e-12));
  CHECK(democracy_parameter_mum(h, 32) >= 8.0 - 1e-9);

  // Small model: the exhaustive oracle confirms the candidate families.
  const auto small = sp::haar(0.5, 2, 2);
  for (std::size_t m = 1; m <= 5; ++m) {
    const auto brute = phi_lower(small, m, {Strategy::Exhaustive, 0, 0, 4});
    const auto fam = phi_lower(small, m, {Strategy::Families, 0, 0, 4});
    CHECK(brute.exact);
    CHECK(fam.value >= brute.value * (1 - 1e-12));
    const auto fu = phi_upper(small, m, {Strategy::Families, 0, 0, 0});
    const auto bu = phi_upper(small, m, {Strategy::Exhaustive, 0, 0, 0});
    CHECK(fu.value <= bu.value * (1 + 1e-12));
    // A disjoint layer exists up to m = 4 and then attains the maximum.
    CHECK(fu.exact == (m <= 4));
    if (fu.exact) CHECK(close_rel(fu.value, bu.value, 1e-12));
  }
  CHECK_THROWS_AS(phi_upper(h, 32, {Strategy::Exhaustive, 0, 0, 0}), ConfigError);
}

TEST_CASE("k_m and Lebesgue constants") {
  CHECK(unconditionality_parameter_km(sp::lp(0.5), 5) == 1.0);
  CHECK_THROWS_WITH(unconditionality_parameter_km(sp::lp(0.5), 0), doctest::Contains("m >= 1 required"));
  KmOptions sampled;
  sampled.sampler = random::mixture(16, 4);
  sampled.force_sampling = true;
  for (const auto& s : testutil::sample_spaces()) {
    if (s.fixed_ambient() && *s.fixed_ambient() != 14) continue;
    sampled.sampler = random::mixture(14, 4);
    const double k = unconditionality_parameter_km(s, 5, sampled);
    CHECK(k <= 1.0 + 1e-12);
    CHECK(k > 0.0);
  }

  for (double p : {0.5, 1.0}) {
    CHECK(lebesgue_constant(sp::lp(p), 4, "proxy") == 1.0);
    LebesgueOptions o;
    o.search.ambient = 24;
    CHECK(lebesgue_constant(sp::lp(p), 4, "direct", o) == 1.0);
  }
  const auto sum = sp::direct_sum({{sp::lp(0.5), 16}, {sp::lp(0.25), 16}});
  for (std::size_t m : {2u, 4u, 8u}) {
    const double proxy = lebesgue_constant(sum, m, "proxy");
    CHECK(close_rel(proxy, std::pow(m, 2.0), 1e-12));
    const double direct = lebesgue_constant(sum, m, "direct");
    CHECK(direct >= 1.0);
    CHECK(std::isfinite(direct));
  }
  CHECK_THROWS_AS(lebesgue_constant(sum, 2, "nonsense"), ConfigError);
}

TEST_CASE("power-log fits") {
  std::vector<double> m, v, w;
  for (int k = 4; k <= 12; ++k) {
    const double x = std::ldexp(1.0, k);
    m.push_back(x);
    v.push_back(x * x);
    w.push_back(x * x / (1.0 + std::log(x)));
  }
  auto f = fit_power_log(m, v);
  CHECK(std::abs(f.a - 2.0) < 1e-10);
  CHECK(std::abs(f.b) < 1e-10);
  CHECK(f.residual < 1e-10);
  f = fit_power_log(m, w);
  CHECK(std::abs(f.a - 2.0) < 1e-6);
  CHECK(std::abs(f.b + 1.0) < 1e-6);
  CHECK(std::abs(f.C - 1.0) < 1e-6);

  const std::vector<double> three{1, 2, 8}, vals{1, 2, 3};
  CHECK_THROWS_AS(fit_power_log(three, vals), ConfigError);
  const std::vector<double> narrow{10, 11, 12, 13}, nv{1, 2, 3, 4};
  CHECK_THROWS_AS(fit_power_log(narrow, nv), ConfigError);

  std::vector<double> logs;
  for (double x : m) logs.push_back(3.0 * std::pow(1.0 + std::log2(x), 1.5));
  const auto fixed = fit_log_fixed(m, logs, 1.5);
  CHECK(close_rel(fixed.C, 3.0, 1e-12));
  CHECK(fixed.residual < 1e-12);
  const auto free = fit_log_free(m, logs);
  CHECK(std::abs(free.b - 1.5) < 1e-10);
}

#include "greedylab/weight.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace greedylab::spaces {

Weight Weight::from_list(std::vector<double> w) {
  if (w.empty() || !(w.front() > 0.0)) throw ConfigError("weight needs w_1 > 0");
  Weight out;
  out.rule_ = Rule::Explicit;
  out.prefix_.reserve(w.size());
  double run = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ConfigError("weight entries must be finite and >= 0");
    run += x;
    out.prefix_.push_back(run);
  }
  out.list_ = std::move(w);
  return out;
}

Weight Weight::power(double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("power weight needs alpha > 0");
  Weight out;
  out.rule_ = Rule::Power;
  out.alpha_ = alpha;
  return out;
}

Weight Weight::power_log(double alpha, double beta, double log_base) {
  if (!(alpha > 0.0) || !(beta >= 0.0) || !(log_base > 1.0)) {
    throw ConfigError("power_log weight needs alpha > 0, beta >= 0, base > 1");
  }
  Weight out;
  out.rule_ = Rule::PowerLog;
  out.alpha_ = alpha;
  out.beta_ = beta;
  out.base_ = log_base;
  return out;
}

Weight Weight::geometric(double base) {
  if (!(base >= 1.0)) throw ConfigError("geometric weight needs base >= 1");
  Weight out;
  out.rule_ = Rule::Geometric;
  out.base_ = base;
  return out;
}

std::size_t Weight::horizon() const noexcept {
  return rule_ == Rule::Explicit ? list_.size() : std::numeric_limits<std::size_t>::max();
}

double Weight::s(Index m) const {
  if (m == 0) return 0.0;
  const auto x = static_cast<double>(m);
  switch (rule_) {
    case Rule::Explicit:
      if (m > list_.size()) {
        throw ConfigError("weight list too short: need s_" + std::to_string(m) + ", have " +
                          std::to_string(list_.size()) + " entries");
      }
      return prefix_[m - 1];
    case Rule::Power:
      return std::pow(x, alpha_);
    case Rule::PowerLog:
      return std::pow(x, alpha_) * std::pow(1.0 + std::log(x) / std::log(base_), beta_);
    case Rule::Geometric:
      return std::pow(base_, x);
  }
  return 0.0;
}

double Weight::w(Index n) const {
  if (n == 0) throw ConfigError("weights are indexed from 1");
  if (rule_ == Rule::Explicit) {
    if (n > list_.size()) throw ConfigError("weight list too short");
    return list_[n - 1];
  }
  return s(n) - s(n - 1);
}

Json Weight::to_json() const {
  switch (rule_) {
    case Rule::Explicit:
      return {{"rule", "explicit"}, {"w", list_}};
    case Rule::Power:
      return {{"rule", "power"}, {"alpha", alpha_}};
    case Rule::PowerLog:
      return {{"rule", "power_log"}, {"alpha", alpha_}, {"beta", beta_}, {"log_base", base_}};
    case Rule::Geometric:
      return {{"rule", "geometric"}, {"base", base_}};
  }
  return {};
}

Weight Weight::from_json(const Json& j) {
  const auto rule = j.at("rule").get<std::string>();
  if (rule == "explicit") return from_list(j.at("w").get<std::vector<double>>());
  if (rule == "power") return power(j.at("alpha").get<double>());
  if (rule == "power_log") {
    return power_log(j.at("alpha").get<double>(), j.value("beta", 0.0), j.value("log_base", 2.0));
  }
  if (rule == "geometric") return geometric(j.at("base").get<double>());
  throw ConfigError("unknown weight rule \"" + rule + "\"");
}

std::vector<double> primitive_weight(const Weight& w, std::size_t n) {
  std::vector<double> s(n);
  for (std::size_t m = 1; m <= n; ++m) s[m - 1] = w.s(m);
  return s;
}

DoublingReport is_doubling(std::span<const double> s, std::size_t horizon) {
  if (horizon < 2) throw ConfigError("doubling horizon must be >= 2");
  if (s.size() < 2 * horizon) {
    throw ConfigError("doubling check needs s up to index 2*horizon = " +
                      std::to_string(2 * horizon));
  }
  double best = 0.0;
  std::size_t arg = 1;
  double best_first_half = 0.0;
  for (std::size_t m = 1; m <= horizon; ++m) {
    const double ratio = s[2 * m - 1] / s[m - 1];
    if (ratio > best) {
      best = ratio;
      arg = m;
    }
    if (m <= horizon / 2) best_first_half = best;
  }
  const bool stable = std::isfinite(best) && best <= best_first_half * (1.0 + 1e-9);
  return {stable, best, arg};
}

}  // namespace greedylab::spaces

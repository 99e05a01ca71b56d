#include "greedylab/estimate.hpp"

#include <algorithm>

namespace greedylab {

void TwoSidedEstimate::record(std::size_t m, double value) {
  if (samples.empty()) {
    lower_const = upper_const = value;
  } else {
    lower_const = std::min(lower_const, value);
    upper_const = std::max(upper_const, value);
  }
  samples.emplace_back(m, value);
}

Json TwoSidedEstimate::to_json(bool with_samples) const {
  Json j{{"lower_const", lower_const}, {"upper_const", upper_const}, {"sampler", sampler},
         {"seed", seed},               {"trials", trials},           {"evaluations", evaluations},
         {"exact", exact},             {"sample_count", samples.size()}};
  if (with_samples) {
    Json s = Json::array();
    for (auto [m, v] : samples) s.push_back({m, v});
    j["samples"] = std::move(s);
  }
  return j;
}

}  // namespace greedylab

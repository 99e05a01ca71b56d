#include "greedylab/json_io.hpp"

#include <string>

namespace greedylab {

Json exponent_to_json(double p) {
  if (p == kInfinity) return "inf";
  return p;
}

double exponent_from_json(const Json& j, const char* what) {
  double p = 0.0;
  if (j.is_string() && (j.get<std::string>() == "inf" || j.get<std::string>() == "infinity")) {
    p = kInfinity;
  } else if (j.is_number()) {
    p = j.get<double>();
  } else {
    throw ConfigError(std::string(what) + ": expected a number or \"inf\"");
  }
  require_exponent(p, what);
  return p;
}

Json scalar_to_json(Scalar z) {
  if (z.imag() == 0.0) return z.real();
  return Json::array({z.real(), z.imag()});
}

Scalar scalar_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError("scalar must be a number or a [re, im] pair");
}

Json vector_to_json(const CoefficientVector& f) {
  Json entries = Json::array();
  for (const auto& e : f.entries()) {
    if (e.value != Scalar{}) entries.push_back(Json::array({e.index, scalar_to_json(e.value)}));
  }
  return {{"ambient", f.ambient_size()}, {"entries", std::move(entries)}};
}

CoefficientVector vector_from_json(const Json& j) {
  if (j.is_array()) {
    std::vector<Scalar> values;
    values.reserve(j.size());
    for (const auto& x : j) values.push_back(scalar_from_json(x));
    return CoefficientVector::dense(std::span<const Scalar>(values));
  }
  if (!j.is_object() || !j.contains("ambient")) {
    throw ConfigError("vector must be an array or an object with \"ambient\" and \"entries\"");
  }
  const auto ambient = j.at("ambient").get<std::size_t>();
  std::vector<Entry> entries;
  if (j.contains("entries")) {
    for (const auto& e : j.at("entries")) {
      if (!e.is_array() || e.size() != 2) throw ConfigError("entry must be [index, scalar]");
      entries.push_back({e[0].get<Index>(), scalar_from_json(e[1])});
    }
  }
  return CoefficientVector(ambient, std::move(entries));
}

Json parse_json(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

}  // namespace greedylab

#pragma once

#include <json.hpp>

#include "greedylab/coefficients.hpp"

namespace greedylab {

using Json = nlohmann::json;

/// Exponents in (0, inf]; infinity is written as the string "inf".
Json exponent_to_json(double p);
double exponent_from_json(const Json& j, const char* what);

/// Real scalars are plain numbers, complex ones are [re, im] pairs.
Json scalar_to_json(Scalar z);
Scalar scalar_from_json(const Json& j);

/// Vectors are either a dense array of scalars or
/// {"ambient": N, "entries": [[index, scalar], ...]} with 1-based indices.
Json vector_to_json(const CoefficientVector& f);
CoefficientVector vector_from_json(const Json& j);

/// Parses text and rethrows nlohmann parse errors as ConfigError.
Json parse_json(const std::string& text, const char* what);

}  // namespace greedylab

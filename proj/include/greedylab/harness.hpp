#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "greedylab/json_io.hpp"

/// Experiment configs, built-in presets and CSV persistence.
namespace greedylab::harness {

inline constexpr int kSchemaVersion = 1;

/// JSON form:
///   {"schema_version": 1, "experiment": "<preset>", "seed": 0,
///    "schedule": [..], "trials": n, "p": .., "d": .., "space": {...},
///    "params": {...}, "output": "path.csv", "record_time": false}
/// Every key but "experiment" is optional; absent values use preset defaults.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  std::optional<std::vector<std::size_t>> schedule;
  std::optional<std::size_t> trials;
  std::optional<double> p;
  std::optional<int> d;
  std::optional<Json> space;
  Json params = Json::object();
  std::string output;
  /// Adds a wall_time_s column; off by default so reruns are byte-identical.
  bool record_time = false;

  [[nodiscard]] Json to_json() const;
  static ExperimentConfig from_json(const Json& j);
};

using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

/// One output row as ordered (column, value) pairs.
struct ResultRow {
  std::vector<std::pair<std::string, Cell>> fields;

  ResultRow& set(const std::string& key, Cell value);
  ResultRow& set(const std::string& key, std::size_t value) { return set(key, Cell(static_cast<std::int64_t>(value))); }
  ResultRow& set(const std::string& key, int value) { return set(key, Cell(static_cast<std::int64_t>(value))); }
  ResultRow& set(const std::string& key, const char* value) { return set(key, Cell(std::string(value))); }
  [[nodiscard]] const Cell* get(const std::string& key) const;
};

std::vector<std::string> preset_names();
/// Default config of a preset (seed 0).
ExperimentConfig preset(const std::string& name);

/// Runs the experiment, writes cfg.output when set, and returns the rows.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

/// Header is experiment, seed, then the other column names in first-seen
/// order. Rows lacking a column get an empty field.
std::string to_csv(const std::vector<ResultRow>& rows);
void export_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);

/// RFC 4180 reader; returns the header as the first record.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

/// "%.17g" for finite doubles, "inf"/"-inf"/"nan" otherwise.
std::string format_double(double v);

}  // namespace greedylab::harness

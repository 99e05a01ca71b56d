// Thin bindings: spaces, vectors and configs cross the boundary as JSON text;
// the Python package wraps them into dicts and lists.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "greedylab/democracy.hpp"
#include "greedylab/greedy.hpp"
#include "greedylab/hardy.hpp"
#include "greedylab/harness.hpp"
#include "greedylab/matching.hpp"
#include "greedylab/parallel.hpp"
#include "greedylab/space.hpp"

namespace py = pybind11;
using namespace greedylab;
namespace sp = greedylab::spaces;

namespace {

sp::SpaceSpec space_of(const std::string& s) { return sp::SpaceSpec::from_json(parse_json(s, "space")); }
CoefficientVector vector_of(const std::string& s) { return vector_from_json(parse_json(s, "vector")); }

py::dict value_dict(const democracy::DemocracyValue& v) {
  py::dict d;
  d["value"] = v.value;
  d["witness"] = v.witness;
  d["exact"] = v.exact;
  d["method"] = v.method;
  return d;
}

democracy::SearchOptions search(const std::string& strategy, std::size_t ambient, std::uint64_t seed) {
  democracy::SearchOptions o;
  o.strategy = democracy::strategy_from_string(strategy);
  o.ambient = ambient;
  o.seed = seed;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "greedylab native core";

  // translators are tried newest first, so the base class goes in first
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericGuard>(m, "NumericGuard", PyExc_OverflowError);
  static py::handle config_error = m.attr("ConfigError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const nlohmann::json::exception& e) {
      PyErr_SetString(config_error.ptr(), e.what());
    }
  });

  m.def("set_threads", [](unsigned n) { set_default_threads(n); });

  m.def("quasi_norm", [](const std::string& space, const std::string& f) {
    return sp::quasi_norm(space_of(space), vector_of(f));
  });
  m.def("greedy_set", [](const std::string& f, std::size_t k) { return greedy::greedy_set(vector_of(f), k); });
  m.def("greedy_approximation", [](const std::string& f, std::size_t k) {
    return vector_to_json(greedy::greedy_approximation(vector_of(f), k)).dump();
  });
  m.def("restricted_truncation", [](const std::string& f, std::size_t k) {
    return vector_to_json(greedy::restricted_truncation(vector_of(f), k)).dump();
  });

  m.def("phi_upper", [](const std::string& space, std::size_t k, const std::string& strategy, std::size_t ambient,
                        std::uint64_t seed) {
    return value_dict(democracy::phi_upper(space_of(space), k, search(strategy, ambient, seed)));
  });
  m.def("phi_lower", [](const std::string& space, std::size_t k, const std::string& strategy, std::size_t ambient,
                        std::uint64_t seed) {
    return value_dict(democracy::phi_lower(space_of(space), k, search(strategy, ambient, seed)));
  });
  m.def("mu", [](const std::string& space, std::size_t k, std::size_t ambient, std::uint64_t seed) {
    return democracy::democracy_parameter_mum(space_of(space), k, search("auto", ambient, seed));
  });
  m.def("fit_power_log", [](const std::vector<double>& ms, const std::vector<double>& vs) {
    return democracy::fit_power_log(ms, vs).to_json().dump();
  });

  m.def("hyperbolic_norm", [](int k, int d, double p) {
    const auto fam = hardy::family_hyperbolic(k, d);
    return hardy::hp_norm(hardy::unit_expansion(fam, p, k));
  });
  m.def("disjoint_norm", [](std::size_t count, int d, int level, double p) {
    const auto fam = hardy::family_disjoint(count, d, level);
    return hardy::hp_norm(hardy::unit_expansion(fam, p, level));
  });

  m.def("marriage", [](const std::vector<std::vector<Index>>& sets, std::size_t K) {
    matching::MarriageInstance inst{sets, K};
    inst.validate();
    const auto rep = matching::hall_defect_check(inst);
    Json j = {{"feasible", rep.feasible}};
    if (rep.feasible) {
      j["solution"] = matching::k_fold_marriage(inst).to_json();
    } else {
      j["violator"] = rep.violator;
    }
    return j.dump();
  });

  m.def("preset_names", &harness::preset_names);
  m.def("run_experiment", [](const std::string& config) {
    const auto cfg = harness::ExperimentConfig::from_json(parse_json(config, "config"));
    std::vector<harness::ResultRow> rows;
    {
      py::gil_scoped_release release;
      rows = harness::run_experiment(cfg);
    }
    return harness::to_csv(rows);
  });
}

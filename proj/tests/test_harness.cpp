#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "greedylab/harness.hpp"
#include "greedylab/parallel.hpp"

using namespace greedylab;
using namespace greedylab::harness;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string cell(const ResultRow& r, const std::string& key) {
  const Cell* c = r.get(key);
  REQUIRE(c != nullptr);
  return std::visit([](const auto& v) -> std::string {
    using T = std::decay_t<decltype(v)>;
    if constexpr (std::is_same_v<T, std::string>) return v;
    else if constexpr (std::is_same_v<T, double>) return format_double(v);
    else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
    else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
    else return "";
  }, *c);
}

double num(const ResultRow& r, const std::string& key) { return std::get<double>(*r.get(key)); }

}  // namespace

TEST_CASE("config JSON round trip and validation") {
  ExperimentConfig c = preset("mixed-mu");
  c.seed = 42;
  c.schedule = std::vector<std::size_t>{1, 2, 4};
  c.p = 0.5;
  c.params = {{"block", 8}};
  const auto back = ExperimentConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(back.seed == 42);

  CHECK_THROWS_AS(ExperimentConfig::from_json(Json{{"seed", 1}}), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(Json{{"experiment", "x"}, {"schema_version", 7}}), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(Json{{"experiment", 3}}), ConfigError);
  CHECK_THROWS_AS(preset("nope"), ConfigError);

  c.schedule = std::vector<std::size_t>{};
  CHECK_THROWS_WITH_AS(run_experiment(c), "empty schedule", ConfigError);
  c.schedule = std::vector<std::size_t>{1, 3, 3};
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  c.experiment = "unknown";
  c.schedule.reset();
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
}

TEST_CASE("every preset is registered") {
  const auto names = preset_names();
  for (const char* n : {"fundamental", "hardy-fundamental", "hardy-upper", "hardy-mu", "mixed-mu",
                        "marriage-suite", "khintchine-suite", "sa-profile", "tga-suite"}) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
}

TEST_CASE("CSV formatting, quoting and round trip") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1024.0) == "1024");
  CHECK(format_double(kInfinity) == "inf");
  CHECK(format_double(-kInfinity) == "-inf");

  std::vector<ResultRow> rows(2);
  rows[0].set("experiment", "t").set("seed", 1).set("a", Cell(1.5)).set("s", "x,y");
  rows[1].set("experiment", "t").set("seed", 1).set("s", "say \"hi\"\nthere").set("b", Cell(true));
  const auto text = to_csv(rows);
  CHECK(text == "experiment,seed,a,s,b\nt,1,1.5,\"x,y\",\nt,1,,\"say \"\"hi\"\"\nthere\",true\n");
  CHECK(text.find('\r') == std::string::npos);

  const auto parsed = parse_csv(text);
  REQUIRE(parsed.size() == 3);
  CHECK(parsed[0] == std::vector<std::string>{"experiment", "seed", "a", "s", "b"});
  CHECK(parsed[1][3] == "x,y");
  CHECK(parsed[2][3] == "say \"hi\"\nthere");
  CHECK(parsed[2][2].empty());
  CHECK(parse_csv("a,b\r\n1,2") == std::vector<std::vector<std::string>>{{"a", "b"}, {"1", "2"}});
  CHECK_THROWS_AS(parse_csv("\"open"), ConfigError);

  // doubles survive the text form exactly
  const double x = 1.0 / 3.0;
  std::vector<ResultRow> one(1);
  one[0].set("v", Cell(x));
  CHECK(std::stod(parse_csv(to_csv(one))[1][2]) == x);
}

TEST_CASE("export_csv writes files and reports the path on failure") {
  const auto dir = std::filesystem::temp_directory_path() / "greedylab_test_csv";
  std::filesystem::create_directories(dir);
  const auto path = dir / "empty.csv";
  export_csv({}, path);
  CHECK(slurp(path) == "experiment,seed\n");

  const auto bad = dir / "missing_dir" / "x.csv";
  try {
    export_csv({}, bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find(bad.string()) != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("mixed-mu preset gives m^2 and records the seed") {
  ExperimentConfig c = preset("mixed-mu");
  c.seed = 9;
  c.schedule = std::vector<std::size_t>{1, 2, 3, 5, 8};
  c.params = {{"block", 16}};
  const auto rows = run_experiment(c);
  REQUIRE(rows.size() == 5);
  for (const auto& r : rows) {
    CHECK(cell(r, "seed") == "9");
    CHECK(cell(r, "experiment") == "mixed-mu");
    CHECK(num(r, "rel_err") <= 1e-12);
    CHECK(cell(r, "exact") == "true");
  }
  CHECK(num(rows[4], "mu") == doctest::Approx(64.0).epsilon(1e-12));
}

TEST_CASE("hardy presets match closed forms at small scale") {
  ExperimentConfig c = preset("hardy-fundamental");
  c.schedule = std::vector<std::size_t>{1, 2, 3, 4, 5};
  const auto rows = run_experiment(c);
  REQUIRE(rows.size() == 5);
  for (const auto& r : rows) CHECK(num(r, "rel_err") <= 1e-10);
  CHECK(num(rows[0], "target_b") == -1.5);

  ExperimentConfig u = preset("hardy-upper");
  u.schedule = std::vector<std::size_t>{2, 4, 8, 16};
  const auto up = run_experiment(u);
  REQUIRE(up.size() == 8);
  for (const auto& r : up) CHECK(num(r, "rel_err") <= 1e-10);

  ExperimentConfig m = preset("hardy-mu");
  m.params = {{"kmax", 4}};
  const auto mu = run_experiment(m);
  REQUIRE(mu.size() == 8);
  // d = 2: μ = (k+1)^{3/2} on the hyperbolic sizes 4, 12, 32, 80
  CHECK(num(mu[2], "mu") == doctest::Approx(8.0).epsilon(1e-9));
  CHECK(num(mu[2], "mu_search") >= num(mu[2], "mu"));
  // d = 1: the two families coincide; the full search stays bounded
  for (std::size_t i = 4; i < 8; ++i) {
    CHECK(num(mu[i], "mu") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(num(mu[i], "mu_search") <= 4.0);
  }
  CHECK(num(mu[4], "free_b") == doctest::Approx(0.0));
}

TEST_CASE("suites run at reduced size with no violations") {
  ExperimentConfig c = preset("marriage-suite");
  c.trials = 40;
  for (const auto& r : run_experiment(c)) {
    CHECK(cell(r, "feasible") == cell(r, "oracle"));
    CHECK(cell(r, "verified") == "true");
  }

  c = preset("tga-suite");
  c.trials = 500;
  c.params = {{"embed_samples", 50}};
  for (const auto& r : run_experiment(c)) CHECK(cell(r, "violations") == "0");

  c = preset("khintchine-suite");
  c.trials = 12;
  for (const auto& r : run_experiment(c)) {
    CHECK(cell(r, "sandwich") == "true");
    CHECK(cell(r, "within_scalar") == "true");
    CHECK(std::isfinite(num(r, "maurey_ratio")));
  }

  c = preset("sa-profile");
  c.params = {{"horizon", 1000}, {"N", 16}};
  const auto sa = run_experiment(c);
  CHECK(num(sa[0], "C") == 1.0);
  CHECK(num(sa[1], "C") == 3.0);
  CHECK(cell(sa.back(), "verdict") == "diverges");
}

TEST_CASE("reruns are byte-identical across thread counts") {
  ExperimentConfig c = preset("khintchine-suite");
  c.trials = 9;
  c.seed = 123;
  const unsigned before = default_threads();
  set_default_threads(1);
  const auto a = to_csv(run_experiment(c));
  set_default_threads(4);
  const auto b = to_csv(run_experiment(c));
  set_default_threads(before);
  CHECK(a == b);

  c.seed = 124;
  CHECK(to_csv(run_experiment(c)) != a);

  c.record_time = true;
  CHECK(parse_csv(to_csv(run_experiment(c)))[0].back() == "wall_time_s");
}

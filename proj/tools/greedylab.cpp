// greedylab command line: one subcommand per module, CSV or JSON on stdout
// (or --out). Exit codes: 0 ok, 2 bad input, 3 numeric guard, 1 anything else.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "greedylab/convexity.hpp"
#include "greedylab/democracy.hpp"
#include "greedylab/greedy.hpp"
#include "greedylab/harness.hpp"
#include "greedylab/matching.hpp"
#include "greedylab/parallel.hpp"
#include "greedylab/space.hpp"

using namespace greedylab;
namespace sp = greedylab::spaces;
namespace h = greedylab::harness;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  unsigned threads = 1;
};

// Literal JSON, or @path to read it from a file.
Json json_arg(const std::string& text, const char* what) {
  if (!text.empty() && text[0] == '@') {
    std::ifstream is(text.substr(1));
    if (!is) throw ConfigError(std::string("cannot read ") + what + " file '" + text.substr(1) + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_json(ss.str(), what);
  }
  return parse_json(text, what);
}

sp::SpaceSpec space_arg(const std::string& text) { return sp::SpaceSpec::from_json(json_arg(text, "space")); }

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(g.out, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open '" + g.out + "' for writing");
  os << text;
}

void emit_json(const Globals& g, const Json& j) { emit(g, j.dump(2) + "\n"); }

h::ResultRow base_row(const char* cmd, const Globals& g) {
  h::ResultRow r;
  r.set("experiment", cmd).set("seed", h::Cell(static_cast<std::int64_t>(g.seed)));
  return r;
}

std::string join(std::span<const Index> a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? " " : "") + std::to_string(a[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"greedylab: greedy algorithm and democracy experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--out", g.out, "Write output here instead of stdout");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 1024u));

  std::string space, vector_text, op = "greedy", set_text, mode = "proxy", strategy = "auto", check = "khintchine";
  std::string sampler = "mixture", sets_text, preset, config;
  std::size_t m = 1, trials = 64, ambient = 0, family_size = 6, horizon = 100000, K = 1;
  std::vector<std::size_t> m_list;
  std::vector<double> r_list, eps_list;
  double r = 1.0;

  auto* norm = app.add_subcommand("norm", "Quasi-norm of a vector");
  norm->add_option("--space", space, "Space JSON or @file")->required();
  norm->add_option("--vector", vector_text, "Vector JSON or @file")->required();

  auto* tga = app.add_subcommand("tga", "Greedy approximation, restricted truncation or projection");
  tga->add_option("--space", space)->required();
  tga->add_option("--vector", vector_text)->required();
  tga->add_option("--m", m);
  tga->add_option("--op", op)->check(CLI::IsMember({"greedy", "truncation", "projection"}));
  tga->add_option("--set", set_text, "Index set JSON for --op projection");

  auto* demo = app.add_subcommand("democracy", "phi_u, phi_l, mu_m and k_m over a list of m");
  demo->add_option("--space", space)->required();
  demo->add_option("--m-list", m_list)->required()->delimiter(',');
  demo->add_option("--strategy", strategy)->check(CLI::IsMember({"auto", "exhaustive", "families"}));
  demo->add_option("--ambient", ambient);

  auto* leb = app.add_subcommand("lebesgue", "Lebesgue constant L_m");
  leb->add_option("--space", space)->required();
  leb->add_option("--m", m)->required();
  leb->add_option("--mode", mode)->check(CLI::IsMember({"proxy", "direct"}));
  leb->add_option("--trials", trials);
  leb->add_option("--ambient", ambient);

  auto* conv = app.add_subcommand("convexity", "Khintchine, Maurey, convexity and absoluteness checks");
  conv->add_option("--space", space);
  conv->add_option("--check", check)
      ->check(CLI::IsMember({"khintchine", "maurey", "mr", "lconvex", "sa-profile", "sa-series"}));
  conv->add_option("--r", r);
  conv->add_option("--R-list", r_list)->delimiter(',');
  conv->add_option("--eps-list", eps_list)->delimiter(',');
  conv->add_option("--trials", trials);
  conv->add_option("--ambient", ambient);
  conv->add_option("--family-size", family_size);
  conv->add_option("--sampler", sampler);
  conv->add_option("--weight", set_text, "Weight JSON for --check sa-series");
  conv->add_option("--horizon", horizon);

  auto* mar = app.add_subcommand("marriage", "K-fold marriage or a Hall violator");
  mar->add_option("--sets", sets_text, "JSON [[...], ...] or @file")->required();
  mar->add_option("--K", K)->required();

  auto* exp = app.add_subcommand("experiment", "Run a preset or a JSON config");
  auto* preset_opt = exp->add_option("--preset", preset);
  exp->add_option("--config", config, "Config JSON or @file")->excludes(preset_opt);
  bool list = false, timing = false;
  exp->add_flag("--list", list, "List presets");
  exp->add_flag("--time", timing, "Add a wall_time_s column");
  exp->add_option("--trials", trials);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    set_default_threads(g.threads);
    if (*norm) {
      const auto s = space_arg(space);
      const auto f = vector_from_json(json_arg(vector_text, "vector"));
      emit_json(g, {{"space", s.to_json()}, {"norm", sp::quasi_norm(s, f)}, {"log_norm", sp::log_quasi_norm(s, f)}});
    } else if (*tga) {
      const auto s = space_arg(space);
      const auto f = vector_from_json(json_arg(vector_text, "vector"));
      CoefficientVector res;
      Json j = {{"op", op}};
      if (op == "projection") {
        if (set_text.empty()) throw ConfigError("--op projection needs --set");
        const auto a = json_arg(set_text, "set").get<std::vector<Index>>();
        res = greedy::coordinate_projection(f, a);
      } else {
        j["m"] = m;
        j["greedy_set"] = greedy::greedy_set(f, m);
        res = op == "greedy" ? greedy::greedy_approximation(f, m) : greedy::restricted_truncation(f, m);
      }
      j["result"] = vector_to_json(res);
      j["norm"] = sp::quasi_norm(s, res);
      j["ratio"] = greedy::norm_ratio(s, res, f);
      emit_json(g, j);
    } else if (*demo) {
      const auto s = space_arg(space);
      democracy::SearchOptions opt;
      opt.strategy = democracy::strategy_from_string(strategy);
      opt.ambient = ambient;
      opt.seed = g.seed;
      const auto prof = democracy::democracy_profile(s, m_list, opt);
      std::vector<h::ResultRow> rows;
      for (std::size_t i = 0; i < m_list.size(); ++i) {
        auto r = base_row("democracy", g);
        r.set("m", m_list[i]).set("phi_u", h::Cell(prof.phi_u[i].value)).set("phi_l", h::Cell(prof.phi_l[i].value));
        r.set("phi_l_eq", h::Cell(prof.phi_l_eq[i].value)).set("mu_m", h::Cell(prof.mu[i])).set("k_m", h::Cell(prof.k[i]));
        r.set("witness_u", h::Cell(join(prof.phi_u[i].witness))).set("witness_l", h::Cell(join(prof.phi_l[i].witness)));
        r.set("exact_u", h::Cell(prof.phi_u[i].exact)).set("exact_l", h::Cell(prof.phi_l[i].exact));
        rows.push_back(std::move(r));
      }
      emit(g, h::to_csv(rows));
    } else if (*leb) {
      const auto s = space_arg(space);
      democracy::LebesgueOptions opt;
      opt.search.ambient = ambient;
      opt.search.seed = g.seed;
      opt.trials = trials;
      const std::size_t n = democracy::search_ambient(s, std::max(m, ambient), opt.search);
      opt.sampler = random::mixture(n, g.seed);
      emit_json(g, {{"m", m}, {"mode", mode}, {"value", democracy::lebesgue_constant(s, m, mode, opt)}});
    } else if (*conv) {
      std::vector<h::ResultRow> rows;
      if (check == "sa-series") {
        if (set_text.empty()) throw ConfigError("--check sa-series needs --weight");
        const auto w = sp::Weight::from_json(json_arg(set_text, "weight"));
        const auto rep = convexity::sa_series_test(sp::primitive_weight(w, horizon), horizon);
        auto row = base_row("convexity", g);
        row.set("check", "sa-series").set("horizon", horizon).set("partial_sum", h::Cell(rep.partial_sum));
        row.set("fit_a", h::Cell(rep.a)).set("fit_b", h::Cell(rep.b)).set("verdict", h::Cell(convexity::to_string(rep.verdict)));
        rows.push_back(std::move(row));
      } else {
        if (space.empty()) throw ConfigError("--check " + check + " needs --space");
        const auto s = space_arg(space);
        const std::size_t n = ambient ? ambient : s.fixed_ambient().value_or(16);
        if (check == "khintchine" || check == "maurey") {
          const auto fs = convexity::family_sampler_by_id(sampler == "mixture" ? "random" : sampler, n, family_size, g.seed);
          for (std::size_t t = 0; t < trials; ++t) {
            const auto vecs = fs.draw(t);
            if (!vecs) break;
            const convexity::LatticeFamily fam{*vecs, s};
            auto row = base_row("convexity", g);
            row.set("check", h::Cell(check)).set("family", t).set("size", vecs->size()).set("r", h::Cell(r));
            if (check == "khintchine") {
              const auto kh = convexity::khintchine_check(fam, r);
              row.set("norm_average", h::Cell(kh.norm_average)).set("norm_square", h::Cell(kh.norm_square));
              row.set("min_ratio", h::Cell(kh.min_ratio)).set("max_ratio", h::Cell(kh.max_ratio));
            } else {
              const auto ma = convexity::maurey_check(fam, r);
              row.set("lhs", h::Cell(ma.lhs)).set("rhs", h::Cell(ma.rhs)).set("ratio", h::Cell(ma.ratio));
            }
            rows.push_back(std::move(row));
          }
        } else if (check == "mr") {
          const auto fs = convexity::family_sampler_by_id(sampler == "mixture" ? "random" : sampler, n, family_size, g.seed);
          const auto est = convexity::convexity_constant(s, r, fs, trials);
          auto row = base_row("convexity", g);
          row.set("check", "mr").set("r", h::Cell(r)).set("lower", h::Cell(est.lower_const));
          row.set("upper", h::Cell(est.upper_const)).set("evaluations", est.evaluations);
          rows.push_back(std::move(row));
        } else if (check == "lconvex") {
          if (eps_list.empty()) eps_list = {0.1, 0.25, 0.5, 0.75, 0.9};
          const auto rep = convexity::l_convexity_probe(s, eps_list, random::sampler_by_id(sampler, n, g.seed), trials);
          for (std::size_t i = 0; i < rep.eps.size(); ++i) {
            auto row = base_row("convexity", g);
            row.set("check", "lconvex").set("eps", h::Cell(rep.eps[i])).set("tested", rep.tested[i]);
            row.set("violations", rep.violations[i]);
            if (rep.best_eps) row.set("best_eps", h::Cell(*rep.best_eps));
            rows.push_back(std::move(row));
          }
        } else {
          if (r_list.empty()) r_list = {2, 4, 8, 16};
          const auto samp = sampler == "mixture" ? random::initial_indicators(n) : random::sampler_by_id(sampler, n, g.seed);
          const auto prof = convexity::strong_absoluteness_profile(s, r_list, samp, sampler == "mixture" ? n : trials);
          for (std::size_t i = 0; i < r_list.size(); ++i) {
            auto row = base_row("convexity", g);
            row.set("check", "sa-profile").set("R", h::Cell(r_list[i])).set("C", h::Cell(prof.C_values[i]));
            row.set("C_half", h::Cell(prof.C_half[i])).set("diverged", h::Cell(static_cast<bool>(prof.diverged[i])));
            rows.push_back(std::move(row));
          }
        }
      }
      emit(g, h::to_csv(rows));
    } else if (*mar) {
      matching::MarriageInstance inst;
      inst.sets = json_arg(sets_text, "sets").get<std::vector<std::vector<Index>>>();
      inst.K = K;
      inst.validate();
      const auto rep = matching::hall_defect_check(inst);
      if (rep.feasible) {
        emit_json(g, {{"feasible", true}, {"solution", matching::k_fold_marriage(inst).to_json()}});
      } else {
        emit_json(g, {{"feasible", false}, {"violator", rep.violator}});
      }
    } else if (*exp) {
      if (list) {
        std::string s;
        for (const auto& n : h::preset_names()) s += n + "\n";
        emit(g, s);
        return 0;
      }
      h::ExperimentConfig cfg;
      if (!config.empty()) {
        cfg = h::ExperimentConfig::from_json(json_arg(config, "config"));
        if (app.get_option("--seed")->count()) cfg.seed = g.seed;
      } else if (!preset.empty()) {
        cfg = h::preset(preset);
        cfg.seed = g.seed;
      } else {
        throw ConfigError("experiment needs --preset, --config or --list");
      }
      if (exp->get_option("--trials")->count()) cfg.trials = trials;
      if (timing) cfg.record_time = true;
      if (!g.out.empty()) cfg.output = g.out;
      const auto rows = h::run_experiment(cfg);
      if (cfg.output.empty()) std::cout << h::to_csv(rows);
    }
  } catch (const NumericGuard& e) {
    std::cerr << "numeric guard: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include "greedylab/matching.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>

namespace greedylab::matching {

void MarriageInstance::validate() const {
  if (K == 0) throw ConfigError("marriage multiplicity K must be positive");
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (Index n : sets[i]) {
      if (n == 0) throw ConfigError("marriage partner indices start at 1 (set " + std::to_string(i + 1) + ")");
    }
  }
}

std::size_t MarriageInstance::partner_count() const {
  std::size_t n = 0;
  for (const auto& s : sets) {
    for (Index x : s) n = std::max(n, x);
  }
  return n;
}

Json MarriageInstance::to_json() const { return {{"sets", sets}, {"K", K}}; }

MarriageInstance MarriageInstance::from_json(const Json& j) {
  try {
    MarriageInstance inst;
    inst.sets = j.at("sets").get<std::vector<std::vector<Index>>>();
    inst.K = j.value("K", std::size_t{1});
    inst.validate();
    return inst;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad marriage instance: ") + e.what());
  }
}

Json MarriageSolution::to_json() const {
  Json classes = Json::object();
  for (std::size_t i = 0; i < cls.size(); ++i) {
    classes[std::to_string(cls[i])].push_back({{"i", i + 1}, {"partner", partner[i]}});
  }
  return {{"class", cls}, {"partner", partner}, {"classes", classes}};
}

namespace {

// Edmonds–Karp on an adjacency list; BFS visits edges in insertion order, so
// the result is fully determined by the input.
struct FlowGraph {
  struct Edge {
    std::size_t to;
    std::size_t cap;
    std::size_t rev;
  };
  std::vector<std::vector<Edge>> adj;

  explicit FlowGraph(std::size_t n) : adj(n) {}

  void add(std::size_t u, std::size_t v, std::size_t cap) {
    adj[u].push_back({v, cap, adj[v].size()});
    adj[v].push_back({u, 0, adj[u].size() - 1});
  }

  std::vector<bool> reachable(std::size_t s) const {
    std::vector<bool> seen(adj.size(), false);
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (const auto& e : adj[u]) {
        if (e.cap > 0 && !seen[e.to]) {
          seen[e.to] = true;
          q.push(e.to);
        }
      }
    }
    return seen;
  }

  std::size_t max_flow(std::size_t s, std::size_t t) {
    std::size_t total = 0;
    while (true) {
      std::vector<std::pair<std::size_t, std::size_t>> parent(adj.size(), {SIZE_MAX, 0});
      std::queue<std::size_t> q;
      q.push(s);
      parent[s] = {s, 0};
      while (!q.empty() && parent[t].first == SIZE_MAX) {
        const auto u = q.front();
        q.pop();
        for (std::size_t k = 0; k < adj[u].size(); ++k) {
          const auto& e = adj[u][k];
          if (e.cap > 0 && parent[e.to].first == SIZE_MAX) {
            parent[e.to] = {u, k};
            q.push(e.to);
          }
        }
      }
      if (parent[t].first == SIZE_MAX) return total;
      std::size_t push = std::numeric_limits<std::size_t>::max();
      for (std::size_t v = t; v != s; v = parent[v].first) {
        push = std::min(push, adj[parent[v].first][parent[v].second].cap);
      }
      for (std::size_t v = t; v != s; v = parent[v].first) {
        auto& e = adj[parent[v].first][parent[v].second];
        e.cap -= push;
        adj[v][e.rev].cap += push;
      }
      total += push;
    }
  }
};

}  // namespace

HallReport hall_defect_check(const MarriageInstance& inst) {
  inst.validate();
  const std::size_t m = inst.sets.size();
  const std::size_t n = inst.partner_count();
  // Nodes: 0 source, 1..m left, m+1..m+n right, m+n+1 sink.
  const std::size_t source = 0, sink = m + n + 1;
  FlowGraph g(m + n + 2);
  for (std::size_t i = 1; i <= m; ++i) g.add(source, i, 1);
  for (std::size_t i = 1; i <= m; ++i) {
    std::set<Index> unique(inst.sets[i - 1].begin(), inst.sets[i - 1].end());
    for (Index x : unique) g.add(i, m + x, std::max<std::size_t>(m, 1));
  }
  for (std::size_t x = 1; x <= n; ++x) g.add(m + x, sink, inst.K);

  HallReport rep;
  rep.flow = g.max_flow(source, sink);
  rep.feasible = rep.flow == m;
  if (rep.feasible) {
    rep.partner.assign(m, 0);
    for (std::size_t i = 1; i <= m; ++i) {
      for (const auto& e : g.adj[i]) {
        // Forward edges start with capacity m; one unit of flow leaves m-1.
        if (e.to > m && e.to <= m + n && e.cap + 1 == std::max<std::size_t>(m, 1)) {
          rep.partner[i - 1] = e.to - m;
          break;
        }
      }
    }
  } else {
    const auto seen = g.reachable(source);
    for (std::size_t i = 1; i <= m; ++i) {
      if (seen[i]) rep.violator.push_back(i);
    }
  }
  return rep;
}

InfeasibleMarriage::InfeasibleMarriage(std::vector<Index> violator)
    : Error("marriage instance violates the Hall condition"), violator_(std::move(violator)) {}

MarriageSolution k_fold_marriage(const MarriageInstance& inst) {
  const auto rep = hall_defect_check(inst);
  if (!rep.feasible) throw InfeasibleMarriage(rep.violator);
  MarriageSolution sol;
  sol.partner = rep.partner;
  sol.cls.assign(inst.sets.size(), 0);
  std::map<Index, std::size_t> used;
  // i ascending, so the partners of each n receive classes 1, 2, ... by index.
  for (std::size_t i = 0; i < inst.sets.size(); ++i) sol.cls[i] = ++used[sol.partner[i]];
  return sol;
}

bool verify_marriage(const MarriageInstance& inst, const MarriageSolution& sol) {
  if (sol.cls.size() != inst.sets.size() || sol.partner.size() != inst.sets.size()) return false;
  std::set<std::pair<std::size_t, Index>> taken;
  for (std::size_t i = 0; i < inst.sets.size(); ++i) {
    if (sol.cls[i] < 1 || sol.cls[i] > inst.K) return false;
    const auto& s = inst.sets[i];
    if (std::find(s.begin(), s.end(), sol.partner[i]) == s.end()) return false;
    if (!taken.insert({sol.cls[i], sol.partner[i]}).second) return false;
  }
  return true;
}

OmegaSets omega_delta(const BiorthogonalSample& sample) {
  if (!(sample.delta > 0.0)) throw ConfigError("omega_delta needs delta > 0");
  if (sample.Y.rows() != sample.Z.rows() || sample.Y.cols() != sample.Z.cols()) {
    throw ConfigError("omega_delta: Y and Z must have the same shape");
  }
  const Eigen::MatrixXd prod = sample.Y.cwiseProduct(sample.Z).cwiseAbs();
  OmegaSets out;
  out.rows.resize(static_cast<std::size_t>(prod.rows()));
  std::vector<bool> any(static_cast<std::size_t>(prod.cols()), false);
  for (Eigen::Index i = 0; i < prod.rows(); ++i) {
    for (Eigen::Index n = 0; n < prod.cols(); ++n) {
      if (prod(i, n) >= sample.delta) {
        out.rows[static_cast<std::size_t>(i)].push_back(static_cast<Index>(n + 1));
        any[static_cast<std::size_t>(n)] = true;
      }
    }
  }
  for (std::size_t n = 0; n < any.size(); ++n) {
    if (any[n]) out.omega.push_back(n + 1);
  }
  return out;
}

}  // namespace greedylab::matching

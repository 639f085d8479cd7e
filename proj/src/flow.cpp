#include "edenca/flow.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

namespace edenca {

namespace {

// Dinic maximum flow with deterministic edge order.
class MaxFlow {
public:
  explicit MaxFlow(int nodes) : adj_(static_cast<size_t>(nodes)) {}

  int add_edge(int from, int to, std::int64_t cap) {
    adj_[static_cast<size_t>(from)].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({to, cap});
    adj_[static_cast<size_t>(to)].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({from, 0});
    return static_cast<int>(edges_.size()) - 2;
  }

  std::int64_t flow_on(int edge_id) const { return edges_[static_cast<size_t>(edge_id) + 1].cap; }

  std::int64_t run(int s, int t) {
    std::int64_t total = 0;
    while (bfs(s, t)) {
      iter_.assign(adj_.size(), 0);
      while (std::int64_t f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) total += f;
    }
    return total;
  }

private:
  struct Edge {
    int to;
    std::int64_t cap;
  };

  bool bfs(int s, int t) {
    level_.assign(adj_.size(), -1);
    std::queue<int> q;
    level_[static_cast<size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int id : adj_[static_cast<size_t>(v)]) {
        const Edge& e = edges_[static_cast<size_t>(id)];
        if (e.cap > 0 && level_[static_cast<size_t>(e.to)] < 0) {
          level_[static_cast<size_t>(e.to)] = level_[static_cast<size_t>(v)] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[static_cast<size_t>(t)] >= 0;
  }

  std::int64_t dfs(int v, int t, std::int64_t f) {
    if (v == t) return f;
    for (std::size_t& i = iter_[static_cast<size_t>(v)]; i < adj_[static_cast<size_t>(v)].size(); ++i) {
      int id = adj_[static_cast<size_t>(v)][i];
      Edge& e = edges_[static_cast<size_t>(id)];
      if (e.cap <= 0 || level_[static_cast<size_t>(e.to)] != level_[static_cast<size_t>(v)] + 1) continue;
      std::int64_t d = dfs(e.to, t, std::min(f, e.cap));
      if (d > 0) {
        e.cap -= d;
        edges_[static_cast<size_t>(id ^ 1)].cap += d;
        return d;
      }
    }
    return 0;
  }

  std::vector<std::vector<int>> adj_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
};

MatchingInstance make_instance(const Group& g, const GenSet& S, int m, int n, int radius) {
  MatchingInstance inst;
  inst.radius = radius;
  inst.m = m;
  inst.n = n;
  inst.sources = ball(g, S, radius);
  std::vector<GroupElement> all_sinks = ball(g, S, radius + 1);
  std::vector<GroupElement> hard = radius >= 1 ? ball(g, S, radius - 1) : std::vector<GroupElement>{};
  // hard sinks first (canonical order), then the boundary shell
  inst.sinks = hard;
  for (const auto& y : all_sinks)
    if (!std::binary_search(hard.begin(), hard.end(), y)) inst.sinks.push_back(y);
  inst.hard_sinks = hard.size();
  return inst;
}

} // namespace

FeasibilityReport build_correspondence(const Group& g, const GenSet& S, int m, int n, int radius,
                                       std::uint64_t max_edges) {
  if (radius < 1) throw UsageError("build_correspondence radius must be >= 1");
  if (!((m > n && n >= 1) || (m == 1 && n == 1)))
    throw UsageError("build_correspondence needs m > n >= 1 (or m = n = 1)");

  MatchingInstance inst = make_instance(g, S, m, n, radius);
  const std::size_t ns = inst.sources.size(), nk = inst.sinks.size();
  std::uint64_t est_edges = static_cast<std::uint64_t>(ns) * static_cast<std::uint64_t>(S.size()) + ns + nk + 4;
  if (est_edges > max_edges) throw BudgetError("build_correspondence: ball too large for the flow budget");

  // Circulation with lower bounds, Hoffman transform:
  //   S* -> x  [n, n],  x -> y  [0, min(n,m)],  y -> T*  [m, m] hard / [0, m],
  //   T* -> S* [0, inf]. Lower bound l on (u, v) becomes SS -> v and u -> TT
  //   edges of capacity l; all lower bounds are met iff SS->TT saturates.
  const int SS = 0, TT = 1, SRC = 2, SNK = 3;
  const int base_x = 4;
  const int base_y = base_x + static_cast<int>(ns);
  MaxFlow mf(base_y + static_cast<int>(nk));

  std::vector<std::int64_t> excess(static_cast<size_t>(base_y + static_cast<int>(nk)), 0);
  // S* -> x with lower = upper = n
  for (std::size_t i = 0; i < ns; ++i) {
    excess[static_cast<size_t>(base_x) + i] += n;
    excess[SRC] -= n;
  }
  // x -> y edges, capacity min(n, m), remember ids for witness extraction
  std::map<GroupElement, int> sink_index;
  for (std::size_t j = 0; j < nk; ++j) sink_index[inst.sinks[j]] = static_cast<int>(j);
  std::vector<std::vector<std::pair<int, int>>> xy_edges(ns); // (sink index, edge id)
  for (std::size_t i = 0; i < ns; ++i) {
    for (int si = 0; si < S.size(); ++si) {
      GroupElement y = g.multiply(inst.sources[i], S[si]);
      auto it = sink_index.find(y);
      if (it == sink_index.end()) continue; // sinks = B_{r+1} cover all of xS

      int id = mf.add_edge(base_x + static_cast<int>(i), base_y + it->second, std::min(m, n));
      xy_edges[i].emplace_back(it->second, id);
    }
  }
  // y -> T*
  for (std::size_t j = 0; j < nk; ++j) {
    if (j < inst.hard_sinks) {
      excess[SNK] += m;
      excess[static_cast<size_t>(base_y) + j] -= m;
    } else {
      mf.add_edge(base_y + static_cast<int>(j), SNK, m);
    }
  }
  // T* -> S* unbounded
  mf.add_edge(SNK, SRC, std::numeric_limits<std::int64_t>::max() / 4);

  std::int64_t required = 0;
  for (std::size_t v = 0; v < excess.size(); ++v) {
    if (excess[v] > 0) {
      mf.add_edge(SS, static_cast<int>(v), excess[v]);
      required += excess[v];
    } else if (excess[v] < 0) {
      mf.add_edge(static_cast<int>(v), TT, -excess[v]);
    }
  }

  std::int64_t flow = mf.run(SS, TT);

  FeasibilityReport rep;
  rep.radius = radius;
  rep.m = m;
  rep.n = n;
  rep.sources = ns;
  rep.hard_sinks = inst.hard_sinks;
  rep.deficiency = required - flow;
  rep.feasible = rep.deficiency == 0;
  rep.interior_exact = rep.feasible;
  if (rep.feasible) {
    for (std::size_t i = 0; i < ns; ++i)
      for (const auto& [j, id] : xy_edges[i]) {
        std::int64_t f = mf.flow_on(id);
        if (f > 0)
          rep.witness.push_back({{inst.sources[i], inst.sinks[static_cast<size_t>(j)]}, static_cast<int>(f)});
      }
    std::sort(rep.witness.begin(), rep.witness.end());
  }
  return rep;
}

RecountReport recount_witness(const Group& g, const GenSet& S, int m, int n, int radius,
                              const std::vector<std::pair<std::pair<GroupElement, GroupElement>, int>>& witness) {
  RecountReport rep;
  std::vector<GroupElement> sources = ball(g, S, radius);
  std::vector<GroupElement> hard = radius >= 1 ? ball(g, S, radius - 1) : std::vector<GroupElement>{};

  std::map<GroupElement, std::int64_t> row, col;
  for (const auto& [xy, f] : witness) {
    if (f <= 0) {
      rep.violations.push_back("non-positive multiplicity at (" + g.format(xy.first) + ", " + g.format(xy.second) + ")");
      continue;
    }
    row[xy.first] += f;
    col[xy.second] += f;
    // support: y in xS
    GroupElement d = g.multiply(g.inverse(xy.first), xy.second);
    if (!S.contains(d))
      rep.violations.push_back("support violation: " + g.format(xy.second) + " not in " + g.format(xy.first) + "S");
  }
  for (const auto& x : sources) {
    auto it = row.find(x);
    std::int64_t sum = it == row.end() ? 0 : it->second;
    if (sum != n)
      rep.violations.push_back("row sum " + std::to_string(sum) + " != " + std::to_string(n) + " at " + g.format(x));
  }
  for (const auto& y : hard) {
    auto it = col.find(y);
    std::int64_t sum = it == col.end() ? 0 : it->second;
    if (sum != m)
      rep.violations.push_back("column sum " + std::to_string(sum) + " != " + std::to_string(m) + " at " + g.format(y));
  }
  for (const auto& [y, sum] : col)
    if (sum > m) rep.violations.push_back("column sum " + std::to_string(sum) + " > m at " + g.format(y));
  return rep;
}

std::vector<ProfileEntry> expansion_profile(const Group& g, const GenSet& S, int max_radius, int max_den,
                                            int max_value, std::uint64_t max_edges) {
  if (max_radius < 1) throw UsageError("expansion_profile needs max_radius >= 1");
  // Reduced fractions m/n with value in (1, max_value], denominator <= max_den.
  std::vector<std::pair<int, int>> fractions;
  for (int den = 1; den <= max_den; ++den)
    for (int num = den + 1; num <= max_value * den; ++num)
      if (std::gcd(num, den) == 1) fractions.emplace_back(num, den);
  std::sort(fractions.begin(), fractions.end(), [](const auto& a, const auto& b) {
    return static_cast<std::int64_t>(a.first) * b.second > static_cast<std::int64_t>(b.first) * a.second;
  });

  std::vector<ProfileEntry> out;
  out.push_back({0, 1, 1}); // single vertex, boundary-dominated
  for (int r = 1; r <= max_radius; ++r) {
    ProfileEntry e;
    e.radius = r;
    for (const auto& [m, n] : fractions) {
      FeasibilityReport rep = build_correspondence(g, S, m, n, r, max_edges);
      if (rep.feasible) {
        e.best_m = m;
        e.best_n = n;
        break;
      }
    }
    out.push_back(e);
  }
  return out;
}

} // namespace edenca

#include "rgather/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "rgather/error.hpp"
#include "rgather/lsh.hpp"

namespace rgather {

namespace {

std::vector<std::vector<int>> adjacency_from_pairs(int n, std::vector<std::pair<int, int>>& pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& [u, v] : pairs) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

// Bucket lists hold point indices in increasing id order, so "the r smallest
// ids" is a prefix scan.
using BucketMap = std::unordered_map<LshKey, std::vector<int>, LshKeyHash>;

BucketMap bucket_points(const std::vector<LshFunction>& g, const PointSet& ps,
                        const std::vector<double>& scaled, const std::vector<int>& by_id) {
  const int t = ps.dim();
  BucketMap buckets;
  buckets.reserve(static_cast<std::size_t>(ps.size()));
  for (int i : by_id) {
    std::span<const double> p(scaled.data() + static_cast<std::size_t>(i) * t,
                              static_cast<std::size_t>(t));
    buckets[lsh_key(g, p)].push_back(i);
  }
  return buckets;
}

struct HashedBuild {
  LshParams params;
  std::vector<std::pair<int, int>> candidates;
};

template <typename EmitBucket>
HashedBuild run_hashed_draws(const PointSet& ps, double scale, double approx_c,
                             std::uint64_t seed, EmitBucket&& emit) {
  if (!(scale > 0.0)) throw InvalidInput("near-neighbor build: scale must be positive");
  if (!(approx_c > 1.0)) throw InvalidInput("near-neighbor build: C must exceed 1");
  const int n = ps.size();
  const int d = ps.dim();

  HashedBuild out;
  if (n == 0) return out;
  out.params = derive_lsh_params(n, approx_c);

  std::vector<double> scaled(static_cast<std::size_t>(n) * d);
  for (int i = 0; i < n; ++i) {
    std::span<const double> p = ps.point(i);
    for (int j = 0; j < d; ++j) scaled[static_cast<std::size_t>(i) * d + j] = p[j] / scale;
  }
  std::vector<int> by_id(static_cast<std::size_t>(n));
  std::iota(by_id.begin(), by_id.end(), 0);
  std::sort(by_id.begin(), by_id.end(),
            [&](int a, int b) { return ps.id(a) < ps.id(b); });

  std::vector<LshFunction> g(static_cast<std::size_t>(out.params.concat));
  for (int draw = 0; draw < out.params.draws; ++draw) {
    for (int comp = 0; comp < out.params.concat; ++comp) {
      g[static_cast<std::size_t>(comp)] =
          make_lsh_function(out.params.t, out.params.w, out.params.shifts, d, seed,
                            static_cast<std::uint64_t>(draw), static_cast<std::uint64_t>(comp));
    }
    for (auto& [key, members] : bucket_points(g, ps, scaled, by_id)) {
      emit(members, out.candidates);
    }
  }
  return out;
}

// Charge shape shared by both hashed builds: one map barrier emitting the
// s*n key records, one sort grouping them into buckets, one map emitting
// candidate edges, one sort deduplicating. All s draws run in parallel, so
// no charge scales with s beyond data volume.
void charge_hashed_build(CostLog* log, const std::string& label, const LshParams& params, int n,
                         std::size_t candidates) {
  if (log == nullptr) return;
  const auto keys = static_cast<std::int64_t>(params.draws) * n;
  const auto cand = static_cast<std::int64_t>(candidates);
  log->add(account({Primitive::map, label + "_keys", keys}));
  log->add(account({Primitive::sort, label + "_buckets", keys}));
  log->add(account({Primitive::map, label + "_candidates", cand}));
  log->add(account({Primitive::sort, label + "_dedup", cand}));
}

}  // namespace

std::size_t NeighborGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& list : adj) total += list.size();
  return total / 2;
}

bool NeighborGraph::has_edge(int u, int v) const {
  const auto& list = adj[static_cast<std::size_t>(u)];
  return std::binary_search(list.begin(), list.end(), v);
}

std::vector<std::pair<std::int64_t, std::int64_t>> NeighborGraph::edge_list() const {
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  edges.reserve(edge_count());
  for (int u = 0; u < size(); ++u) {
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (u < v) {
        const std::int64_t a = ids[static_cast<std::size_t>(u)];
        const std::int64_t b = ids[static_cast<std::size_t>(v)];
        edges.emplace_back(std::min(a, b), std::max(a, b));
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

NeighborGraph build_exact(const PointSet& ps, double scale, int r, CostLog* log) {
  if (!(scale > 0.0)) throw InvalidInput("build_exact: scale must be positive");
  const int n = ps.size();
  NeighborGraph g;
  g.meta = {scale, r, 1.0, GraphMode::exact, 0};
  g.ids = ps.ids();
  g.adj.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (dist_at(ps, i, j) <= scale) {
        g.adj[static_cast<std::size_t>(i)].push_back(j);
        g.adj[static_cast<std::size_t>(j)].push_back(i);
      }
    }
  }
  for (auto& list : g.adj) std::sort(list.begin(), list.end());
  if (log != nullptr) {
    const auto n64 = static_cast<std::int64_t>(n);
    log->add(account({Primitive::map, "exact_distances", n64 * (n64 - 1) / 2}));
    log->add(account(
        {Primitive::sort, "exact_adjacency", n64 + 2 * static_cast<std::int64_t>(g.edge_count())}));
  }
  return g;
}

NeighborGraph build_lsh_explicit(const PointSet& ps, double scale, int r, double approx_c,
                                 std::uint64_t seed, CostLog* log) {
  if (r < 0) throw InvalidInput("build_lsh_explicit: r must be non-negative");
  auto build = run_hashed_draws(
      ps, scale, approx_c, seed,
      [r](const std::vector<int>& members, std::vector<std::pair<int, int>>& cand) {
        for (int p : members) {
          int linked = 0;
          for (int q : members) {
            if (linked == r) break;
            if (q == p) continue;
            cand.emplace_back(std::min(p, q), std::max(p, q));
            ++linked;
          }
        }
      });
  charge_hashed_build(log, "lsh", build.params, ps.size(), build.candidates.size());
  NeighborGraph g;
  g.meta = {scale, r, approx_c, GraphMode::lsh, seed};
  g.ids = ps.ids();
  g.adj = adjacency_from_pairs(ps.size(), build.candidates);
  return g;
}

NeighborGraph build_lsh_sparse(const PointSet& ps, double scale, double approx_c,
                               std::uint64_t seed, CostLog* log) {
  auto build = run_hashed_draws(
      ps, scale, approx_c, seed,
      [](const std::vector<int>& members, std::vector<std::pair<int, int>>& cand) {
        for (std::size_t k = 1; k < members.size(); ++k) {
          const int hub = members.front();
          cand.emplace_back(std::min(hub, members[k]), std::max(hub, members[k]));
        }
      });
  charge_hashed_build(log, "lsh_sparse", build.params, ps.size(), build.candidates.size());
  NeighborGraph g;
  g.meta = {scale, 0, approx_c, GraphMode::lsh_sparse, seed};
  g.ids = ps.ids();
  g.adj = adjacency_from_pairs(ps.size(), build.candidates);
  return g;
}

NeighborGraph square(const NeighborGraph& g, CostLog* log) {
  const int n = g.size();
  NeighborGraph sq;
  sq.meta = g.meta;
  sq.ids = g.ids;
  sq.adj.resize(static_cast<std::size_t>(n));
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int u = 0; u < n; ++u) {
    std::vector<int> reach;
    auto visit = [&](int v) {
      if (v != u && !seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        reach.push_back(v);
      }
    };
    for (int v : g.adj[static_cast<std::size_t>(u)]) {
      visit(v);
      for (int w : g.adj[static_cast<std::size_t>(v)]) visit(w);
    }
    std::sort(reach.begin(), reach.end());
    for (int v : reach) seen[static_cast<std::size_t>(v)] = 0;
    sq.adj[static_cast<std::size_t>(u)] = std::move(reach);
  }
  if (log != nullptr) {
    log->add(account({Primitive::sort, "square_adjacency",
                      static_cast<std::int64_t>(n) +
                          2 * static_cast<std::int64_t>(sq.edge_count())}));
  }
  return sq;
}

Def3Report verify_definition3(const PointSet& ps, const NeighborGraph& g, double scale, int r,
                              double c_eff) {
  if (!(scale > 0.0)) throw InvalidInput("verify_definition3: scale must be positive");
  const int n = ps.size();
  Def3Report report;
  for (int u = 0; u < n; ++u) {
    for (int v : g.adj[static_cast<std::size_t>(u)]) {
      if (v <= u) continue;
      const double d = dist_at(ps, u, v);
      report.max_edge_ratio = std::max(report.max_edge_ratio, d / scale);
      if (d > c_eff * scale) {
        report.violations.push_back(
            {g.ids[static_cast<std::size_t>(u)], g.ids[static_cast<std::size_t>(v)],
             "edge longer than c_eff * R"});
      }
    }
  }
  for (int u = 0; u < n; ++u) {
    if (static_cast<int>(g.adj[static_cast<std::size_t>(u)].size()) + 1 >= r) continue;
    for (int v = 0; v < n; ++v) {
      if (v == u || dist_at(ps, u, v) > scale) continue;
      if (!g.has_edge(u, v)) {
        report.violations.push_back(
            {g.ids[static_cast<std::size_t>(u)], g.ids[static_cast<std::size_t>(v)],
             "fewer than r closed neighbors and ball member missing"});
        break;
      }
    }
  }
  report.ok = report.violations.empty();
  return report;
}

std::string graph_mode_name(GraphMode mode) {
  switch (mode) {
    case GraphMode::exact:
      return "exact";
    case GraphMode::lsh:
      return "lsh";
    case GraphMode::lsh_sparse:
      return "lsh-sparse";
  }
  throw Error("graph_mode_name: unknown mode");
}

void write_graph(const NeighborGraph& g, std::ostream& out) {
  char num[64];
  std::snprintf(num, sizeof num, "%.17g", g.meta.scale);
  out << "# R=" << num << " r=" << g.meta.r;
  std::snprintf(num, sizeof num, "%.17g", g.meta.approx_c);
  out << " C=" << num << " mode=" << graph_mode_name(g.meta.mode) << " seed=" << g.meta.seed
      << "\n";
  for (const auto& [u, v] : g.edge_list()) out << u << " " << v << "\n";
}

}  // namespace rgather

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rgather/graph.hpp"
#include "rgather/points.hpp"

namespace rgather::testing {

// 1-D set, ids 0..n-1.
inline PointSet line(std::vector<double> xs) {
  std::vector<std::int64_t> ids(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ids[i] = static_cast<std::int64_t>(i);
  return PointSet(1, std::move(ids), std::move(xs));
}

// 1-D set whose ids equal the (integral) coordinates, matching the
// P={0,1,3} shorthand used throughout the suites.
inline PointSet line_ids(std::vector<double> xs) {
  std::vector<std::int64_t> ids(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ids[i] = std::llround(xs[i]);
  return PointSet(1, std::move(ids), std::move(xs));
}

// Graph over the given ids with edges named by id pairs.
inline NeighborGraph make_graph(std::vector<std::int64_t> ids,
                                const std::vector<std::pair<std::int64_t, std::int64_t>>& edges) {
  NeighborGraph g;
  g.ids = std::move(ids);
  g.adj.assign(g.ids.size(), {});
  std::unordered_map<std::int64_t, int> pos;
  for (int i = 0; i < g.size(); ++i) pos[g.ids[i]] = i;
  for (const auto& [a, b] : edges) {
    const int u = pos.at(a);
    const int v = pos.at(b);
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& list : g.adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return g;
}

// Path graph with ids 1..n in a line.
inline NeighborGraph path_graph(int n) {
  std::vector<std::int64_t> ids(n);
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  for (int i = 0; i < n; ++i) ids[i] = i + 1;
  for (int i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
  return make_graph(std::move(ids), edges);
}

inline PointSet random_points(std::mt19937& gen, int n, int d, double span = 10.0) {
  std::uniform_real_distribution<double> coord(0.0, span);
  std::vector<std::int64_t> ids(n);
  std::vector<double> coords(static_cast<std::size_t>(n) * d);
  for (int i = 0; i < n; ++i) ids[i] = i;
  for (double& c : coords) c = coord(gen);
  return PointSet(d, std::move(ids), std::move(coords));
}

}  // namespace rgather::testing

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rgather/cost.hpp"
#include "rgather/points.hpp"

namespace rgather {

struct GraphMeta {
  double scale = 1.0;  // R
  int r = 0;
  double approx_c = 1.0;
  GraphMode mode = GraphMode::exact;
  std::uint64_t seed = 0;
};

/// Undirected graph on a point set. Vertex i corresponds to ids[i], matching
/// the point set's index order; adjacency lists are sorted, self-free and
/// duplicate-free.
struct NeighborGraph {
  GraphMeta meta;
  std::vector<std::int64_t> ids;
  std::vector<std::vector<int>> adj;

  int size() const { return static_cast<int>(ids.size()); }
  std::size_t edge_count() const;
  bool has_edge(int u, int v) const;

  /// Id pairs (u, v) with u < v, sorted.
  std::vector<std::pair<std::int64_t, std::int64_t>> edge_list() const;
};

/// Brute-force graph with an edge exactly when dist(p, q) <= scale. Satisfies
/// the near-neighbor contract with stretch 1 for every r.
NeighborGraph build_exact(const PointSet& ps, double scale, int r, CostLog* log = nullptr);

/// Hashed build: per draw, each point connects to the r smallest-id points
/// sharing its bucket. Meeting the near-neighbor contract is probabilistic;
/// audit with verify_definition3.
NeighborGraph build_lsh_explicit(const PointSet& ps, double scale, int r, double approx_c,
                                 std::uint64_t seed, CostLog* log = nullptr);

/// Hashed build where each bucket contributes only a star into its minimum-id
/// member. The contract holds for the square of the result, not the result.
NeighborGraph build_lsh_sparse(const PointSet& ps, double scale, double approx_c,
                               std::uint64_t seed, CostLog* log = nullptr);

/// Explicit two-hop closure; test-scale only.
NeighborGraph square(const NeighborGraph& g, CostLog* log = nullptr);

struct Def3Violation {
  std::int64_t u = 0;
  std::int64_t v = -1;
  std::string what;
};

struct Def3Report {
  bool ok = true;
  // Longest edge divided by scale; 0 when edgeless. Reported rather than
  // asserted because hashed builds only bound it up to an implicit constant.
  double max_edge_ratio = 0.0;
  std::vector<Def3Violation> violations;
};

/// Brute-force audit of the near-neighbor contract: every edge has length at
/// most c_eff * scale, and every vertex either has r closed neighbors or is
/// adjacent to its entire closed scale-ball.
Def3Report verify_definition3(const PointSet& ps, const NeighborGraph& g, double scale, int r,
                              double c_eff);

std::string graph_mode_name(GraphMode mode);

/// Edge-list text: a `# R=.. r=.. C=.. mode=.. seed=..` header, then one
/// `u v` id pair per line.
void write_graph(const NeighborGraph& g, std::ostream& out);

}  // namespace rgather

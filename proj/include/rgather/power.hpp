#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rgather/cost.hpp"
#include "rgather/graph.hpp"

namespace rgather {

// k-hop primitives. The k-th power of a graph is never materialized: every
// routine counts hops in the base graph, intermediate vertices included even
// when they lie outside the working subset. Vertex sets travel as id lists
// (order irrelevant, duplicates rejected), results come back sorted, and all
// randomness is keyed on vertex ids so reindexing a graph changes nothing.

struct ExplorationResult {
  // Aligned with the graph's vertex order; each list ascending.
  std::vector<std::vector<std::int64_t>> lists;
  // Set when the true k-hop intersection exceeds j and the list was capped.
  std::vector<bool> truncated;
};

/// For every vertex, the smallest min(j+1, total) ids among the members of
/// `s` within k hops of it (the vertex itself included). Charged k rounds
/// and edges*(j+1) words.
ExplorationResult truncated_explore(const NeighborGraph& g, const std::vector<std::int64_t>& s,
                                    int k, std::int64_t j, CostLog* log = nullptr);

struct HopHit {
  std::int64_t vertex = 0;
  int hops = 0;
};

/// Closest member of `s` within k hops for every vertex, ties resolved to
/// the smallest id; disengaged when none is reachable.
std::vector<std::optional<HopHit>> nearest_in_khop(const NeighborGraph& g,
                                                   const std::vector<std::int64_t>& s, int k,
                                                   CostLog* log = nullptr);

/// Sampled k-hop degree filter. Draws each vertex with probability
/// min(1, 4 ln(n) / (r eta^2)), counts sampled vertices in every closed
/// k-hop ball, and keeps vertices whose count reaches (1 - eta/10) times the
/// expected mass of r samples. With high probability every vertex with r
/// closed k-hop neighbors survives and every survivor has (1 - eta) r.
std::vector<std::int64_t> high_degree_vertices(const NeighborGraph& g, int r, int k, double eta,
                                               std::uint64_t seed, CostLog* log = nullptr);

/// Sequential oracle: scan `order` (a permutation of `vset`), keeping each
/// vertex with no kept vertex within k hops. Returns a maximal independent
/// set of the k-th power restricted to `vset`, sorted.
std::vector<std::int64_t> greedy_mis_power(const NeighborGraph& g,
                                           const std::vector<std::int64_t>& vset, int k,
                                           const std::vector<std::int64_t>& order);

struct MisParams {
  int phase_length = 2;  // iterations per stall window
  int copies = 0;        // occupancy estimates per iteration; 0 derives max(8, ceil(2 ln n))
  int iterations = 0;    // 0 derives ceil(30 ln(max k-hop degree + 2))
};

/// Live state of the randomized independent-set run, handed to an observer
/// after every iteration. Vectors align with `members`.
struct MisState {
  std::vector<std::int64_t> members;  // working subset, ascending
  std::vector<int> prob_exponent;     // marking probability 2^-e, e in [1, T]
  std::vector<bool> alive;
  std::vector<bool> stalled;           // for the current phase
  std::vector<std::int64_t> independent;  // joined so far, in join order
  int iteration = 0;
  int total_iterations = 0;
  int phase_length = 0;
  int copies = 0;
  std::uint64_t seed = 0;
};

using MisObserver = std::function<void(const MisState&)>;

/// Randomized maximal independent set of the k-th power restricted to
/// `vset`. Each iteration every live vertex samples its neighborhood mass,
/// halves its marking probability when the estimate is crowded and doubles
/// it otherwise, then joins if it is the only marked vertex within k hops.
/// A vertex whose mass estimate explodes at a phase boundary stalls for that
/// phase: it keeps halving, cannot mark, and defers its removal to the phase
/// end. Vertices still live after the iteration budget are finished by the
/// greedy oracle, so the result is always maximal.
std::vector<std::int64_t> sparsified_mis_power(const NeighborGraph& g,
                                               const std::vector<std::int64_t>& vset, int k,
                                               std::uint64_t seed, const MisParams& params = {},
                                               CostLog* log = nullptr,
                                               const MisObserver& observer = {});

bool is_independent_khop(const NeighborGraph& g, const std::vector<std::int64_t>& s, int k);

/// True when s is contained in vset and every member of vset lies within k
/// hops of s. Together with is_independent_khop this certifies a maximal
/// independent set of the restricted k-th power.
bool is_maximal_khop(const NeighborGraph& g, const std::vector<std::int64_t>& vset,
                     const std::vector<std::int64_t>& s, int k);

struct DominatingResult {
  std::vector<std::int64_t> centers;
  // Graph on the centers joining pairs within k hops of each other.
  NeighborGraph induced;
};

/// Geometric sampling sweep: round t draws survivors with probability
/// min(1, 2 f^t ln(n) / max_ball), where max_ball caps the closed k-hop
/// degree inside `vset`; a vertex survives a round while it is more than k
/// hops from every draw. The last round draws everything left, so the
/// centers always k-dominate `vset`.
DominatingResult dominating_set_power(const NeighborGraph& g,
                                      const std::vector<std::int64_t>& vset, int k, double f,
                                      std::uint64_t seed, CostLog* log = nullptr);

/// beta = 1 is sparsified_mis_power verbatim. For beta >= 2 a k-dominating
/// set is thinned to an independent one by running the randomized set on the
/// centers-only graph; every vertex of `vset` stays within 2k <= beta*k hops
/// of the result.
std::vector<std::int64_t> ruling_set_power(const NeighborGraph& g,
                                           const std::vector<std::int64_t>& vset, int k, int beta,
                                           std::uint64_t seed, CostLog* log = nullptr);

}  // namespace rgather

#include "rgather/solve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rgather/error.hpp"
#include "rgather/power.hpp"
#include "rgather/prng.hpp"

namespace rgather {
namespace {

// Above this point count the grid bounds come from a pair sample.
constexpr int kExactGridCap = 10000;
constexpr int kGridSamplePairs = 100000;

void check_params(const RGatherParams& p) {
  if (p.r < 1) throw InvalidInput("r must be at least 1");
  if (p.beta < 1) throw InvalidInput("beta must be at least 1");
  if (p.grid_ratio <= 1.0) throw InvalidInput("grid ratio must exceed 1");
  if (p.mode != GraphMode::exact && p.approx_c < 1.0)
    throw InvalidInput("approximation factor C must be at least 1");
}

std::uint64_t probe_seed(std::uint64_t seed, int probe_index) {
  return rng_word(seed, Stream::scale_probe, static_cast<std::uint64_t>(probe_index));
}

// Graph for one probe. hop is the number of raw hops making up one
// conceptual edge: the sparse build satisfies the neighbor contract only for
// its square, so every hop threshold downstream doubles instead of the
// square being materialized.
struct ProbeGraph {
  NeighborGraph g;
  int hop = 1;
};

ProbeGraph build_probe(const PointSet& ps, double scale, const RGatherParams& p,
                       std::uint64_t seed, CostLog* log) {
  if (p.mode == GraphMode::exact) return {build_exact(ps, scale, p.r, log), 1};
  if (p.mode == GraphMode::lsh)
    return {build_lsh_explicit(ps, scale, p.r, p.approx_c, seed, log), 1};
  return {build_lsh_sparse(ps, scale, p.approx_c, seed, log), 2};
}

// Per-vertex test |closed Gamma(v)| >= r, where Gamma spans pg.hop raw hops.
// Exploration capped at r certifies the threshold without full ball counts.
std::vector<char> degree_at_least(const ProbeGraph& pg, int r, CostLog* log) {
  const ExplorationResult ex = truncated_explore(pg.g, pg.g.ids, pg.hop, r, log);
  std::vector<char> ok(ex.lists.size());
  for (std::size_t v = 0; v < ex.lists.size(); ++v)
    ok[v] = ex.lists[v].size() >= static_cast<std::size_t>(r);
  return ok;
}

// Groups assignment hits into clusters sorted by center id. include[v] gates
// which vertices participate; null means all.
std::vector<Cluster> collect_clusters(const NeighborGraph& g,
                                      const std::vector<std::optional<HopHit>>& hits,
                                      const std::vector<char>* include) {
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> members;
  for (int v = 0; v < g.size(); ++v) {
    if (include != nullptr && !(*include)[v]) continue;
    if (!hits[v]) continue;
    members[hits[v]->vertex].push_back(g.ids[v]);
  }
  std::vector<Cluster> out;
  out.reserve(members.size());
  for (auto& [center, ids] : members) {
    std::sort(ids.begin(), ids.end());
    out.push_back({center, std::move(ids)});
  }
  std::sort(out.begin(), out.end(),
            [](const Cluster& a, const Cluster& b) { return a.center < b.center; });
  return out;
}

int min_size(const std::vector<Cluster>& clusters) {
  int m = std::numeric_limits<int>::max();
  for (const Cluster& c : clusters) m = std::min(m, static_cast<int>(c.members.size()));
  return clusters.empty() ? 0 : m;
}

}  // namespace

ScaleGrid make_scale_grid(const PointSet& ps, double ratio, std::uint64_t seed) {
  if (ratio <= 1.0) throw InvalidInput("grid ratio must exceed 1");
  ScaleGrid grid;
  grid.ratio = ratio;
  const int n = ps.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  if (n <= kExactGridCap) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double d = dist_at(ps, i, j);
        if (d > 0.0) lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
    }
  } else {
    grid.sampled = true;
    for (int t = 0; t < kGridSamplePairs; ++t) {
      const int i = static_cast<int>(rng_word(seed, Stream::scale_sample, t, 0) % n);
      const int j = static_cast<int>(rng_word(seed, Stream::scale_sample, t, 1) % n);
      if (i == j) continue;
      const double d = dist_at(ps, i, j);
      if (d > 0.0) lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    lo /= 2.0;
    hi *= 2.0;
  }
  if (hi <= 0.0 || !std::isfinite(lo)) {
    // No positive pairwise distance: every positive probe behaves alike,
    // connecting exactly the coincident stacks.
    grid.scales = {1.0};
    return grid;
  }
  grid.lo = lo;
  grid.hi = hi;
  for (double s = lo / ratio;; s *= ratio) {
    grid.scales.push_back(s);
    if (s >= hi) break;
  }
  return grid;
}

std::optional<Clustering> rgather_at_scale(const PointSet& ps, double scale,
                                           const RGatherParams& params, CostLog* log) {
  check_params(params);
  if (!(scale > 0.0)) throw InvalidInput("scale must be positive");
  Clustering sol;
  sol.scale_used = scale;
  if (ps.size() == 0) return sol;
  const ProbeGraph pg = build_probe(ps, scale, params, params.seed, log);
  const std::vector<std::int64_t> centers =
      ruling_set_power(pg.g, pg.g.ids, 2 * pg.hop, params.beta, params.seed, log);
  const std::vector<std::optional<HopHit>> hits =
      nearest_in_khop(pg.g, centers, 2 * params.beta * pg.hop, log);
  for (int v = 0; v < pg.g.size(); ++v)
    if (!hits[v]) return std::nullopt;
  sol.clusters = collect_clusters(pg.g, hits, nullptr);
  if (min_size(sol.clusters) < params.r) return std::nullopt;
  return sol;
}

Clustering rgather(const PointSet& ps, const RGatherParams& params, CostLog* log) {
  check_params(params);
  if (ps.size() == 0) return {};
  if (params.r > ps.size()) throw Infeasible("r exceeds the number of points");
  const ScaleGrid grid = make_scale_grid(ps, params.grid_ratio, params.seed);
  // Scale probes are independent, so the probes this run needed are charged
  // as parallel lanes of one group closed by a selection sort: the round
  // tally takes the deepest probe, not their sum.
  const std::int64_t gid = log != nullptr ? log->open_group() : 0;
  for (std::size_t i = 0; i < grid.scales.size(); ++i) {
    RGatherParams probe = params;
    probe.seed = probe_seed(params.seed, static_cast<int>(i));
    CostLog lane;
    auto sol = rgather_at_scale(ps, grid.scales[i], probe, log != nullptr ? &lane : nullptr);
    if (log != nullptr) log->absorb(lane, gid, static_cast<int>(i));
    if (sol) {
      if (log != nullptr)
        log->add(account({Primitive::sort, "scale-select", static_cast<std::int64_t>(i + 1)}));
      return *std::move(sol);
    }
  }
  if (log != nullptr)
    log->add(account({Primitive::sort, "scale-select",
                      static_cast<std::int64_t>(grid.scales.size())}));
  throw Infeasible("no feasible scale in the probe grid");
}

Clustering rgather_outliers(const PointSet& ps, const RGatherParams& params, CostLog* log) {
  check_params(params);
  if (params.outliers < 0) throw InvalidInput("outlier budget must be nonnegative");
  if (ps.size() == 0) return {};
  const ScaleGrid grid = make_scale_grid(ps, params.grid_ratio, params.seed);

  const auto probe_scale = [&](std::size_t i, CostLog* lane) -> std::optional<Clustering> {
    const std::uint64_t seed = probe_seed(params.seed, static_cast<int>(i));
    RGatherParams probe = params;
    probe.seed = seed;
    const ProbeGraph pg = build_probe(ps, grid.scales[i], probe, seed, lane);
    const std::vector<char> eligible = degree_at_least(pg, params.r, lane);
    std::vector<std::int64_t> pool;
    for (int v = 0; v < pg.g.size(); ++v)
      if (eligible[v]) pool.push_back(pg.g.ids[v]);
    Clustering sol;
    sol.scale_used = grid.scales[i];
    if (pool.empty()) {
      sol.outliers = pg.g.ids;
      std::sort(sol.outliers.begin(), sol.outliers.end());
    } else {
      const std::vector<std::int64_t> centers =
          ruling_set_power(pg.g, pool, 2 * pg.hop, params.beta, seed, lane);
      const std::vector<std::optional<HopHit>> hits =
          nearest_in_khop(pg.g, centers, 2 * params.beta * pg.hop, lane);
      sol.clusters = collect_clusters(pg.g, hits, nullptr);
      for (int v = 0; v < pg.g.size(); ++v)
        if (!hits[v]) sol.outliers.push_back(pg.g.ids[v]);
      std::sort(sol.outliers.begin(), sol.outliers.end());
    }
    if (static_cast<int>(sol.outliers.size()) > params.outliers) return std::nullopt;
    // Centers keep their whole closed neighborhood, so sizes below r cannot
    // happen; treat one as infeasibility all the same rather than return it.
    if (!sol.clusters.empty() && min_size(sol.clusters) < params.r) return std::nullopt;
    return sol;
  };

  // Same parallel-lane accounting as the plain pipeline.
  const std::int64_t gid = log != nullptr ? log->open_group() : 0;
  for (std::size_t i = 0; i < grid.scales.size(); ++i) {
    CostLog lane;
    auto sol = probe_scale(i, log != nullptr ? &lane : nullptr);
    if (log != nullptr) log->absorb(lane, gid, static_cast<int>(i));
    if (sol) {
      if (log != nullptr)
        log->add(account({Primitive::sort, "scale-select", static_cast<std::int64_t>(i + 1)}));
      return *std::move(sol);
    }
  }
  if (log != nullptr)
    log->add(account({Primitive::sort, "scale-select",
                      static_cast<std::int64_t>(grid.scales.size())}));
  throw Infeasible("no scale leaves few enough points unassigned");
}

Clustering rgather_pointwise(const PointSet& ps, const RGatherParams& params, CostLog* log) {
  check_params(params);
  const int n = ps.size();
  if (n == 0) return {};
  if (params.r > n) throw Infeasible("r exceeds the number of points");
  // Phases must double: the per-point bound hinges on some phase landing
  // inside [rho_r(p), 2 rho_r(p)), whatever ratio the scale search uses.
  const ScaleGrid grid = make_scale_grid(ps, 2.0, params.seed);
  std::vector<double> phases = grid.scales;
  if (phases.size() > 1) phases.erase(phases.begin());  // drop the sub-lo probe

  std::vector<char> assigned(n, 0);
  std::vector<Cluster> clusters;
  std::unordered_map<std::int64_t, int> cluster_of;  // member id -> cluster index
  int done = 0;

  for (std::size_t i = 0; i < phases.size() && done < n; ++i) {
    const std::uint64_t seed = probe_seed(params.seed, static_cast<int>(i));
    const ProbeGraph pg = build_probe(ps, phases[i], params, seed, log);
    const std::vector<char> eligible = degree_at_least(pg, params.r, log);

    // Everything below is measured against the clusters existing when the
    // phase began; stragglers may not chain through one another, that would
    // break the radius growth of frozen clusters.
    std::vector<std::int64_t> settled;
    for (int v = 0; v < n; ++v)
      if (assigned[v]) settled.push_back(pg.g.ids[v]);
    std::vector<std::optional<HopHit>> near_settled;
    if (!settled.empty()) near_settled = nearest_in_khop(pg.g, settled, pg.hop, log);

    std::vector<std::int64_t> frontier;  // eligible, unassigned, not next to a cluster
    for (int v = 0; v < n; ++v)
      if (eligible[v] && !assigned[v] && (settled.empty() || !near_settled[v]))
        frontier.push_back(pg.g.ids[v]);

    if (!frontier.empty()) {
      const std::vector<std::int64_t> centers =
          ruling_set_power(pg.g, frontier, 2 * pg.hop, params.beta, seed, log);
      const std::vector<std::optional<HopHit>> near_center =
          nearest_in_khop(pg.g, centers, 2 * params.beta * pg.hop, log);
      std::unordered_map<std::int64_t, int> fresh;  // center id -> cluster index
      for (int v = 0; v < n; ++v) {
        if (assigned[v] || !near_center[v]) continue;
        const std::int64_t center = near_center[v]->vertex;
        auto [it, inserted] = fresh.emplace(center, static_cast<int>(clusters.size()));
        if (inserted) clusters.push_back({center, {}});
        clusters[it->second].members.push_back(pg.g.ids[v]);
        cluster_of[pg.g.ids[v]] = it->second;
        assigned[v] = 1;
        ++done;
      }
    }

    for (int v = 0; v < n; ++v) {
      if (!eligible[v] || assigned[v]) continue;
      if (settled.empty() || !near_settled[v])
        throw std::logic_error("pointwise phase left an eligible point uncovered");
      const int idx = cluster_of.at(near_settled[v]->vertex);
      clusters[idx].members.push_back(pg.g.ids[v]);
      cluster_of[pg.g.ids[v]] = idx;
      assigned[v] = 1;
      ++done;
    }
  }

  if (done < n) throw Infeasible("scale range exhausted before every point was clustered");
  for (Cluster& c : clusters) std::sort(c.members.begin(), c.members.end());
  std::sort(clusters.begin(), clusters.end(),
            [](const Cluster& a, const Cluster& b) { return a.center < b.center; });
  Clustering sol;
  sol.clusters = std::move(clusters);
  return sol;
}

}  // namespace rgather

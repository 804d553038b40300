#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rgather/cost.hpp"
#include "rgather/graph.hpp"
#include "rgather/points.hpp"

namespace rgather {

// Offline clustering pipelines. Each entry point probes geometric graph
// scales, builds a near-neighbor graph per probe, and reduces clustering to
// ruling sets and hop queries on that graph. Probes are independent: probe i
// derives its own seed substream, so results are reproducible bit for bit
// and probes could run concurrently without changing any output.

/// Multiplicative probe schedule for the graph scale.
struct ScaleGrid {
  double lo = 0.0;     // smallest positive pairwise distance
  double hi = 0.0;     // largest pairwise distance
  double ratio = 2.0;
  bool sampled = false;  // bounds estimated from a pair sample, widened 2x
  std::vector<double> scales;  // ascending, lo/ratio through the first >= hi
};

/// Exact pairwise extremes up to 10^4 points, beyond that a seeded pair
/// sample with 2x safety margins on both ends (flagged). Inputs with no
/// positive pairwise distance degenerate to a single probe at scale 1, where
/// the graph connects exactly the coincident points.
ScaleGrid make_scale_grid(const PointSet& ps, double ratio, std::uint64_t seed);

/// One probe of the plain pipeline at a fixed scale: near-neighbor graph,
/// ruling set of its square, every point assigned to the hop-nearest center
/// (ties to the smallest center id). none when the scale is infeasible, that
/// is some point reaches no center or some cluster ends up smaller than r.
std::optional<Clustering> rgather_at_scale(const PointSet& ps, double scale,
                                           const RGatherParams& params, CostLog* log = nullptr);

/// Smallest feasible grid scale's clustering; scale_used records the probe.
/// Throws Infeasible when r exceeds the point count or no probe succeeds.
Clustering rgather(const PointSet& ps, const RGatherParams& params, CostLog* log = nullptr);

/// Outlier-tolerant variant: points whose closed neighborhood stays below r
/// never seed clusters, and whatever lies more than 2*beta hops from every
/// center is left unassigned. First grid scale leaving at most
/// params.outliers points unassigned wins.
Clustering rgather_outliers(const PointSet& ps, const RGatherParams& params,
                            CostLog* log = nullptr);

/// Doubling-phase pipeline whose guarantee is per point rather than global:
/// dist(p, center(p)) <= 4 * beta * C_eff * rho_r(p). Clusters freeze once
/// formed; later phases only append stragglers next to already-clustered
/// points. scale_used is NaN, no single probe produced the output.
Clustering rgather_pointwise(const PointSet& ps, const RGatherParams& params,
                             CostLog* log = nullptr);

}  // namespace rgather

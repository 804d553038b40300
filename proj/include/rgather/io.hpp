#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rgather/cost.hpp"
#include "rgather/points.hpp"

namespace rgather {

// File formats and JSON emission for the command-line surface. Parsers
// report malformed content with the 1-based line number and the stream name;
// emitters render doubles via shortest round-trip so identical inputs give
// byte-identical text.

/// One replayable operation against the dynamic clustering structure.
struct Op {
  enum class Kind { insert, erase, query, query_all };
  Kind kind = Kind::insert;
  std::int64_t id = 0;
  std::vector<double> coords;  // insert only
};

/// Point file: header `dim=<d>`, then one `id,x1,...,xd` line per point.
PointSet parse_points(std::istream& in, const std::string& name);
PointSet parse_points_file(const std::string& path);

/// Op log: one op per line, `I <id> <x1> ... <xd>`, `D <id>`, `Q <id>`, or
/// `QALL`. Dimension is set by the first insert; later inserts must agree.
std::vector<Op> parse_ops(std::istream& in, const std::string& name);
std::vector<Op> parse_ops_file(const std::string& path);

std::string points_to_csv(const PointSet& ps);

/// n points around `blobs` seeded uniform centers with unit Gaussian spread,
/// ids 0..n-1, point i attached to blob i mod blobs.
PointSet gen_gaussian_blobs(int n, int dim, int blobs, std::uint64_t seed);

/// Clustering JSON, schema "rgather/1": r, R_used (null when scale-free),
/// clusters, outliers, max_radius, plus cost_report when given.
std::string emit_clustering_json(const PointSet& ps, const Clustering& sol,
                                 const RGatherParams& params,
                                 const CostReport* cost = nullptr);

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> mismatches;  // human-readable, one per failed metric
};

/// Recomputes every metric of a clustering JSON against ps: structure via
/// validate (malformation throws InvalidInput), then declared r, outlier
/// budget, min cluster size, and max_radius at 1e-9 relative tolerance.
VerifyResult verify_solution(const PointSet& ps, const std::string& solution_json,
                             int r, int outlier_budget);

}  // namespace rgather

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

#include "rgather/error.hpp"

namespace rgather {

/// Immutable set of d-dimensional points with unique integer ids.
class PointSet {
 public:
  PointSet() = default;

  /// Validates on construction: dim >= 1, unique ids, coords.size() equal to
  /// ids.size() * dim, every coordinate finite.
  PointSet(int dim, std::vector<std::int64_t> ids, std::vector<double> coords);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(ids_.size()); }
  std::int64_t id(int index) const { return ids_[index]; }
  const std::vector<std::int64_t>& ids() const { return ids_; }

  std::span<const double> point(int index) const {
    return {coords_.data() + static_cast<std::size_t>(index) * dim_,
            static_cast<std::size_t>(dim_)};
  }

  /// Index of id, or -1 when absent.
  int index_of(std::int64_t id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
  }
  bool contains(std::int64_t id) const { return index_of(id) >= 0; }

 private:
  int dim_ = 0;
  std::vector<std::int64_t> ids_;
  std::vector<double> coords_;
  std::unordered_map<std::int64_t, int> index_;
};

inline double euclidean(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InvalidInput("dist: dimension mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double d = p[k] - q[k];
    s += d * d;
  }
  return std::sqrt(s);
}

// Unchecked index-based distance, for hot loops over one set.
inline double dist_at(const PointSet& ps, int i, int j) {
  return euclidean(ps.point(i), ps.point(j));
}

/// Distance between two points of P addressed by id.
double dist(const PointSet& ps, std::int64_t a, std::int64_t b);

/// Distance from p to the r-th closest point of P; p itself counts as the
/// 1st. Exact, brute force.
double rho_r(const PointSet& ps, std::int64_t p, int r);

/// max over p of rho_r(P, p, r).
double rho_hat(const PointSet& ps, int r);

/// (k+1)-th largest rho_r value over P: the best achievable max after
/// discarding up to k points.
double rho_hat_k(const PointSet& ps, int r, int k);

struct Cluster {
  std::int64_t center = 0;
  std::vector<std::int64_t> members;  // sorted, unique, contains center
};

struct Clustering {
  std::vector<Cluster> clusters;
  std::vector<std::int64_t> outliers;  // sorted
  // Graph scale that produced the solution; NaN for scale-free pipelines.
  double scale_used = std::numeric_limits<double>::quiet_NaN();
};

enum class GraphMode { exact, lsh, lsh_sparse };

struct RGatherParams {
  int r = 1;
  int outliers = 0;        // outlier budget
  int power = 1;           // cost exponent for the total-cost objective
  double approx_c = 2.0;   // C, neighbor-graph stretch in the hashed modes
  int beta = 1;            // ruling-set slack
  double eps = 1.0;        // accuracy knob for JL / dynamic approximate NN
  GraphMode mode = GraphMode::exact;
  double grid_ratio = 2.0;
  std::uint64_t seed = 0;
};

struct ValidationReport {
  int min_cluster_size = 0;
  double max_radius = 0.0;
  double total_power_cost = 0.0;
  int outlier_count = 0;
};

/// Structure-checks sol against P (disjoint clusters, exact cover, centers
/// belonging to their clusters) and measures it; throws InvalidInput on any
/// malformation. Size and outlier budgets are reported, not enforced.
ValidationReport validate(const PointSet& ps, const Clustering& sol, const RGatherParams& params);

double max_radius(const PointSet& ps, const Clustering& sol);
int min_cluster_size(const Clustering& sol);
double total_power_cost(const PointSet& ps, const Clustering& sol, int k_pow);

}  // namespace rgather

#include "rgather/points.hpp"

#include <algorithm>
#include <string>

namespace rgather {

PointSet::PointSet(int dim, std::vector<std::int64_t> ids, std::vector<double> coords)
    : dim_(dim), ids_(std::move(ids)), coords_(std::move(coords)) {
  if (dim_ < 1) throw InvalidInput("point dimension must be positive");
  if (coords_.size() != ids_.size() * static_cast<std::size_t>(dim_)) {
    throw InvalidInput("coordinate count does not match ids * dim");
  }
  for (double v : coords_) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite coordinate");
  }
  index_.reserve(ids_.size());
  for (int i = 0; i < static_cast<int>(ids_.size()); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw InvalidInput("duplicate point id " + std::to_string(ids_[i]));
    }
  }
}

namespace {

int require_index(const PointSet& ps, std::int64_t id) {
  const int i = ps.index_of(id);
  if (i < 0) throw InvalidInput("unknown point id " + std::to_string(id));
  return i;
}

}  // namespace

double dist(const PointSet& ps, std::int64_t a, std::int64_t b) {
  return dist_at(ps, require_index(ps, a), require_index(ps, b));
}

double rho_r(const PointSet& ps, std::int64_t p, int r) {
  const int i = require_index(ps, p);
  if (r < 1 || r > ps.size()) {
    throw InvalidInput("rho_r: r must be in [1, |P|], got " + std::to_string(r));
  }
  std::vector<double> d(ps.size());
  for (int j = 0; j < ps.size(); ++j) d[j] = dist_at(ps, i, j);
  std::nth_element(d.begin(), d.begin() + (r - 1), d.end());
  return d[r - 1];
}

double rho_hat(const PointSet& ps, int r) {
  if (r < 1 || r > ps.size()) {
    throw InvalidInput("rho_hat: r must be in [1, |P|], got " + std::to_string(r));
  }
  double m = 0.0;
  for (int i = 0; i < ps.size(); ++i) m = std::max(m, rho_r(ps, ps.id(i), r));
  return m;
}

double rho_hat_k(const PointSet& ps, int r, int k) {
  const int n = ps.size();
  if (r < 1 || r > n) {
    throw InvalidInput("rho_hat_k: r must be in [1, |P|], got " + std::to_string(r));
  }
  if (k < 0 || k >= n) {
    throw InvalidInput("rho_hat_k: k must be in [0, |P|-1], got " + std::to_string(k));
  }
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = rho_r(ps, ps.id(i), r);
  std::sort(vals.begin(), vals.end(), std::greater<>());
  return vals[k];
}

namespace {

// Shared structural walk: checks the partition and hands each (center index,
// member index) pair to the sink.
template <typename Sink>
void for_each_assignment(const PointSet& ps, const Clustering& sol, Sink&& sink) {
  std::vector<char> seen(ps.size(), 0);
  auto claim = [&](std::int64_t id) {
    const int i = require_index(ps, id);
    if (seen[i]) throw InvalidInput("point id " + std::to_string(id) + " assigned twice");
    seen[i] = 1;
    return i;
  };
  for (const Cluster& c : sol.clusters) {
    if (c.members.empty()) throw InvalidInput("empty cluster");
    const int ci = require_index(ps, c.center);
    bool center_is_member = false;
    for (std::int64_t m : c.members) {
      const int mi = claim(m);
      center_is_member |= mi == ci;
      sink(ci, mi);
    }
    if (!center_is_member) {
      throw InvalidInput("cluster center " + std::to_string(c.center) + " is not a member");
    }
  }
  for (std::int64_t o : sol.outliers) claim(o);
  for (int i = 0; i < ps.size(); ++i) {
    if (!seen[i]) {
      throw InvalidInput("point id " + std::to_string(ps.id(i)) +
                         " is in neither a cluster nor the outlier set");
    }
  }
}

}  // namespace

ValidationReport validate(const PointSet& ps, const Clustering& sol, const RGatherParams& params) {
  ValidationReport rep;
  rep.outlier_count = static_cast<int>(sol.outliers.size());
  rep.min_cluster_size = sol.clusters.empty() ? 0 : std::numeric_limits<int>::max();
  for (const Cluster& c : sol.clusters) {
    rep.min_cluster_size = std::min(rep.min_cluster_size, static_cast<int>(c.members.size()));
  }
  for_each_assignment(ps, sol, [&](int ci, int mi) {
    const double d = dist_at(ps, ci, mi);
    rep.max_radius = std::max(rep.max_radius, d);
    rep.total_power_cost += std::pow(d, params.power);
  });
  return rep;
}

double max_radius(const PointSet& ps, const Clustering& sol) {
  double m = 0.0;
  for (const Cluster& c : sol.clusters) {
    const int ci = require_index(ps, c.center);
    for (std::int64_t mem : c.members) {
      m = std::max(m, dist_at(ps, ci, require_index(ps, mem)));
    }
  }
  return m;
}

int min_cluster_size(const Clustering& sol) {
  int m = sol.clusters.empty() ? 0 : std::numeric_limits<int>::max();
  for (const Cluster& c : sol.clusters) m = std::min(m, static_cast<int>(c.members.size()));
  return m;
}

double total_power_cost(const PointSet& ps, const Clustering& sol, int k_pow) {
  if (k_pow < 1) throw InvalidInput("total_power_cost: exponent must be >= 1");
  double total = 0.0;
  for (const Cluster& c : sol.clusters) {
    const int ci = require_index(ps, c.center);
    for (std::int64_t mem : c.members) {
      total += std::pow(dist_at(ps, ci, require_index(ps, mem)), k_pow);
    }
  }
  return total;
}

}  // namespace rgather

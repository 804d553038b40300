#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rgather/net.hpp"
#include "rgather/points.hpp"

namespace rgather {

/// Cluster assignment of one point: its center and the radius the structure
/// certifies for the whole clustering at query time.
struct Assignment {
  std::int64_t center = 0;
  double radius_bound = 0.0;
};

/// Insert-only min-size clustering over a leveled hierarchy of centers. Each
/// level i keeps centers more than 4C*2^i apart, a free pool, and per-center
/// pre-clusters capped at r. Queries pick the lowest level whose pre-clusters
/// all reached r and certify radius 4*C^3*2^(i*), which stays within 8*C^3
/// of the optimum. Only levels whose behavior depends on the data are
/// materialized; everything below acts as singletons and everything above
/// mirrors the top level.
class IncrementalRGather {
 public:
  /// `approx_c` is the stretch of the internal nearest-neighbor searches.
  /// For C > 1 pools and centers are indexed by navigating sub-nets queried
  /// at eps = C-1; C = 1 falls back to exact scans.
  IncrementalRGather(DistanceFn dist, int r, double approx_c = 2.0);

  /// Points must be distinct under the metric. Duplicate or coincident ids
  /// are refused before any state changes.
  void insert(std::int64_t id);

  Assignment query(std::int64_t id) const;

  /// Clusters every live point around the level-i* centers. Sizes are >= r;
  /// the returned bound caps every cluster radius.
  std::pair<Clustering, double> query_all() const;

  bool contains(std::int64_t id) const { return live_.count(id) != 0; }
  std::size_t size() const { return live_.size(); }
  int r() const { return r_; }
  double approx_c() const { return c_; }

  /// Materialized level exponents, lowest data-dependent to diameter scale.
  std::pair<int, int> level_window() const;

  /// Audits every lemma invariant on every materialized level plus the
  /// internal index consistency. Quadratic; empty means healthy.
  std::vector<std::string> invariant_violations() const;

 private:
  struct LevelState {
    std::set<std::int64_t> centers;
    std::set<std::int64_t> pool;
    NavigatingNet center_net;
    NavigatingNet pool_net;
    std::map<std::int64_t, std::vector<std::int64_t>> pre;
    std::map<std::int64_t, std::int64_t> owner;

    explicit LevelState(const DistanceFn& dist) : center_net(dist), pool_net(dist) {}
  };

  std::int64_t approx_nn(const std::set<std::int64_t>& members,
                         const NavigatingNet& index, std::int64_t probe) const;
  void insert_at_level(LevelState& st, int level_exp, std::int64_t id);
  /// Level state in which every listed point is its own center.
  LevelState all_centers_level(const std::vector<std::int64_t>& members) const;
  int pick_level() const;
  Assignment assign_at(int level_exp, std::int64_t id) const;

  DistanceFn dist_;
  int r_;
  double c_;
  std::set<std::int64_t> live_;
  double min_dist_ = 0.0;
  double diameter_ = 0.0;
  int lo_ = 0;
  int hi_ = -1;
  std::map<int, LevelState> levels_;
};

/// Fully dynamic min-size clustering driven by a navigating net. Every net
/// scale R in the active window keeps a free pool U_R and pre-clusters
/// Q_R(x) of radius < R/2 around the scale's net points, capped at r.
/// Queries pick the smallest scale whose pre-clusters all reached r and
/// certify radius 2C*R*, within 16*C^2 of the optimum. Scales below the
/// window are all-singleton, scales above mirror the top scale.
class DynamicRGather {
 public:
  DynamicRGather(DistanceFn dist, int r, double approx_c = 2.0);

  void insert(std::int64_t id);

  /// Unknown ids are refused. Dropping to one or zero live points resets
  /// the per-scale state entirely.
  void erase(std::int64_t id);

  Assignment query(std::int64_t id) const;
  std::pair<Clustering, double> query_all() const;

  bool contains(std::int64_t id) const { return net_.contains(id); }
  std::size_t size() const { return net_.size(); }
  int r() const { return r_; }
  double approx_c() const { return c_; }
  const NavigatingNet& net() const { return net_; }

  /// Materialized scale exponents: [min net top, top-singleton scale + log2
  /// of the rounded-up approximation factor + 3].
  std::pair<int, int> scale_window() const { return {lo_, hi_}; }

  /// Audits the net itself plus partition, pool completeness and pre-cluster
  /// adequacy on every materialized scale. Quadratic; empty means healthy.
  std::vector<std::string> invariant_violations() const;

 private:
  struct ScaleState {
    std::set<std::int64_t> pool;
    NavigatingNet pool_net;
    std::map<std::int64_t, std::vector<std::int64_t>> pre;
    std::map<std::int64_t, std::int64_t> owner;

    explicit ScaleState(const DistanceFn& dist) : pool_net(dist) {}
  };

  std::int64_t pool_nn(const ScaleState& st, std::int64_t probe) const;
  std::int64_t level_nn(int scale_exp, std::int64_t probe) const;
  void pool_add(ScaleState& st, std::int64_t id);
  void pool_remove(ScaleState& st, std::int64_t id);
  void claim_into(ScaleState& st, int scale_exp, std::int64_t center);
  void adopt_new_centers(ScaleState& st, int scale_exp);
  std::pair<int, int> window() const;
  /// Scale state in which every listed point is its own center.
  ScaleState all_centers_scale(const std::vector<std::int64_t>& members) const;
  int pick_scale() const;
  Assignment assign_at(int scale_exp, std::int64_t id) const;

  DistanceFn dist_;
  int r_;
  double c_;
  int cbar_exp_;
  NavigatingNet net_;
  int lo_ = 0;
  int hi_ = -1;
  std::map<int, ScaleState> scales_;
};

}  // namespace rgather

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace rgather {

/// Metric callback: distance between two live point ids. Implementations must
/// be symmetric, nonnegative and zero only for equal ids; the structures below
/// never ask about ids the caller has not registered.
using DistanceFn = std::function<double(std::int64_t, std::int64_t)>;

/// Coordinate store backing the Euclidean DistanceFn. The store must outlive
/// every structure holding a callback obtained from fn().
class EuclideanStore {
 public:
  explicit EuclideanStore(int dim);

  void insert(std::int64_t id, const std::vector<double>& coords);
  void erase(std::int64_t id);
  bool contains(std::int64_t id) const;

  double distance(std::int64_t a, std::int64_t b) const;
  DistanceFn fn() const;

  int dim() const { return dim_; }
  std::size_t size() const { return pts_.size(); }
  const std::vector<double>& point(std::int64_t id) const;
  std::vector<std::int64_t> ids() const;

 private:
  int dim_;
  std::map<std::int64_t, std::vector<double>> pts_;
};

/// Hierarchy of nets Y_R over the live ids, one per scale R = alpha * 2^i,
/// with navigation lists L(x, i) = {z in Y_{R/2} : dist(x, z) <= 4R}. Scales
/// are handled as integer exponents; a point belongs to Y at every exponent
/// up to its top, and exactly one point (the root) has an unbounded top.
/// Lists are stored only where they differ from the trivial {owner}, so the
/// structure is naturally sparse across scales.
class NavigatingNet {
 public:
  static constexpr int kRootExp = std::numeric_limits<int>::max();

  explicit NavigatingNet(DistanceFn dist, double alpha = 1.0);

  /// Duplicate ids and points at distance zero from a live point are refused:
  /// the descent that places a new point terminates only while every live
  /// pairwise distance is positive.
  void insert(std::int64_t id);

  /// Removes the point and repairs the hierarchy bottom-up, promoting points
  /// whose cover was lost. Returns the promoted ids per scale exponent.
  std::map<int, std::vector<std::int64_t>> erase(std::int64_t id);

  /// (1+eps)-approximate nearest live point to `probe`, which only needs to
  /// be measurable by the distance callback, not a member. Ties resolve to
  /// the smallest id.
  std::int64_t nearest(std::int64_t probe, double eps) const;

  bool contains(std::int64_t id) const;
  std::size_t size() const { return top_.size(); }
  std::vector<std::int64_t> ids() const;

  /// Members of Y at this exponent, ascending.
  std::vector<std::int64_t> level(int scale_exp) const;
  double scale(int scale_exp) const;
  double alpha() const { return alpha_; }
  int top_exponent(std::int64_t id) const;
  int min_top_exponent() const;
  int max_finite_top_exponent() const;

  /// Stored list, or the trivial {id} when the point is in Y at that scale.
  std::vector<std::int64_t> list_at(std::int64_t id, int scale_exp) const;

  /// Exponent window the checker sweeps: wide enough that everything outside
  /// is provably trivial. Empty structure yields (0, -1).
  std::pair<int, int> active_exponents() const;

  /// Full invariant audit (separating, nesting, cover, list exactness plus
  /// internal index consistency), quadratic in the live set. Empty = healthy.
  std::vector<std::string> invariant_violations() const;

 private:
  using ListKey = std::pair<std::int64_t, int>;

  const std::vector<std::int64_t>* stored_list(std::int64_t id, int scale_exp) const;
  void store_list(std::int64_t id, int scale_exp, std::vector<std::int64_t> members);
  void add_to_list(std::int64_t owner, int scale_exp, std::int64_t member);
  void purge_from_lists(std::int64_t id);
  bool has_stored_list_at_or_below(std::int64_t id, int scale_exp) const;

  /// Insertion descent: Z at each exponent from the top down to the first
  /// empty one, computed through the navigation lists.
  std::map<int, std::vector<std::int64_t>> descend(std::int64_t p, int* exp_min,
                                                   int* exp_max) const;

  DistanceFn dist_;
  double alpha_;
  std::map<std::int64_t, int> top_;
  std::map<ListKey, std::vector<std::int64_t>> lists_;
  std::map<std::int64_t, std::set<ListKey>> in_lists_;
};

}  // namespace rgather

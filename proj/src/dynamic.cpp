#include "rgather/dynamic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rgather/error.hpp"

namespace rgather {

namespace {

/// Smallest exponent i with 2^i >= x, for x > 0.
int exp_at_least(double x) {
  int i = std::ilogb(x);
  while (std::ldexp(1.0, i) < x) ++i;
  while (std::ldexp(1.0, i - 1) >= x) --i;
  return i;
}

bool vec_contains(const std::vector<std::int64_t>& v, std::int64_t x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

void vec_erase(std::vector<std::int64_t>& v, std::int64_t x) {
  v.erase(std::remove(v.begin(), v.end(), x), v.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// IncrementalRGather

IncrementalRGather::IncrementalRGather(DistanceFn dist, int r, double approx_c)
    : dist_(std::move(dist)), r_(r), c_(approx_c) {
  if (!dist_) throw InvalidInput("IncrementalRGather: empty distance callback");
  if (r_ < 1) throw InvalidInput("IncrementalRGather: r must be at least 1");
  if (!(c_ >= 1.0)) throw InvalidInput("IncrementalRGather: approximation factor must be at least 1");
}

std::pair<int, int> IncrementalRGather::level_window() const { return {lo_, hi_}; }

std::int64_t IncrementalRGather::approx_nn(const std::set<std::int64_t>& members,
                                           const NavigatingNet& index,
                                           std::int64_t probe) const {
  if (c_ > 1.0) return index.nearest(probe, c_ - 1.0);
  std::int64_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::int64_t x : members) {
    double d = dist_(probe, x);
    if (d < best_d) {
      best_d = d;
      best = x;
    }
  }
  return best;
}

IncrementalRGather::LevelState IncrementalRGather::all_centers_level(
    const std::vector<std::int64_t>& members) const {
  LevelState st(dist_);
  for (std::int64_t x : members) {
    st.centers.insert(x);
    if (c_ > 1.0) st.center_net.insert(x);
    st.pre[x] = {x};
    st.owner[x] = x;
  }
  return st;
}

void IncrementalRGather::insert_at_level(LevelState& st, int level_exp,
                                         std::int64_t id) {
  const double radius = std::ldexp(1.0, level_exp);
  const double center_gap = 4.0 * c_ * c_ * radius;
  const double claim_gap = 2.0 * c_ * radius;

  std::int64_t near_center = 0;
  bool becomes_center = st.centers.empty();
  if (!becomes_center) {
    near_center = approx_nn(st.centers, st.center_net, id);
    becomes_center = dist_(id, near_center) > center_gap;
  }

  if (becomes_center) {
    st.centers.insert(id);
    if (c_ > 1.0) st.center_net.insert(id);
    auto& members = st.pre[id];
    members = {id};
    st.owner[id] = id;
    while (static_cast<int>(members.size()) < r_ && !st.pool.empty()) {
      std::int64_t u = approx_nn(st.pool, st.pool_net, id);
      if (dist_(id, u) > claim_gap) break;
      st.pool.erase(u);
      if (c_ > 1.0) st.pool_net.erase(u);
      members.push_back(u);
      st.owner[u] = id;
    }
    std::sort(members.begin(), members.end());
    return;
  }

  auto& members = st.pre.at(near_center);
  if (dist_(id, near_center) <= claim_gap && static_cast<int>(members.size()) < r_) {
    members.insert(std::upper_bound(members.begin(), members.end(), id), id);
    st.owner[id] = near_center;
  } else {
    st.pool.insert(id);
    if (c_ > 1.0) st.pool_net.insert(id);
  }
}

void IncrementalRGather::insert(std::int64_t id) {
  if (live_.count(id) != 0) {
    std::ostringstream os;
    os << "IncrementalRGather: duplicate id " << id;
    throw InvalidInput(os.str());
  }
  double nearest_new = std::numeric_limits<double>::infinity();
  double farthest_new = 0.0;
  for (std::int64_t x : live_) {
    double d = dist_(id, x);
    if (d == 0.0) {
      std::ostringstream os;
      os << "IncrementalRGather: point " << id << " coincides with " << x;
      throw InvalidInput(os.str());
    }
    nearest_new = std::min(nearest_new, d);
    farthest_new = std::max(farthest_new, d);
  }

  if (live_.empty()) {
    live_.insert(id);
    return;
  }

  const double new_min = live_.size() == 1 ? nearest_new : std::min(min_dist_, nearest_new);
  const double new_diam = live_.size() == 1 ? farthest_new : std::max(diameter_, farthest_new);
  const int new_lo = exp_at_least(new_min / (4.0 * c_ * c_));
  const int new_hi = exp_at_least(new_diam);

  if (levels_.empty()) {
    const std::vector<std::int64_t> seed(live_.begin(), live_.end());
    for (int i = new_lo; i <= new_hi; ++i) levels_.emplace(i, all_centers_level(seed));
  } else {
    if (new_lo > lo_ || new_hi < hi_)
      throw std::logic_error("IncrementalRGather: level window shrank on insert");
    const std::vector<std::int64_t> everyone(live_.begin(), live_.end());
    for (int i = lo_ - 1; i >= new_lo; --i) levels_.emplace(i, all_centers_level(everyone));
    for (int i = hi_ + 1; i <= new_hi; ++i) levels_.emplace(i, levels_.at(hi_));
  }
  lo_ = new_lo;
  hi_ = new_hi;
  min_dist_ = new_min;
  diameter_ = new_diam;
  live_.insert(id);

  for (auto& [exp, st] : levels_) insert_at_level(st, exp, id);
}

int IncrementalRGather::pick_level() const {
  for (const auto& [exp, st] : levels_) {
    bool all_full = true;
    for (const auto& [center, members] : st.pre) {
      if (static_cast<int>(members.size()) < r_) {
        all_full = false;
        break;
      }
    }
    if (all_full) return exp;
  }
  throw std::logic_error("IncrementalRGather: no level admits clusters of size r");
}

Assignment IncrementalRGather::assign_at(int level_exp, std::int64_t id) const {
  const LevelState& st = levels_.at(level_exp);
  const double bound = 4.0 * c_ * c_ * c_ * std::ldexp(1.0, level_exp);
  auto ow = st.owner.find(id);
  if (ow != st.owner.end()) return {ow->second, bound};
  return {approx_nn(st.centers, st.center_net, id), bound};
}

Assignment IncrementalRGather::query(std::int64_t id) const {
  if (live_.count(id) == 0) {
    std::ostringstream os;
    os << "IncrementalRGather: unknown id " << id;
    throw InvalidInput(os.str());
  }
  if (static_cast<std::size_t>(r_) > live_.size())
    throw Infeasible("IncrementalRGather: fewer than r points present");
  if (r_ == 1) return {id, 0.0};
  return assign_at(pick_level(), id);
}

std::pair<Clustering, double> IncrementalRGather::query_all() const {
  if (live_.empty()) throw InvalidInput("IncrementalRGather: query on empty structure");
  if (static_cast<std::size_t>(r_) > live_.size())
    throw Infeasible("IncrementalRGather: fewer than r points present");

  Clustering out;
  if (r_ == 1) {
    for (std::int64_t p : live_) {
      Cluster c;
      c.center = p;
      c.members = {p};
      out.clusters.push_back(std::move(c));
    }
    out.scale_used = 0.0;
    return {std::move(out), 0.0};
  }

  const int exp = pick_level();
  std::map<std::int64_t, std::vector<std::int64_t>> grouped;
  double bound = 0.0;
  for (std::int64_t p : live_) {
    Assignment a = assign_at(exp, p);
    grouped[a.center].push_back(p);
    bound = a.radius_bound;
  }
  for (auto& [center, members] : grouped) {
    Cluster c;
    c.center = center;
    c.members = std::move(members);
    out.clusters.push_back(std::move(c));
  }
  out.scale_used = std::ldexp(1.0, exp);
  return {std::move(out), bound};
}

std::vector<std::string> IncrementalRGather::invariant_violations() const {
  std::vector<std::string> out;
  auto complain = [&out](int exp, const std::string& what) {
    std::ostringstream os;
    os << "level " << exp << ": " << what;
    out.push_back(os.str());
  };

  if (live_.size() <= 1) {
    if (!levels_.empty()) out.push_back("levels materialized for a tiny point set");
    return out;
  }

  double true_min = std::numeric_limits<double>::infinity();
  double true_diam = 0.0;
  for (auto a = live_.begin(); a != live_.end(); ++a) {
    for (auto b = std::next(a); b != live_.end(); ++b) {
      double d = dist_(*a, *b);
      true_min = std::min(true_min, d);
      true_diam = std::max(true_diam, d);
    }
  }
  if (true_min != min_dist_) out.push_back("cached minimum pairwise distance is stale");
  if (true_diam != diameter_) out.push_back("cached diameter is stale");
  if (lo_ != exp_at_least(true_min / (4.0 * c_ * c_)))
    out.push_back("lower end of the level window is misplaced");
  if (hi_ != exp_at_least(true_diam))
    out.push_back("upper end of the level window is misplaced");
  {
    int want = lo_;
    for (const auto& [exp, st] : levels_) {
      if (exp != want) {
        out.push_back("materialized levels are not contiguous over the window");
        break;
      }
      ++want;
    }
    if (want != hi_ + 1) out.push_back("materialized levels do not span the window");
  }

  for (const auto& [exp, st] : levels_) {
    const double radius = std::ldexp(1.0, exp);
    const double sep_gap = 4.0 * c_ * radius;
    const double cover_gap = 4.0 * c_ * c_ * radius;
    const double claim_gap = 2.0 * c_ * radius;

    for (auto a = st.centers.begin(); a != st.centers.end(); ++a)
      for (auto b = std::next(a); b != st.centers.end(); ++b)
        if (dist_(*a, *b) <= sep_gap) {
          std::ostringstream os;
          os << "centers " << *a << " and " << *b << " are too close";
          complain(exp, os.str());
        }

    for (std::int64_t u : live_) {
      double to_centers = std::numeric_limits<double>::infinity();
      for (std::int64_t x : st.centers) to_centers = std::min(to_centers, dist_(u, x));
      if (st.centers.count(u) != 0) to_centers = 0.0;
      if (to_centers > cover_gap) {
        std::ostringstream os;
        os << "point " << u << " is uncovered";
        complain(exp, os.str());
      }
      if (st.centers.count(u) == 0 && to_centers > claim_gap && st.pool.count(u) == 0) {
        std::ostringstream os;
        os << "point " << u << " is unclaimed yet missing from the pool";
        complain(exp, os.str());
      }
    }

    std::size_t assigned = 0;
    for (const auto& [center, members] : st.pre) {
      if (st.centers.count(center) == 0) {
        std::ostringstream os;
        os << "cluster owner " << center << " is not a center";
        complain(exp, os.str());
      }
      if (!vec_contains(members, center)) {
        std::ostringstream os;
        os << "center " << center << " is outside its own cluster";
        complain(exp, os.str());
      }
      if (!std::is_sorted(members.begin(), members.end()) ||
          std::adjacent_find(members.begin(), members.end()) != members.end()) {
        std::ostringstream os;
        os << "cluster of " << center << " is not a sorted set";
        complain(exp, os.str());
      }
      if (static_cast<int>(members.size()) > std::max(r_, 1)) {
        std::ostringstream os;
        os << "cluster of " << center << " exceeds the size cap";
        complain(exp, os.str());
      }
      int reachable = 0;
      for (std::int64_t v : live_)
        if (dist_(center, v) <= 2.0 * radius || v == center) ++reachable;
      if (static_cast<int>(members.size()) < std::min(r_, reachable)) {
        std::ostringstream os;
        os << "cluster of " << center << " is smaller than its neighborhood allows";
        complain(exp, os.str());
      }
      for (std::int64_t m : members) {
        auto ow = st.owner.find(m);
        if (ow == st.owner.end() || ow->second != center) {
          std::ostringstream os;
          os << "member " << m << " disagrees with its owner record";
          complain(exp, os.str());
        }
        if (m != center && dist_(center, m) > claim_gap) {
          std::ostringstream os;
          os << "member " << m << " lies outside the claim radius of " << center;
          complain(exp, os.str());
        }
      }
      assigned += members.size();
    }
    if (st.pre.size() != st.centers.size())
      complain(exp, "cluster map and center set disagree");
    if (assigned + st.pool.size() != live_.size())
      complain(exp, "clusters and pool do not partition the live set");
    for (std::int64_t u : st.pool)
      if (st.owner.count(u) != 0) {
        std::ostringstream os;
        os << "point " << u << " is both pooled and assigned";
        complain(exp, os.str());
      }
    if (c_ > 1.0) {
      std::vector<std::int64_t> want(st.centers.begin(), st.centers.end());
      if (st.center_net.ids() != want) complain(exp, "center sub-net is out of sync");
      std::vector<std::int64_t> pooled(st.pool.begin(), st.pool.end());
      if (st.pool_net.ids() != pooled) complain(exp, "pool sub-net is out of sync");
      auto net_issues = st.center_net.invariant_violations();
      for (const auto& v : net_issues) complain(exp, "center sub-net: " + v);
      net_issues = st.pool_net.invariant_violations();
      for (const auto& v : net_issues) complain(exp, "pool sub-net: " + v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// DynamicRGather

DynamicRGather::DynamicRGather(DistanceFn dist, int r, double approx_c)
    : dist_(std::move(dist)), r_(r), c_(approx_c), net_(dist_) {
  if (!dist_) throw InvalidInput("DynamicRGather: empty distance callback");
  if (r_ < 1) throw InvalidInput("DynamicRGather: r must be at least 1");
  if (!(c_ >= 1.0)) throw InvalidInput("DynamicRGather: approximation factor must be at least 1");
  cbar_exp_ = 0;
  while (std::ldexp(1.0, cbar_exp_) < c_) ++cbar_exp_;
}

std::pair<int, int> DynamicRGather::window() const {
  return {net_.min_top_exponent(), net_.max_finite_top_exponent() + cbar_exp_ + 3};
}

std::int64_t DynamicRGather::pool_nn(const ScaleState& st, std::int64_t probe) const {
  if (c_ > 1.0) return st.pool_net.nearest(probe, c_ - 1.0);
  std::int64_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::int64_t x : st.pool) {
    double d = dist_(probe, x);
    if (d < best_d) {
      best_d = d;
      best = x;
    }
  }
  return best;
}

std::int64_t DynamicRGather::level_nn(int scale_exp, std::int64_t probe) const {
  std::int64_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::int64_t x : net_.level(scale_exp)) {
    double d = dist_(probe, x);
    if (d < best_d) {
      best_d = d;
      best = x;
    }
  }
  if (best_d == std::numeric_limits<double>::infinity())
    throw std::logic_error("DynamicRGather: empty net level");
  return best;
}

void DynamicRGather::pool_add(ScaleState& st, std::int64_t id) {
  st.pool.insert(id);
  if (c_ > 1.0) st.pool_net.insert(id);
}

void DynamicRGather::pool_remove(ScaleState& st, std::int64_t id) {
  st.pool.erase(id);
  if (c_ > 1.0) st.pool_net.erase(id);
}

void DynamicRGather::claim_into(ScaleState& st, int scale_exp, std::int64_t center) {
  const double radius = net_.scale(scale_exp);
  auto& members = st.pre.at(center);
  while (static_cast<int>(members.size()) < r_ && !st.pool.empty()) {
    std::int64_t u = pool_nn(st, center);
    if (!(dist_(center, u) < radius / 2.0)) break;
    pool_remove(st, u);
    members.insert(std::upper_bound(members.begin(), members.end(), u), u);
    st.owner[u] = center;
  }
}

void DynamicRGather::adopt_new_centers(ScaleState& st, int scale_exp) {
  for (std::int64_t x : net_.level(scale_exp)) {
    if (st.pre.count(x) != 0) continue;
    if (st.pool.count(x) == 0)
      throw std::logic_error("DynamicRGather: promoted center was not pooled");
    pool_remove(st, x);
    st.pre[x] = {x};
    st.owner[x] = x;
    claim_into(st, scale_exp, x);
  }
}

DynamicRGather::ScaleState DynamicRGather::all_centers_scale(
    const std::vector<std::int64_t>& members) const {
  ScaleState st(dist_);
  for (std::int64_t x : members) {
    st.pre[x] = {x};
    st.owner[x] = x;
  }
  return st;
}

void DynamicRGather::insert(std::int64_t id) {
  net_.insert(id);
  if (net_.size() == 1) return;

  auto [new_lo, new_hi] = window();
  if (scales_.empty()) {
    std::vector<std::int64_t> seed = net_.ids();
    vec_erase(seed, id);
    for (int i = new_lo; i <= new_hi; ++i) scales_.emplace(i, all_centers_scale(seed));
  } else {
    if (new_lo > lo_ || new_hi < hi_)
      throw std::logic_error("DynamicRGather: scale window shrank on insert");
    std::vector<std::int64_t> others = net_.ids();
    vec_erase(others, id);
    for (int i = lo_ - 1; i >= new_lo; --i) scales_.emplace(i, all_centers_scale(others));
    for (int i = hi_ + 1; i <= new_hi; ++i) scales_.emplace(i, scales_.at(hi_));
  }
  lo_ = new_lo;
  hi_ = new_hi;

  for (auto& [exp, st] : scales_) {
    const double radius = net_.scale(exp);
    if (net_.top_exponent(id) >= exp) {
      st.pre[id] = {id};
      st.owner[id] = id;
      claim_into(st, exp, id);
      continue;
    }
    std::int64_t q = level_nn(exp, id);
    auto& members = st.pre.at(q);
    if (dist_(id, q) < radius / 2.0 && static_cast<int>(members.size()) < r_) {
      members.insert(std::upper_bound(members.begin(), members.end(), id), id);
      st.owner[id] = q;
    } else {
      pool_add(st, id);
    }
  }
}

void DynamicRGather::erase(std::int64_t id) {
  if (!net_.contains(id)) {
    std::ostringstream os;
    os << "DynamicRGather: unknown id " << id;
    throw InvalidInput(os.str());
  }
  const int old_top = net_.top_exponent(id);
  net_.erase(id);

  if (net_.size() <= 1) {
    scales_.clear();
    lo_ = 0;
    hi_ = -1;
    return;
  }

  auto [new_lo, new_hi] = window();
  if (new_lo < lo_)
    throw std::logic_error("DynamicRGather: scale window grew downward on erase");
  for (int i = hi_ + 1; i <= new_hi; ++i) scales_.emplace(i, scales_.at(hi_));
  scales_.erase(scales_.begin(), scales_.lower_bound(new_lo));
  scales_.erase(scales_.upper_bound(new_hi), scales_.end());
  lo_ = new_lo;
  hi_ = new_hi;

  for (auto& [exp, st] : scales_) {
    const double radius = net_.scale(exp);
    if (old_top >= exp) {
      auto pit = st.pre.find(id);
      if (pit == st.pre.end())
        throw std::logic_error("DynamicRGather: net point lost its cluster");
      for (std::int64_t m : pit->second) {
        st.owner.erase(m);
        if (m != id) pool_add(st, m);
      }
      st.pre.erase(pit);
    } else if (st.pool.count(id) != 0) {
      pool_remove(st, id);
    } else {
      auto ow = st.owner.find(id);
      if (ow == st.owner.end())
        throw std::logic_error("DynamicRGather: deleted point was neither pooled nor assigned");
      const std::int64_t q = ow->second;
      st.owner.erase(ow);
      vec_erase(st.pre.at(q), id);
      if (!st.pool.empty()) {
        std::int64_t u = pool_nn(st, q);
        if (dist_(q, u) < radius / 2.0) {
          pool_remove(st, u);
          auto& members = st.pre.at(q);
          members.insert(std::upper_bound(members.begin(), members.end(), u), u);
          st.owner[u] = q;
        }
      }
    }
    adopt_new_centers(st, exp);
  }
}

int DynamicRGather::pick_scale() const {
  for (const auto& [exp, st] : scales_) {
    bool all_full = true;
    for (const auto& [center, members] : st.pre) {
      if (static_cast<int>(members.size()) < r_) {
        all_full = false;
        break;
      }
    }
    if (all_full) return exp;
  }
  throw std::logic_error("DynamicRGather: no scale admits clusters of size r");
}

Assignment DynamicRGather::assign_at(int scale_exp, std::int64_t id) const {
  const ScaleState& st = scales_.at(scale_exp);
  const double bound = 2.0 * c_ * net_.scale(scale_exp);
  auto ow = st.owner.find(id);
  if (ow != st.owner.end()) return {ow->second, bound};
  return {level_nn(scale_exp, id), bound};
}

Assignment DynamicRGather::query(std::int64_t id) const {
  if (!net_.contains(id)) {
    std::ostringstream os;
    os << "DynamicRGather: unknown id " << id;
    throw InvalidInput(os.str());
  }
  if (static_cast<std::size_t>(r_) > net_.size())
    throw Infeasible("DynamicRGather: fewer than r points present");
  if (r_ == 1) return {id, 0.0};
  return assign_at(pick_scale(), id);
}

std::pair<Clustering, double> DynamicRGather::query_all() const {
  if (net_.size() == 0) throw InvalidInput("DynamicRGather: query on empty structure");
  if (static_cast<std::size_t>(r_) > net_.size())
    throw Infeasible("DynamicRGather: fewer than r points present");

  Clustering out;
  if (r_ == 1) {
    for (std::int64_t p : net_.ids()) {
      Cluster c;
      c.center = p;
      c.members = {p};
      out.clusters.push_back(std::move(c));
    }
    out.scale_used = 0.0;
    return {std::move(out), 0.0};
  }

  const int exp = pick_scale();
  std::map<std::int64_t, std::vector<std::int64_t>> grouped;
  double bound = 0.0;
  for (std::int64_t p : net_.ids()) {
    Assignment a = assign_at(exp, p);
    grouped[a.center].push_back(p);
    bound = a.radius_bound;
  }
  for (auto& [center, members] : grouped) {
    Cluster c;
    c.center = center;
    c.members = std::move(members);
    out.clusters.push_back(std::move(c));
  }
  out.scale_used = net_.scale(exp);
  return {std::move(out), bound};
}

std::vector<std::string> DynamicRGather::invariant_violations() const {
  std::vector<std::string> out = net_.invariant_violations();
  auto complain = [&out](int exp, const std::string& what) {
    std::ostringstream os;
    os << "scale " << exp << ": " << what;
    out.push_back(os.str());
  };

  if (net_.size() <= 1) {
    if (!scales_.empty()) out.push_back("scales materialized for a tiny point set");
    return out;
  }

  {
    auto [want_lo, want_hi] = window();
    if (lo_ != want_lo) out.push_back("lower end of the scale window is misplaced");
    if (hi_ != want_hi) out.push_back("upper end of the scale window is misplaced");
    int want = lo_;
    for (const auto& [exp, st] : scales_) {
      if (exp != want) {
        out.push_back("materialized scales are not contiguous over the window");
        break;
      }
      ++want;
    }
    if (want != hi_ + 1) out.push_back("materialized scales do not span the window");
  }

  const std::vector<std::int64_t> everyone = net_.ids();
  for (const auto& [exp, st] : scales_) {
    const double radius = net_.scale(exp);
    const std::vector<std::int64_t> level = net_.level(exp);

    for (std::int64_t x : level)
      if (st.pre.count(x) == 0) {
        std::ostringstream os;
        os << "net point " << x << " has no cluster";
        complain(exp, os.str());
      }
    if (st.pre.size() != level.size())
      complain(exp, "cluster map and net level disagree");

    std::size_t assigned = 0;
    for (const auto& [center, members] : st.pre) {
      if (!std::binary_search(level.begin(), level.end(), center)) {
        std::ostringstream os;
        os << "cluster owner " << center << " is not a net point";
        complain(exp, os.str());
      }
      if (!vec_contains(members, center)) {
        std::ostringstream os;
        os << "center " << center << " is outside its own cluster";
        complain(exp, os.str());
      }
      if (!std::is_sorted(members.begin(), members.end()) ||
          std::adjacent_find(members.begin(), members.end()) != members.end()) {
        std::ostringstream os;
        os << "cluster of " << center << " is not a sorted set";
        complain(exp, os.str());
      }
      if (static_cast<int>(members.size()) > std::max(r_, 1)) {
        std::ostringstream os;
        os << "cluster of " << center << " exceeds the size cap";
        complain(exp, os.str());
      }
      int reachable = 0;
      for (std::int64_t v : everyone)
        if (dist_(center, v) < radius / (2.0 * c_) || v == center) ++reachable;
      if (static_cast<int>(members.size()) < std::min(r_, reachable)) {
        std::ostringstream os;
        os << "cluster of " << center << " is smaller than its neighborhood allows";
        complain(exp, os.str());
      }
      for (std::int64_t m : members) {
        auto ow = st.owner.find(m);
        if (ow == st.owner.end() || ow->second != center) {
          std::ostringstream os;
          os << "member " << m << " disagrees with its owner record";
          complain(exp, os.str());
        }
        if (m != center && !(dist_(center, m) < radius / 2.0)) {
          std::ostringstream os;
          os << "member " << m << " lies outside the claim radius of " << center;
          complain(exp, os.str());
        }
      }
      assigned += members.size();
    }
    if (assigned + st.pool.size() != everyone.size())
      complain(exp, "clusters and pool do not partition the live set");
    for (std::int64_t u : st.pool)
      if (st.owner.count(u) != 0) {
        std::ostringstream os;
        os << "point " << u << " is both pooled and assigned";
        complain(exp, os.str());
      }

    for (std::int64_t u : everyone) {
      if (std::binary_search(level.begin(), level.end(), u)) continue;
      double to_level = std::numeric_limits<double>::infinity();
      for (std::int64_t x : level) to_level = std::min(to_level, dist_(u, x));
      if (to_level >= radius / 2.0 && st.pool.count(u) == 0) {
        std::ostringstream os;
        os << "point " << u << " is unclaimed yet missing from the pool";
        complain(exp, os.str());
      }
    }

    if (c_ > 1.0) {
      std::vector<std::int64_t> pooled(st.pool.begin(), st.pool.end());
      if (st.pool_net.ids() != pooled) complain(exp, "pool sub-net is out of sync");
      auto net_issues = st.pool_net.invariant_violations();
      for (const auto& v : net_issues) complain(exp, "pool sub-net: " + v);
    }
  }
  return out;
}

}  // namespace rgather

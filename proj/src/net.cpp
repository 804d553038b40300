#include "rgather/net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rgather/error.hpp"

namespace rgather {
namespace {

// Smallest i with alpha * 2^i strictly above d; d > 0 and finite. ilogb gives
// the ballpark, the loops make it exact at power-of-two boundaries.
int exp_above(double alpha, double d) {
  int i = std::ilogb(d / alpha) + 1;
  while (std::ldexp(alpha, i) <= d) ++i;
  while (std::ldexp(alpha, i - 1) > d) --i;
  return i;
}

// Largest i with alpha * 2^i <= d.
int exp_at_most(double alpha, double d) { return exp_above(alpha, d) - 1; }

void insert_sorted(std::vector<std::int64_t>& v, std::int64_t x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

void erase_sorted(std::vector<std::int64_t>& v, std::int64_t x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) v.erase(it);
}

}  // namespace

EuclideanStore::EuclideanStore(int dim) : dim_(dim) {
  if (dim < 1) throw InvalidInput("EuclideanStore: dimension must be positive");
}

void EuclideanStore::insert(std::int64_t id, const std::vector<double>& coords) {
  if (static_cast<int>(coords.size()) != dim_)
    throw InvalidInput("EuclideanStore: coordinate count does not match dimension");
  if (!pts_.emplace(id, coords).second)
    throw InvalidInput("EuclideanStore: duplicate id " + std::to_string(id));
}

void EuclideanStore::erase(std::int64_t id) {
  if (pts_.erase(id) == 0)
    throw InvalidInput("EuclideanStore: unknown id " + std::to_string(id));
}

bool EuclideanStore::contains(std::int64_t id) const { return pts_.count(id) != 0; }

double EuclideanStore::distance(std::int64_t a, std::int64_t b) const {
  const auto& pa = point(a);
  const auto& pb = point(b);
  double s = 0.0;
  for (int k = 0; k < dim_; ++k) {
    const double d = pa[k] - pb[k];
    s += d * d;
  }
  return std::sqrt(s);
}

DistanceFn EuclideanStore::fn() const {
  return [this](std::int64_t a, std::int64_t b) { return distance(a, b); };
}

const std::vector<double>& EuclideanStore::point(std::int64_t id) const {
  auto it = pts_.find(id);
  if (it == pts_.end())
    throw InvalidInput("EuclideanStore: unknown id " + std::to_string(id));
  return it->second;
}

std::vector<std::int64_t> EuclideanStore::ids() const {
  std::vector<std::int64_t> out;
  out.reserve(pts_.size());
  for (const auto& [id, _] : pts_) out.push_back(id);
  return out;
}

NavigatingNet::NavigatingNet(DistanceFn dist, double alpha)
    : dist_(std::move(dist)), alpha_(alpha) {
  if (!dist_) throw InvalidInput("NavigatingNet: distance callback is empty");
  if (!(alpha > 0.5) || !(alpha <= 1.0))
    throw InvalidInput("NavigatingNet: alpha must lie in (1/2, 1]");
}

bool NavigatingNet::contains(std::int64_t id) const { return top_.count(id) != 0; }

std::vector<std::int64_t> NavigatingNet::ids() const {
  std::vector<std::int64_t> out;
  out.reserve(top_.size());
  for (const auto& [id, _] : top_) out.push_back(id);
  return out;
}

std::vector<std::int64_t> NavigatingNet::level(int scale_exp) const {
  std::vector<std::int64_t> out;
  for (const auto& [id, t] : top_)
    if (t >= scale_exp) out.push_back(id);
  return out;
}

double NavigatingNet::scale(int scale_exp) const { return std::ldexp(alpha_, scale_exp); }

int NavigatingNet::top_exponent(std::int64_t id) const {
  auto it = top_.find(id);
  if (it == top_.end())
    throw InvalidInput("NavigatingNet: unknown id " + std::to_string(id));
  return it->second;
}

int NavigatingNet::min_top_exponent() const {
  int m = kRootExp;
  for (const auto& [_, t] : top_) m = std::min(m, t);
  return m;
}

int NavigatingNet::max_finite_top_exponent() const {
  int m = std::numeric_limits<int>::min();
  for (const auto& [_, t] : top_)
    if (t != kRootExp) m = std::max(m, t);
  return m;
}

const std::vector<std::int64_t>* NavigatingNet::stored_list(std::int64_t id,
                                                            int scale_exp) const {
  auto it = lists_.find({id, scale_exp});
  return it == lists_.end() ? nullptr : &it->second;
}

std::vector<std::int64_t> NavigatingNet::list_at(std::int64_t id, int scale_exp) const {
  if (const auto* l = stored_list(id, scale_exp)) return *l;
  return {id};
}

void NavigatingNet::store_list(std::int64_t id, int scale_exp,
                               std::vector<std::int64_t> members) {
  if (members.size() <= 1) return;
  for (std::int64_t m : members) in_lists_[m].insert({id, scale_exp});
  lists_[{id, scale_exp}] = std::move(members);
}

void NavigatingNet::add_to_list(std::int64_t owner, int scale_exp, std::int64_t member) {
  auto it = lists_.find({owner, scale_exp});
  if (it == lists_.end()) {
    store_list(owner, scale_exp, member < owner
                                     ? std::vector<std::int64_t>{member, owner}
                                     : std::vector<std::int64_t>{owner, member});
    return;
  }
  insert_sorted(it->second, member);
  in_lists_[member].insert({owner, scale_exp});
}

// Removes the id from every list referencing it, normalizing lists that
// collapse back to their trivial form.
void NavigatingNet::purge_from_lists(std::int64_t id) {
  // Lists the point owns go first, clearing the members' back references
  // before the membership pass below walks the remaining keys.
  std::vector<ListKey> own;
  for (auto it = lists_.lower_bound({id, std::numeric_limits<int>::min()});
       it != lists_.end() && it->first.first == id; ++it)
    own.push_back(it->first);
  for (const ListKey& key : own) {
    for (std::int64_t m : lists_[key])
      if (m != id) in_lists_[m].erase(key);
    lists_.erase(key);
  }
  auto rit = in_lists_.find(id);
  if (rit == in_lists_.end()) return;
  for (const ListKey& key : rit->second) {
    auto lit = lists_.find(key);
    if (lit == lists_.end()) continue;
    erase_sorted(lit->second, id);
    if (lit->second.size() <= 1) {
      for (std::int64_t m : lit->second) in_lists_[m].erase(key);
      lists_.erase(lit);
    }
  }
  in_lists_.erase(rit);
}

bool NavigatingNet::has_stored_list_at_or_below(std::int64_t id, int scale_exp) const {
  auto it = lists_.lower_bound({id, std::numeric_limits<int>::min()});
  return it != lists_.end() && it->first.first == id && it->first.second <= scale_exp;
}

// Z at each exponent from the single-point top scale down to the first empty
// set, each Z being exactly the members of Y within 8R of p.
std::map<int, std::vector<std::int64_t>> NavigatingNet::descend(std::int64_t p,
                                                                int* exp_min,
                                                                int* exp_max) const {
  std::int64_t root = -1;
  for (const auto& [id, t] : top_)
    if (t == kRootExp) root = id;
  const double d_root = dist_(p, root);
  if (d_root == 0.0)
    throw InvalidInput("NavigatingNet: point coincides with id " + std::to_string(root));
  const int mf = max_finite_top_exponent();
  int i = exp_above(alpha_, d_root);
  if (mf != std::numeric_limits<int>::min()) i = std::max(i, mf + 1);
  *exp_max = i;

  std::map<int, std::vector<std::int64_t>> z;
  z[i] = {root};
  while (true) {
    std::set<std::int64_t> cand;
    for (std::int64_t y : z[i]) {
      const auto l = list_at(y, i);
      cand.insert(l.begin(), l.end());
    }
    std::vector<std::int64_t> next;
    const double bound = 4.0 * scale(i);
    for (std::int64_t x : cand) {
      const double d = dist_(p, x);
      if (d == 0.0)
        throw InvalidInput("NavigatingNet: point coincides with id " + std::to_string(x));
      if (d <= bound) next.push_back(x);
    }
    --i;
    if (next.empty()) break;
    z[i] = std::move(next);
  }
  *exp_min = i;
  return z;
}

void NavigatingNet::insert(std::int64_t id) {
  if (top_.count(id))
    throw InvalidInput("NavigatingNet: duplicate id " + std::to_string(id));
  if (top_.empty()) {
    top_[id] = kRootExp;
    return;
  }

  int exp_min = 0;
  int exp_max = 0;
  const auto z = descend(id, &exp_min, &exp_max);

  // Last scale, scanning upward, at which the point keeps its distance to
  // every candidate. Scanning from above instead can hop over a failing
  // scale and land the point next to a lower-level neighbor.
  int hat = exp_min;
  for (int i = exp_min + 1; i <= exp_max; ++i) {
    auto it = z.find(i);
    double dmin = std::numeric_limits<double>::infinity();
    if (it != z.end())
      for (std::int64_t x : it->second) dmin = std::min(dmin, dist_(id, x));
    if (dmin < scale(i)) break;
    hat = i;
  }
  top_[id] = hat;

  for (int i = exp_min + 1; i <= hat + 1; ++i) {
    auto it = z.find(i);
    if (it == z.end()) continue;
    const double bound = 4.0 * scale(i);
    for (std::int64_t x : it->second)
      if (dist_(id, x) <= bound) add_to_list(x, i, id);
  }
  for (int i = exp_min + 1; i <= hat; ++i) {
    std::vector<std::int64_t> members{id};
    auto it = z.find(i - 1);
    if (it != z.end()) members.insert(members.end(), it->second.begin(), it->second.end());
    std::sort(members.begin(), members.end());
    store_list(id, i, std::move(members));
  }
}

std::map<int, std::vector<std::int64_t>> NavigatingNet::erase(std::int64_t id) {
  auto tit = top_.find(id);
  if (tit == top_.end())
    throw InvalidInput("NavigatingNet: unknown id " + std::to_string(id));
  std::map<int, std::vector<std::int64_t>> zmap;
  if (top_.size() == 1) {
    top_.clear();
    lists_.clear();
    in_lists_.clear();
    return zmap;
  }

  const int old_top = tit->second;
  top_.erase(tit);

  int i = 0;
  {
    auto it = lists_.lower_bound({id, std::numeric_limits<int>::min()});
    if (it == lists_.end() || it->first.first != id) {
      // Trivial lists everywhere: nothing within 4R of the point at any of
      // its scales, so no cover is lost.
      if (old_top == kRootExp)
        throw std::logic_error("navigating net root has no navigation list");
      purge_from_lists(id);
      return zmap;
    }
    i = it->first.second;
  }

  std::vector<std::int64_t> z_prev;
  while (true) {
    if (z_prev.empty() && i > old_top) break;
    if (z_prev.size() == 1 && level(i - 1) == z_prev) {
      top_[z_prev[0]] = kRootExp;
      zmap[i] = z_prev;
      break;
    }

    std::set<std::int64_t> cand(z_prev.begin(), z_prev.end());
    if (i <= old_top)
      for (std::int64_t y : list_at(id, i))
        if (y != id) cand.insert(y);

    const double r_cur = scale(i);
    std::vector<std::int64_t> z_cur;
    for (std::int64_t x : cand) {
      bool covered = false;
      for (std::int64_t y : list_at(x, i - 1)) {
        if (y == id) continue;
        auto yt = top_.find(y);
        if (yt != top_.end() && yt->second >= i && dist_(x, y) < r_cur) {
          covered = true;
          break;
        }
      }
      if (covered) continue;

      top_[x] = i;
      z_cur.push_back(x);
      std::vector<std::int64_t> members;
      for (const auto& [m, t] : top_)
        if (t >= i - 1 && dist_(x, m) <= 4.0 * r_cur) members.push_back(m);
      store_list(x, i, std::move(members));
      const double up = 4.0 * scale(i + 1);
      for (const auto& [m, t] : top_)
        if (t >= i + 1 && dist_(x, m) <= up) add_to_list(m, i + 1, x);
    }
    if (!z_cur.empty()) zmap[i] = z_cur;
    z_prev = std::move(z_cur);
    ++i;
  }

  purge_from_lists(id);
  return zmap;
}

std::int64_t NavigatingNet::nearest(std::int64_t probe, double eps) const {
  if (top_.empty()) throw InvalidInput("NavigatingNet: nearest on an empty net");
  if (!(eps > 0.0)) throw InvalidInput("NavigatingNet: eps must be positive");

  const int mf = max_finite_top_exponent();
  int i = mf == std::numeric_limits<int>::min() ? 0 : mf + 1;
  std::vector<std::int64_t> zset = level(i);

  while (true) {
    double dmin = std::numeric_limits<double>::infinity();
    std::int64_t best = zset.front();
    for (std::int64_t x : zset) {
      const double d = dist_(probe, x);
      if (d < dmin) {
        dmin = d;
        best = x;
      }
    }
    if (2.0 * scale(i) * (1.0 + 1.0 / eps) <= dmin) return best;
    if (zset.size() == 1 && !has_stored_list_at_or_below(zset.front(), i)) return best;

    std::set<std::int64_t> cand;
    for (std::int64_t x : zset) {
      const auto l = list_at(x, i);
      cand.insert(l.begin(), l.end());
    }
    const double keep = dmin + scale(i);
    std::vector<std::int64_t> next;
    for (std::int64_t y : cand)
      if (dist_(probe, y) <= keep) next.push_back(y);
    zset = std::move(next);
    --i;
  }
}

std::pair<int, int> NavigatingNet::active_exponents() const {
  if (top_.empty()) return {0, -1};
  const auto ids_v = ids();
  double d_min = std::numeric_limits<double>::infinity();
  double diam = 0.0;
  for (std::size_t a = 0; a < ids_v.size(); ++a)
    for (std::size_t b = a + 1; b < ids_v.size(); ++b) {
      const double d = dist_(ids_v[a], ids_v[b]);
      d_min = std::min(d_min, d);
      diam = std::max(diam, d);
    }
  int lo = 0;
  int hi = 0;
  if (ids_v.size() >= 2 && d_min > 0.0) {
    lo = exp_at_most(alpha_, d_min) - 3;
    hi = std::max(exp_above(alpha_, diam) + 1, max_finite_top_exponent() + 2);
  }
  for (const auto& [key, _] : lists_) {
    lo = std::min(lo, key.second - 1);
    hi = std::max(hi, key.second + 1);
  }
  return {lo, hi};
}

std::vector<std::string> NavigatingNet::invariant_violations() const {
  std::vector<std::string> out;
  if (top_.empty()) {
    if (!lists_.empty() || !in_lists_.empty()) out.push_back("empty net retains lists");
    return out;
  }
  const auto ids_v = ids();
  const std::size_t n = ids_v.size();

  int roots = 0;
  for (const auto& [_, t] : top_)
    if (t == kRootExp) ++roots;
  if (roots != 1) out.push_back("net has " + std::to_string(roots) + " roots");

  double d_min = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const double d = dist_(ids_v[a], ids_v[b]);
      if (!(d > 0.0))
        out.push_back("nonpositive distance between " + std::to_string(ids_v[a]) +
                      " and " + std::to_string(ids_v[b]));
      d_min = std::min(d_min, d);
    }
  if (n >= 2 && !(d_min > 0.0)) return out;

  const auto [lo, hi] = active_exponents();
  std::vector<std::int64_t> below = level(lo - 1);
  for (int i = lo; i <= hi; ++i) {
    const double r = scale(i);
    const std::vector<std::int64_t> cur = level(i);
    const std::string tag = " at exponent " + std::to_string(i);

    for (std::size_t a = 0; a < cur.size(); ++a)
      for (std::size_t b = a + 1; b < cur.size(); ++b)
        if (dist_(cur[a], cur[b]) < r)
          out.push_back("separation broken between " + std::to_string(cur[a]) + " and " +
                        std::to_string(cur[b]) + tag);

    for (std::int64_t x : below) {
      double d = std::numeric_limits<double>::infinity();
      for (std::int64_t y : cur) d = std::min(d, dist_(x, y));
      if (!(d < r)) out.push_back("net cover of " + std::to_string(x) + " broken" + tag);
    }
    for (std::int64_t x : ids_v) {
      double d = std::numeric_limits<double>::infinity();
      for (std::int64_t y : cur) d = std::min(d, dist_(x, y));
      if (!(d < 2.0 * r))
        out.push_back("point cover of " + std::to_string(x) + " broken" + tag);
    }
    if (n >= 2 && r <= d_min && cur.size() != n)
      out.push_back("net below the minimum distance misses points" + tag);

    for (std::int64_t x : cur) {
      std::vector<std::int64_t> want;
      for (std::int64_t y : below)
        if (dist_(x, y) <= 4.0 * r) want.push_back(y);
      if (list_at(x, i) != want)
        out.push_back("list of " + std::to_string(x) + " inexact" + tag);
    }
    below = cur;
  }

  for (const auto& [key, members] : lists_) {
    const std::string where = "stored list (" + std::to_string(key.first) + ", " +
                              std::to_string(key.second) + ")";
    auto t = top_.find(key.first);
    if (t == top_.end() || t->second < key.second) {
      out.push_back(where + " owned outside the net");
      continue;
    }
    if (members.size() <= 1) out.push_back(where + " is trivial but stored");
    if (!std::is_sorted(members.begin(), members.end()) ||
        std::adjacent_find(members.begin(), members.end()) != members.end())
      out.push_back(where + " unsorted or duplicated");
    for (std::int64_t m : members) {
      auto rit = in_lists_.find(m);
      if (rit == in_lists_.end() || !rit->second.count(key))
        out.push_back(where + " missing reverse entry for " + std::to_string(m));
    }
  }
  for (const auto& [m, keys] : in_lists_)
    for (const ListKey& key : keys) {
      auto lit = lists_.find(key);
      if (lit == lists_.end() ||
          !std::binary_search(lit->second.begin(), lit->second.end(), m))
        out.push_back("stale reverse entry of " + std::to_string(m) + " into (" +
                      std::to_string(key.first) + ", " + std::to_string(key.second) + ")");
    }
  return out;
}

}  // namespace rgather

// Acceptance gate for the toolkit. Every criterion runs a randomized
// soundness sweep against a brute-force oracle or a pinned statistical
// threshold, prints exactly one PASS/FAIL line, and the process exits with
// the number of failed criteria. Approximation factors and failure budgets
// are constants next to the sweeps that use them; loosening one here is a
// release decision, not a test fix.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "helpers.hpp"
#include "rgather/cost.hpp"
#include "rgather/dynamic.hpp"
#include "rgather/error.hpp"
#include "rgather/graph.hpp"
#include "rgather/lsh.hpp"
#include "rgather/net.hpp"
#include "rgather/oracle.hpp"
#include "rgather/points.hpp"
#include "rgather/power.hpp"
#include "rgather/solve.hpp"

namespace {

using namespace rgather;
using Clock = std::chrono::steady_clock;

// Slack for "measured <= factor * optimal" comparisons. The absolute term
// only matters when the optimum is exactly zero.
constexpr double kRelSlack = 1e-9;
constexpr double kAbsSlack = 1e-12;

bool within_factor(double measured, double factor, double optimal) {
  return measured <= factor * optimal * (1.0 + kRelSlack) + kAbsSlack;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool ok = false;
  std::string detail;
};

// ---------------------------------------------------------------------------
// Criterion 1: plain pipeline, radius within 8x of the brute-force optimum.

Outcome plain_soundness() {
  const auto start = Clock::now();
  std::mt19937 gen(101);
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const int r = 1 + static_cast<int>(gen() % 3);
    const int d = 1 + static_cast<int>(gen() % 3);
    const int n = r + static_cast<int>(gen() % (13 - r));
    const PointSet ps = testing::random_points(gen, n, d);
    RGatherParams params;
    params.r = r;
    params.seed = 9000 + static_cast<std::uint64_t>(i);
    const Clustering sol = rgather::rgather(ps, params);
    const ValidationReport rep = validate(ps, sol, params);
    const double opt = brute_force_opt_radius(ps, r);
    if (rep.min_cluster_size < r || rep.outlier_count != 0 ||
        !within_factor(rep.max_radius, 8.0, opt)) {
      ++failures;
      continue;
    }
    if (opt > 0.0) worst = std::max(worst, rep.max_radius / opt);
  }
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << "500 instances, " << failures << " failures, worst ratio " << worst << " of 8, "
     << elapsed << "s of 60";
  return {failures == 0 && elapsed < 60.0, os.str()};
}

// ---------------------------------------------------------------------------
// Criterion 2: outlier pipeline, budget respected and radius within 8x of
// the outlier-aware optimum.

Outcome outlier_soundness() {
  std::mt19937 gen(202);
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const int r = 1 + static_cast<int>(gen() % 3);
    const int k_out = static_cast<int>(gen() % 3);
    const int d = 1 + static_cast<int>(gen() % 3);
    const int n = r + k_out + static_cast<int>(gen() % (13 - r - k_out));
    const PointSet ps = testing::random_points(gen, n, d);
    RGatherParams params;
    params.r = r;
    params.outliers = k_out;
    params.seed = 9100 + static_cast<std::uint64_t>(i);
    const Clustering sol = rgather_outliers(ps, params);
    const ValidationReport rep = validate(ps, sol, params);
    const double opt = brute_force_opt_radius_outliers(ps, r, k_out);
    const bool sized = sol.clusters.empty() ? n <= k_out : rep.min_cluster_size >= r;
    if (!sized || rep.outlier_count > k_out || !within_factor(rep.max_radius, 8.0, opt)) {
      ++failures;
      continue;
    }
    if (opt > 0.0) worst = std::max(worst, rep.max_radius / opt);
  }
  std::ostringstream os;
  os << "500 instances, " << failures << " failures, worst ratio " << worst << " of 8";
  return {failures == 0, os.str()};
}

// ---------------------------------------------------------------------------
// Criterion 3: pointwise pipeline, every point within 4x of its own r-th
// neighbor distance. The guarantee is vacuous at r=1 (that distance is 0),
// so the sweep draws r >= 2 like the pipeline's own tests.

Outcome pointwise_soundness() {
  std::mt19937 gen(303);
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const int r = 2 + static_cast<int>(gen() % 3);
    const int d = 1 + static_cast<int>(gen() % 3);
    const int n = r + static_cast<int>(gen() % (41 - r));
    const PointSet ps = testing::random_points(gen, n, d);
    RGatherParams params;
    params.r = r;
    params.seed = 9200 + static_cast<std::uint64_t>(i);
    const Clustering sol = rgather_pointwise(ps, params);
    const ValidationReport rep = validate(ps, sol, params);
    if (rep.outlier_count != 0 || rep.min_cluster_size < r) {
      ++failures;
      continue;
    }
    bool bad = false;
    for (const Cluster& c : sol.clusters)
      for (std::int64_t m : c.members) {
        const double own = rho_r(ps, m, r);
        const double got = dist(ps, m, c.center);
        if (!within_factor(got, 4.0, own)) bad = true;
        if (own > 0.0) worst = std::max(worst, got / own);
      }
    if (bad) ++failures;
  }
  std::ostringstream os;
  os << "500 instances, " << failures << " failures, worst ratio " << worst << " of 4";
  return {failures == 0, os.str()};
}

// ---------------------------------------------------------------------------
// Criterion 4: pointwise pipeline as a power-cost approximation, total cost
// within 4^k * 2^(2k+1) * r of the brute-force optimum.

Outcome power_cost_soundness() {
  std::mt19937 gen(404);
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int r = 2 + static_cast<int>(gen() % 2);
    const int k_pow = 1 + i % 2;
    const int d = 1 + static_cast<int>(gen() % 2);
    const int n = r + static_cast<int>(gen() % (11 - r));
    const PointSet ps = testing::random_points(gen, n, d);
    RGatherParams params;
    params.r = r;
    params.power = k_pow;
    params.seed = 9300 + static_cast<std::uint64_t>(i);
    const Clustering sol = rgather_pointwise(ps, params);
    const ValidationReport rep = validate(ps, sol, params);
    const double opt = brute_force_opt_power_cost(ps, r, k_pow);
    const double factor =
        std::pow(4.0, k_pow) * std::pow(2.0, 2 * k_pow + 1) * static_cast<double>(r);
    if (rep.outlier_count != 0 || rep.min_cluster_size < r ||
        !within_factor(rep.total_power_cost, factor, opt)) {
      ++failures;
      continue;
    }
    if (opt > 0.0) worst = std::max(worst, rep.total_power_cost / (factor * opt));
  }
  std::ostringstream os;
  os << "200 instances, " << failures << " failures, worst cost at " << worst
     << " of its bound";
  return {failures == 0, os.str()};
}

// ---------------------------------------------------------------------------
// Criterion 5: graph primitives against BFS ground truth.

NeighborGraph random_graph(std::mt19937& gen, int max_n) {
  const int n = 1 + static_cast<int>(gen() % max_n);
  std::vector<std::int64_t> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = 2 * i + 1;  // ids deliberately differ from indices
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double p = 0.25 * u(gen);
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (u(gen) < p) edges.emplace_back(ids[i], ids[j]);
  return testing::make_graph(std::move(ids), edges);
}

// Hop distance between every vertex pair, -1 when unreachable.
std::vector<std::vector<int>> all_hops(const NeighborGraph& g) {
  std::vector<std::vector<int>> hops(g.size());
  for (int s = 0; s < g.size(); ++s) {
    std::vector<int>& d = hops[s];
    d.assign(g.size(), -1);
    d[s] = 0;
    std::deque<int> q{s};
    while (!q.empty()) {
      const int v = q.front();
      q.pop_front();
      for (int w : g.adj[v])
        if (d[w] < 0) {
          d[w] = d[v] + 1;
          q.push_back(w);
        }
    }
  }
  return hops;
}

std::vector<int> to_indices(const NeighborGraph& g, const std::vector<std::int64_t>& s) {
  std::map<std::int64_t, int> pos;
  for (int i = 0; i < g.size(); ++i) pos[g.ids[i]] = i;
  std::vector<int> out;
  for (std::int64_t id : s) out.push_back(pos.at(id));
  return out;
}

bool khop_independent(const NeighborGraph& g, const std::vector<std::vector<int>>& hops,
                      const std::vector<std::int64_t>& s, int k) {
  const std::vector<int> idx = to_indices(g, s);
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const int h = hops[idx[a]][idx[b]];
      if (h >= 0 && h <= k) return false;
    }
  return true;
}

bool khop_covered(const NeighborGraph& g, const std::vector<std::vector<int>>& hops,
                  const std::vector<std::int64_t>& vset, const std::vector<std::int64_t>& s,
                  int radius) {
  const std::vector<int> sidx = to_indices(g, s);
  for (int v : to_indices(g, vset)) {
    bool hit = false;
    for (int c : sidx) {
      const int h = hops[v][c];
      if (h >= 0 && h <= radius) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

bool is_subset(const std::vector<std::int64_t>& s, const std::vector<std::int64_t>& super) {
  const std::set<std::int64_t> allowed(super.begin(), super.end());
  for (std::int64_t id : s)
    if (allowed.count(id) == 0) return false;
  return true;
}

Outcome primitive_soundness() {
  std::mt19937 gen(505);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  int explore_bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const NeighborGraph g = random_graph(gen, 60);
    const auto hops = all_hops(g);
    std::vector<std::int64_t> s;
    for (std::int64_t id : g.ids)
      if (u(gen) < 0.4) s.push_back(id);
    std::shuffle(s.begin(), s.end(), gen);
    const int k = static_cast<int>(gen() % 5);
    const std::int64_t j = static_cast<std::int64_t>(gen() % 6);
    const ExplorationResult got = truncated_explore(g, s, k, j);
    const std::set<std::int64_t> members(s.begin(), s.end());
    for (int v = 0; v < g.size(); ++v) {
      std::vector<std::int64_t> want;
      for (int w = 0; w < g.size(); ++w)
        if (hops[v][w] >= 0 && hops[v][w] <= k && members.count(g.ids[w]) != 0)
          want.push_back(g.ids[w]);
      std::sort(want.begin(), want.end());
      const bool flag = static_cast<std::int64_t>(want.size()) > j;
      if (static_cast<std::int64_t>(want.size()) > j + 1)
        want.resize(static_cast<std::size_t>(j + 1));
      if (got.lists[v] != want || got.truncated[v] != flag) {
        ++explore_bad;
        break;
      }
    }
  }

  int mis_bad = 0;
  for (int t = 0; t < 200; ++t) {
    const NeighborGraph g = random_graph(gen, 100);
    const auto hops = all_hops(g);
    std::vector<std::int64_t> vset;
    for (std::int64_t id : g.ids)
      if (u(gen) < 0.7) vset.push_back(id);
    const int k = 1 + static_cast<int>(gen() % 3);
    const std::vector<std::int64_t> s = sparsified_mis_power(g, vset, k, 5000 + t);
    if (!is_subset(s, vset) || !khop_independent(g, hops, s, k) ||
        !khop_covered(g, hops, vset, s, k))
      ++mis_bad;
  }

  int ruling_bad = 0;
  for (int t = 0; t < 200; ++t) {
    const NeighborGraph g = random_graph(gen, 100);
    const auto hops = all_hops(g);
    std::vector<std::int64_t> vset;
    for (std::int64_t id : g.ids)
      if (u(gen) < 0.7) vset.push_back(id);
    const int k = 1 + static_cast<int>(gen() % 3);
    const int beta = 1 + static_cast<int>(gen() % 3);
    const std::vector<std::int64_t> s = ruling_set_power(g, vset, k, beta, 6000 + t);
    if (!is_subset(s, vset) || !khop_independent(g, hops, s, k) ||
        !khop_covered(g, hops, vset, s, beta * k))
      ++ruling_bad;
  }

  int dominating_uncovered = 0;
  int degree_bad = 0;
  for (int t = 0; t < 200; ++t) {
    const NeighborGraph g = random_graph(gen, 100);
    const auto hops = all_hops(g);
    std::vector<std::int64_t> vset;
    for (std::int64_t id : g.ids)
      if (u(gen) < 0.7) vset.push_back(id);
    const int k = 1 + static_cast<int>(gen() % 3);
    const double f = 2.0;
    const DominatingResult dom = dominating_set_power(g, vset, k, f, 7000 + t);
    if (!is_subset(dom.centers, vset) || !khop_covered(g, hops, vset, dom.centers, k)) {
      ++dominating_uncovered;
      continue;
    }
    // Center crowding: no vertex may see more than 10*f*ln(n) centers within
    // k hops. On a single vertex the log term vanishes, so one center in the
    // ball is the floor.
    const double bound = std::max(1.0, 10.0 * f * std::log(static_cast<double>(g.size())));
    const std::vector<int> cidx = to_indices(g, dom.centers);
    bool crowded = false;
    for (int v : to_indices(g, vset)) {
      int seen = 0;
      for (int c : cidx) {
        const int h = hops[v][c];
        if (h >= 0 && h <= k) ++seen;
      }
      if (static_cast<double>(seen) > bound) crowded = true;
    }
    if (crowded) ++degree_bad;
  }

  const bool ok = explore_bad == 0 && mis_bad <= 4 && ruling_bad <= 4 &&
                  dominating_uncovered == 0 && degree_bad <= 4;
  std::ostringstream os;
  os << "explore " << (1000 - explore_bad) << "/1000, mis failures " << mis_bad
     << "/200, ruling failures " << ruling_bad << "/200, dominating uncovered "
     << dominating_uncovered << ", crowded runs " << degree_bad << " (budget 4 each)";
  return {ok, os.str()};
}

// ---------------------------------------------------------------------------
// Criterion 6: hashed graphs meet the neighbor-graph contract on most seeds,
// and close pairs collide detectably more often than far pairs.

Outcome lsh_soundness() {
  std::mt19937 gen(606);
  const PointSet ps = testing::random_points(gen, 200, 2);
  const int r = 3;
  const double c = 2.0;
  const double scale = rho_hat(ps, r);
  const double inf = std::numeric_limits<double>::infinity();

  int ok_explicit = 0;
  int ok_sparse = 0;
  double worst_stretch = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const NeighborGraph g = build_lsh_explicit(ps, scale, r, c, seed);
    const Def3Report rep = verify_definition3(ps, g, scale, r, inf);
    if (rep.ok) {
      ++ok_explicit;
      worst_stretch = std::max(worst_stretch, rep.max_edge_ratio);
    }
    const NeighborGraph sq = square(build_lsh_sparse(ps, scale, c, seed));
    if (verify_definition3(ps, sq, scale, r, inf).ok) ++ok_sparse;
  }

  const int trials = 10000;
  const int t = 4;
  const double w = std::cbrt(4.0);
  const double p_close = estimate_collision_rate(t, w, kLshShiftCap, 1.0, trials);
  const double p_far = estimate_collision_rate(t, w, kLshShiftCap, kLshFarFactor * c, trials);
  const double sigma = std::sqrt(p_close * (1.0 - p_close) / trials) +
                       std::sqrt(p_far * (1.0 - p_far) / trials);
  const bool gap = p_close - p_far > 3.0 * sigma;

  const bool ok = ok_explicit >= 45 && ok_sparse >= 45 && gap;
  std::ostringstream os;
  os << "explicit " << ok_explicit << "/50, sparse-squared " << ok_sparse
     << "/50 (need 45), worst stretch " << worst_stretch << ", collision gap "
     << (p_close - p_far) << " vs 3-sigma " << 3.0 * sigma;
  return {ok, os.str()};
}

// ---------------------------------------------------------------------------
// Criterion 7: navigating net invariants under churn, and nearest-neighbor
// answers within the advertised (1+eps) of brute force.

Outcome net_soundness() {
  int trace_failures = 0;
  for (int trace = 0; trace < 50; ++trace) {
    std::mt19937 gen(7000 + trace);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_real_distribution<double> coord(0.0, 50.0);
    EuclideanStore store(2);
    NavigatingNet net(store.fn());
    std::vector<std::int64_t> live;
    std::int64_t next_id = 0;
    std::int64_t probe_id = 1000000;
    bool bad = false;
    for (int op = 0; op < 200 && !bad; ++op) {
      const double roll = u(gen);
      if (live.empty() || (roll < 0.55 && live.size() < 30)) {
        const std::int64_t id = next_id++;
        store.insert(id, {coord(gen), coord(gen)});
        net.insert(id);
        live.push_back(id);
      } else if (roll < 0.80) {
        const std::size_t at = gen() % live.size();
        const std::int64_t id = live[at];
        net.erase(id);
        store.erase(id);
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(at));
      } else {
        const std::int64_t probe = probe_id++;
        store.insert(probe, {coord(gen), coord(gen)});
        const std::int64_t hit = net.nearest(probe, 0.5);
        double best = std::numeric_limits<double>::infinity();
        for (std::int64_t id : live) best = std::min(best, store.distance(probe, id));
        if (store.distance(probe, hit) > 1.5 * best * (1.0 + kRelSlack)) bad = true;
        store.erase(probe);
      }
      if (!net.invariant_violations().empty()) bad = true;
    }
    if (bad) ++trace_failures;
  }

  int ann_failures = 0;
  {
    std::mt19937 gen(717);
    std::uniform_real_distribution<double> coord(0.0, 50.0);
    EuclideanStore store(3);
    NavigatingNet net(store.fn());
    for (std::int64_t id = 0; id < 300; ++id) {
      store.insert(id, {coord(gen), coord(gen), coord(gen)});
      net.insert(id);
    }
    const double eps_sweep[3] = {0.05, 0.5, 1.0};
    for (int q = 0; q < 1000; ++q) {
      const double eps = eps_sweep[q % 3];
      const std::int64_t probe = 1000000 + q;
      store.insert(probe, {coord(gen), coord(gen), coord(gen)});
      const std::int64_t hit = net.nearest(probe, eps);
      double best = std::numeric_limits<double>::infinity();
      for (std::int64_t id = 0; id < 300; ++id)
        best = std::min(best, store.distance(probe, id));
      if (!within_factor(store.distance(probe, hit), 1.0 + eps, best)) ++ann_failures;
      store.erase(probe);
    }
  }

  std::ostringstream os;
  os << trace_failures << "/50 churn traces failed, " << ann_failures
     << "/1000 queries over (1+eps)";
  return {trace_failures == 0 && ann_failures == 0, os.str()};
}

// ---------------------------------------------------------------------------
// Criterion 8: dynamic clustering stays sound against the brute-force
// optimum of whatever is live at each query.

PointSet live_point_set(const EuclideanStore& store, std::vector<std::int64_t> live) {
  std::sort(live.begin(), live.end());
  std::vector<double> coords;
  for (std::int64_t id : live) {
    const std::vector<double>& p = store.point(id);
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return PointSet(store.dim(), std::move(live), std::move(coords));
}

// Max member-to-center distance measured through the store, and the size of
// the smallest cluster.
std::pair<double, std::size_t> audit_clusters(const EuclideanStore& store,
                                              const Clustering& sol) {
  double radius = 0.0;
  std::size_t min_size = std::numeric_limits<std::size_t>::max();
  for (const Cluster& c : sol.clusters) {
    min_size = std::min(min_size, c.members.size());
    for (std::int64_t m : c.members)
      radius = std::max(radius, store.distance(c.center, m));
  }
  return {radius, min_size};
}

Outcome dynamic_soundness() {
  const auto start = Clock::now();
  int failures = 0;
  int checked_queries = 0;

  for (int trace = 0; trace < 50; ++trace) {
    std::mt19937 gen(8000 + trace);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_real_distribution<double> coord(0.0, 60.0);
    const int r = 2 + trace % 2;
    const double c = trace % 3 == 0 ? 1.0 : 2.0;
    EuclideanStore store(2);
    DynamicRGather dyn(store.fn(), r, c);
    std::vector<std::int64_t> live;
    std::int64_t next_id = 0;
    bool bad = false;
    for (int op = 0; op < 300 && !bad; ++op) {
      const double roll = u(gen);
      if (live.empty() || (roll < 0.5 && live.size() < 12)) {
        const std::int64_t id = next_id++;
        store.insert(id, {coord(gen), coord(gen)});
        dyn.insert(id);
        live.push_back(id);
      } else if (roll < 0.75) {
        const std::size_t at = gen() % live.size();
        dyn.erase(live[at]);
        store.erase(live[at]);
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(at));
      } else {
        std::optional<std::pair<Clustering, double>> res;
        try {
          res = dyn.query_all();
        } catch (const Infeasible&) {
          if (static_cast<int>(live.size()) >= r) bad = true;  // refusing a feasible query
          continue;
        }
        const PointSet ps = live_point_set(store, live);
        const double opt = brute_force_opt_radius(ps, r);
        const auto [radius, min_size] = audit_clusters(store, res->first);
        ValidationReport rep;
        try {
          RGatherParams params;
          params.r = r;
          rep = validate(ps, res->first, params);
        } catch (const InvalidInput&) {
          bad = true;
          continue;
        }
        if (rep.outlier_count != 0 || min_size < static_cast<std::size_t>(r) ||
            !within_factor(radius, 16.0 * c * c, opt))
          bad = true;
        ++checked_queries;
      }
    }
    if (bad) ++failures;
  }

  for (int trace = 0; trace < 50; ++trace) {
    std::mt19937 gen(8500 + trace);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_real_distribution<double> coord(0.0, 60.0);
    const int r = 2 + trace % 2;
    const double c = trace % 3 == 0 ? 1.0 : 2.0;
    EuclideanStore store(2);
    IncrementalRGather inc(store.fn(), r, c);
    std::vector<std::int64_t> live;
    std::int64_t next_id = 0;
    bool bad = false;
    for (int op = 0; op < 300 && !bad; ++op) {
      const double roll = u(gen);
      if (live.empty() || (roll < 0.3 && live.size() < 12)) {
        const std::int64_t id = next_id++;
        store.insert(id, {coord(gen), coord(gen)});
        inc.insert(id);
        live.push_back(id);
      } else if (roll < 0.6) {
        const std::int64_t id = live[gen() % live.size()];
        try {
          inc.query(id);
        } catch (const Infeasible&) {
          if (static_cast<int>(live.size()) >= r) bad = true;
        }
      } else {
        std::optional<std::pair<Clustering, double>> res;
        try {
          res = inc.query_all();
        } catch (const Infeasible&) {
          if (static_cast<int>(live.size()) >= r) bad = true;
          continue;
        }
        const PointSet ps = live_point_set(store, live);
        const double opt = brute_force_opt_radius(ps, r);
        const auto [radius, min_size] = audit_clusters(store, res->first);
        ValidationReport rep;
        try {
          RGatherParams params;
          params.r = r;
          rep = validate(ps, res->first, params);
        } catch (const InvalidInput&) {
          bad = true;
          continue;
        }
        if (rep.outlier_count != 0 || min_size < static_cast<std::size_t>(r) ||
            !within_factor(radius, 8.0 * c * c * c, opt))
          bad = true;
        ++checked_queries;
      }
    }
    if (bad) ++failures;
  }

  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << "100 traces, " << failures << " failures, " << checked_queries
     << " audited queries, " << elapsed << "s of 120";
  return {failures == 0 && elapsed < 120.0, os.str()};
}

// ---------------------------------------------------------------------------
// Criterion 9: every randomized CLI command is byte-identical when rerun
// with the same seed.

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome cli_determinism() {
  const char* cli = std::getenv("RGATHER_CLI");
  if (cli == nullptr) return {false, "RGATHER_CLI must point at the binary"};
  std::string dir = "/tmp/rgather_accept_XXXXXX";
  if (mkdtemp(dir.data()) == nullptr) return {false, "mkdtemp failed"};

  auto run = [&](const std::string& args, const std::string& out_name) -> int {
    const std::string cmd = "'" + std::string(cli) + "' " + args + " >" + dir + "/" + out_name +
                            " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };

  // Two fixture point files, themselves produced by the (seeded) generator.
  if (run("gen --kind gaussian-blobs --n 50 --d 2 --blobs 3 --seed 11", "a.csv") != 0 ||
      run("gen --kind gaussian-blobs --n 80 --d 2 --blobs 4 --seed 13", "b.csv") != 0)
    return {false, "fixture generation failed"};
  const std::string a = dir + "/a.csv";
  const std::string b = dir + "/b.csv";

  const std::string commands[] = {
      "gen --kind gaussian-blobs --n 100 --d 2 --blobs 5 --seed 7",
      "gen --kind gaussian-blobs --n 60 --d 3 --blobs 4 --seed 9",
      "gen --kind gaussian-blobs --n 50 --d 1 --blobs 2 --seed 3",
      "cluster --input " + a + " --r 2 --mode lsh --seed 5 --report-cost",
      "cluster --input " + a + " --r 2 --mode lsh-sparse --seed 6",
      "cluster --input " + b + " --r 3 --mode lsh --seed 12",
      "cluster --input " + b + " --r 2 --mode exact --seed 2 --report-cost",
      "cluster-outliers --input " + a + " --r 2 --outliers 2 --mode lsh --seed 8",
      "cluster-outliers --input " + b + " --r 3 --outliers 1 --mode lsh-sparse --seed 21",
      "cluster-pointwise --input " + b + " --r 2 --mode lsh --seed 4",
  };

  int mismatches = 0;
  int bad_exits = 0;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    const std::string first = "o" + std::to_string(i) + "_1";
    const std::string second = "o" + std::to_string(i) + "_2";
    const int c1 = run(commands[i], first);
    const int c2 = run(commands[i], second);
    if (c1 != 0 || c2 != 0) ++bad_exits;
    const std::string out1 = read_file(dir + "/" + first);
    if (out1.empty() || out1 != read_file(dir + "/" + second)) ++mismatches;
  }

  std::ostringstream os;
  os << "10 commands rerun, " << mismatches << " output mismatches, " << bad_exits
     << " nonzero exits";
  return {mismatches == 0 && bad_exits == 0, os.str()};
}

// ---------------------------------------------------------------------------
// Criterion 10: cost accounting matches the primitives' contracts and is
// itself deterministic.

bool reports_equal(const CostReport& a, const CostReport& b) {
  if (a.rounds != b.rounds || a.peak_space_words != b.peak_space_words ||
      a.violations != b.violations)
    return false;
  if (a.by_primitive.size() != b.by_primitive.size()) return false;
  for (const auto& [name, tot] : a.by_primitive) {
    const auto it = b.by_primitive.find(name);
    if (it == b.by_primitive.end() || it->second.count != tot.count ||
        it->second.rounds != tot.rounds || it->second.space_words != tot.space_words)
      return false;
  }
  return true;
}

Outcome cost_accounting() {
  std::mt19937 gen(1010);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  int explore_bad = 0;
  for (int t = 0; t < 100; ++t) {
    const NeighborGraph g = random_graph(gen, 40);
    std::vector<std::int64_t> s;
    for (std::int64_t id : g.ids)
      if (u(gen) < 0.5) s.push_back(id);
    const int k = static_cast<int>(gen() % 4);
    const std::int64_t j = static_cast<std::int64_t>(gen() % 5);
    CostLog log;
    truncated_explore(g, s, k, j, &log);
    int seen = 0;
    for (const Charge& ch : log.snapshot()) {
      if (ch.primitive != Primitive::explore) continue;
      ++seen;
      if (ch.rounds != k ||
          ch.space_words > static_cast<std::int64_t>(g.edge_count()) * (j + 1))
        ++explore_bad;
    }
    if (seen != 1) ++explore_bad;
  }

  const bool sort_one_round = account({Primitive::sort, "probe", 12345}).rounds == 1;

  auto instrumented_report = [] {
    std::mt19937 g2(41);
    const PointSet ps = testing::random_points(g2, 40, 2);
    RGatherParams params;
    params.r = 3;
    params.seed = 77;
    params.mode = GraphMode::lsh;
    CostLog log;
    rgather::rgather(ps, params, &log);
    return summarize(log, make_cost_model(ps.size()));
  };
  const CostReport first = instrumented_report();
  const CostReport second = instrumented_report();
  const bool stable = reports_equal(first, second);

  const bool ok = explore_bad == 0 && sort_one_round && stable;
  std::ostringstream os;
  os << "explore charges " << (100 - explore_bad) << "/100 exact, sort rounds "
     << (sort_one_round ? "1" : "wrong") << ", rerun report "
     << (stable ? "identical" : "diverged") << " (" << first.rounds << " rounds)";
  return {ok, os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"plain radius within 8x of optimum", &plain_soundness},
      {"outlier radius within 8x, budget kept", &outlier_soundness},
      {"pointwise distance within 4x per point", &pointwise_soundness},
      {"power cost within its factor of optimum", &power_cost_soundness},
      {"graph primitives match BFS ground truth", &primitive_soundness},
      {"hashed graphs meet the neighbor contract", &lsh_soundness},
      {"navigating net invariants and ANN bound", &net_soundness},
      {"dynamic clustering sound at every query", &dynamic_soundness},
      {"seeded CLI commands rerun byte-identical", &cli_determinism},
      {"cost charges match primitive contracts", &cost_accounting},
  };

  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s  %2d  %-42s  %s\n", out.ok ? "PASS" : "FAIL", index, c.name,
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.ok) ++failures;
  }
  return failures;
}

#include "rgather/power.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>

#include "rgather/error.hpp"
#include "rgather/prng.hpp"

namespace rgather {

namespace {

constexpr double kDegreeSampleConstant = 4.0;
constexpr double kDominatingSampleConstant = 2.0;
constexpr double kMisIterationConstant = 30.0;
// A vertex stalls when its summed occupancy estimates reach
// kMisStallBase * 2^(4 * phase_length) * copies at a phase boundary.
constexpr double kMisStallBase = 100.0;

std::unordered_map<std::int64_t, int> index_map(const NeighborGraph& g) {
  std::unordered_map<std::int64_t, int> pos;
  pos.reserve(g.ids.size());
  for (int i = 0; i < g.size(); ++i) pos.emplace(g.ids[i], i);
  return pos;
}

// Resolves an id set to graph indices, rejecting strangers and duplicates.
std::vector<int> resolve_set(const std::unordered_map<std::int64_t, int>& pos,
                             const std::vector<std::int64_t>& ids, const char* who) {
  std::vector<int> out;
  out.reserve(ids.size());
  for (std::int64_t id : ids) {
    const auto it = pos.find(id);
    if (it == pos.end())
      throw InvalidInput(std::string(who) + ": vertex " + std::to_string(id) + " is not in the graph");
    out.push_back(it->second);
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw InvalidInput(std::string(who) + ": duplicate vertex id");
  return out;
}

// Reusable depth-limited search; `stamp` persists across calls so repeated
// sweeps over the same graph avoid O(n) clears.
struct HopScratch {
  std::vector<int> stamp;
  std::vector<int> frontier, next;
  int tag = 0;

  explicit HopScratch(int n) : stamp(n, 0) {}

  // Appends every vertex within k hops of `start` (itself included) to `out`.
  template <typename Fn>
  void ball(const NeighborGraph& g, int start, int k, Fn&& visit) {
    ++tag;
    stamp[start] = tag;
    visit(start);
    frontier.assign(1, start);
    for (int depth = 0; depth < k && !frontier.empty(); ++depth) {
      next.clear();
      for (int u : frontier)
        for (int v : g.adj[u])
          if (stamp[v] != tag) {
            stamp[v] = tag;
            visit(v);
            next.push_back(v);
          }
      frontier.swap(next);
    }
  }
};

// Per-vertex smallest-id source within k hops, with the hop count; -1 hops
// marks unreachable. Sources are given as graph indices.
struct Propagation {
  std::vector<int> hops;
  std::vector<int> owner;  // graph index of the winning source
};

Propagation propagate_khop(const NeighborGraph& g, const std::vector<int>& sources, int k) {
  Propagation out;
  out.hops.assign(g.size(), -1);
  out.owner.assign(g.size(), -1);
  std::vector<int> frontier;
  for (int s : sources) {
    out.hops[s] = 0;
    out.owner[s] = s;
    frontier.push_back(s);
  }
  std::vector<int> next;
  for (int depth = 0; depth < k && !frontier.empty(); ++depth) {
    next.clear();
    for (int u : frontier) {
      for (int v : g.adj[u]) {
        if (out.hops[v] == -1) {
          out.hops[v] = depth + 1;
          out.owner[v] = out.owner[u];
          next.push_back(v);
        } else if (out.hops[v] == depth + 1 && g.ids[out.owner[u]] < g.ids[out.owner[v]]) {
          out.owner[v] = out.owner[u];
        }
      }
    }
    frontier.swap(next);
  }
  return out;
}

void require_hops(int k, const char* who) {
  if (k < 1) throw InvalidInput(std::string(who) + ": hop count must be at least 1");
}

}  // namespace

ExplorationResult truncated_explore(const NeighborGraph& g, const std::vector<std::int64_t>& s,
                                    int k, std::int64_t j, CostLog* log) {
  require_hops(k, "truncated_explore");
  if (j < 0) throw InvalidInput("truncated_explore: list cap must be nonnegative");
  const auto pos = index_map(g);
  const int n = g.size();
  std::vector<std::vector<std::int64_t>> cur(n), nxt(n);
  for (int idx : resolve_set(pos, s, "truncated_explore")) cur[idx] = {g.ids[idx]};

  const std::size_t cap = static_cast<std::size_t>(j) + 1;
  std::vector<std::int64_t> merged;
  for (int round = 0; round < k; ++round) {
    for (int v = 0; v < n; ++v) {
      merged = cur[v];
      for (int u : g.adj[v]) merged.insert(merged.end(), cur[u].begin(), cur[u].end());
      std::sort(merged.begin(), merged.end());
      merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
      if (merged.size() > cap) merged.resize(cap);
      nxt[v] = merged;
    }
    cur.swap(nxt);
  }

  ExplorationResult res;
  res.truncated.resize(n);
  // A full list certifies that at least j+1 members are in reach.
  for (int v = 0; v < n; ++v) res.truncated[v] = cur[v].size() == cap;
  res.lists = std::move(cur);
  if (log)
    log->add(account({Primitive::explore, "power_explore",
                      static_cast<std::int64_t>(g.edge_count()), k, j}));
  return res;
}

std::vector<std::optional<HopHit>> nearest_in_khop(const NeighborGraph& g,
                                                   const std::vector<std::int64_t>& s, int k,
                                                   CostLog* log) {
  require_hops(k, "nearest_in_khop");
  const auto pos = index_map(g);
  const auto sources = resolve_set(pos, s, "nearest_in_khop");
  const auto prop = propagate_khop(g, sources, k);
  std::vector<std::optional<HopHit>> out(g.size());
  for (int v = 0; v < g.size(); ++v)
    if (prop.hops[v] >= 0) out[v] = HopHit{g.ids[prop.owner[v]], prop.hops[v]};
  if (log)
    log->add(account({Primitive::explore, "khop_nearest",
                      static_cast<std::int64_t>(g.edge_count()), k, 1}));
  return out;
}

std::vector<std::int64_t> high_degree_vertices(const NeighborGraph& g, int r, int k, double eta,
                                               std::uint64_t seed, CostLog* log) {
  require_hops(k, "high_degree_vertices");
  if (r < 1) throw InvalidInput("high_degree_vertices: r must be at least 1");
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidInput("high_degree_vertices: eta must lie in (0, 1)");
  const int n = g.size();
  if (n == 0) return {};

  const double log_n = std::log(static_cast<double>(std::max(n, 2)));
  const double p_samp = std::min(1.0, kDegreeSampleConstant * log_n / (r * eta * eta));
  std::vector<std::int64_t> sampled;
  for (int v = 0; v < n; ++v) {
    const auto id = static_cast<std::uint64_t>(g.ids[v]);
    if (rng_unit(seed, Stream::degree_sample, id) < p_samp) sampled.push_back(g.ids[v]);
  }
  if (log) log->add(account({Primitive::map, "degree_sample", n}));

  // Ball counts are compared against the fractional threshold; the integer
  // cap handed to the exploration is its ceiling, which preserves every
  // >= threshold decision.
  const double threshold = (1.0 - eta / 10.0) * p_samp * r;
  const auto cap = static_cast<std::int64_t>(std::ceil(threshold));
  const auto res = truncated_explore(g, sampled, k, cap, log);

  std::vector<std::int64_t> out;
  for (int v = 0; v < n; ++v)
    if (static_cast<double>(res.lists[v].size()) >= threshold) out.push_back(g.ids[v]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::int64_t> greedy_mis_power(const NeighborGraph& g,
                                           const std::vector<std::int64_t>& vset, int k,
                                           const std::vector<std::int64_t>& order) {
  require_hops(k, "greedy_mis_power");
  const auto pos = index_map(g);
  const auto members = resolve_set(pos, vset, "greedy_mis_power");
  auto scan = resolve_set(pos, order, "greedy_mis_power");
  if (scan != members)
    throw InvalidInput("greedy_mis_power: order must be a permutation of the vertex subset");

  std::vector<bool> blocked(g.size(), false);
  HopScratch scratch(g.size());
  std::vector<std::int64_t> chosen;
  for (std::int64_t id : order) {
    const int v = pos.at(id);
    if (blocked[v]) continue;
    chosen.push_back(id);
    scratch.ball(g, v, k, [&](int u) { blocked[u] = true; });
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<std::int64_t> sparsified_mis_power(const NeighborGraph& g,
                                               const std::vector<std::int64_t>& vset, int k,
                                               std::uint64_t seed, const MisParams& params,
                                               CostLog* log, const MisObserver& observer) {
  require_hops(k, "sparsified_mis_power");
  if (params.phase_length < 1)
    throw InvalidInput("sparsified_mis_power: phase length must be at least 1");
  if (params.copies < 0 || params.iterations < 0)
    throw InvalidInput("sparsified_mis_power: negative parameter");
  const auto pos = index_map(g);
  const auto member_idx = resolve_set(pos, vset, "sparsified_mis_power");
  const int count = static_cast<int>(member_idx.size());
  if (count == 0) return {};

  // Sort members by id so positions, tie-breaks and the join order all speak
  // the same language.
  std::vector<int> by_id(member_idx);
  std::sort(by_id.begin(), by_id.end(),
            [&](int a, int b) { return g.ids[a] < g.ids[b]; });
  std::vector<int> mpos(g.size(), -1);
  for (int i = 0; i < count; ++i) mpos[by_id[i]] = i;

  // Closed k-hop neighborhoods restricted to the working subset, as member
  // positions. Computed once; the iteration loop only filters by liveness.
  std::vector<std::vector<int>> nbr(count);
  HopScratch scratch(g.size());
  int delta_k = 0;
  for (int i = 0; i < count; ++i) {
    scratch.ball(g, by_id[i], k, [&](int u) {
      if (mpos[u] >= 0) nbr[i].push_back(mpos[u]);
    });
    std::sort(nbr[i].begin(), nbr[i].end());
    delta_k = std::max(delta_k, static_cast<int>(nbr[i].size()));
  }

  const int n = g.size();
  const int copies = params.copies > 0
                         ? params.copies
                         : std::max(8, static_cast<int>(std::ceil(
                                           2.0 * std::log(static_cast<double>(std::max(n, 2))))));
  const int total = params.iterations > 0
                        ? params.iterations
                        : static_cast<int>(std::ceil(kMisIterationConstant * std::log(delta_k + 2.0)));
  const double stall_threshold =
      kMisStallBase * std::ldexp(1.0, 4 * params.phase_length) * copies;

  MisState st;
  st.members.resize(count);
  for (int i = 0; i < count; ++i) st.members[i] = g.ids[by_id[i]];
  st.prob_exponent.assign(count, 1);
  st.alive.assign(count, true);
  st.stalled.assign(count, false);
  st.total_iterations = total;
  st.phase_length = params.phase_length;
  st.copies = copies;
  st.seed = seed;

  std::vector<std::uint8_t> occ(static_cast<std::size_t>(count) * copies);
  std::vector<int> tau(copies), median(count);
  std::vector<bool> marked(count), joined_now(count), in_set(count, false);

  for (int t = 1; t <= total; ++t) {
    const bool phase_start = (t - 1) % params.phase_length == 0;
    const bool phase_end = t % params.phase_length == 0;

    // Occupancy draws use the pre-update probabilities.
    for (int i = 0; i < count; ++i) {
      if (!st.alive[i]) continue;
      const double p_prev = std::ldexp(1.0, -st.prob_exponent[i]);
      const auto id = static_cast<std::uint64_t>(st.members[i]);
      for (int c = 0; c < copies; ++c)
        occ[static_cast<std::size_t>(i) * copies + c] =
            rng_unit(seed, Stream::mis_occupancy, id, static_cast<std::uint64_t>(t - 1),
                     static_cast<std::uint64_t>(c)) < p_prev;
    }

    for (int i = 0; i < count; ++i) {
      if (!st.alive[i]) continue;
      std::fill(tau.begin(), tau.end(), 0);
      for (int u : nbr[i]) {
        if (!st.alive[u]) continue;
        const std::uint8_t* row = &occ[static_cast<std::size_t>(u) * copies];
        for (int c = 0; c < copies; ++c) tau[c] += row[c];
      }
      if (phase_start)
        st.stalled[i] = std::accumulate(tau.begin(), tau.end(), 0.0) >= stall_threshold;
      // Lower median: robust to the even-copies split without averaging.
      std::nth_element(tau.begin(), tau.begin() + (copies - 1) / 2, tau.end());
      median[i] = tau[(copies - 1) / 2];
    }

    for (int i = 0; i < count; ++i) {
      if (!st.alive[i]) continue;
      if (st.stalled[i] || median[i] >= 2)
        st.prob_exponent[i] = std::min(st.prob_exponent[i] + 1, total);
      else
        st.prob_exponent[i] = std::max(st.prob_exponent[i] - 1, 1);
    }

    // Marks read the post-update probability; stalled vertices never mark.
    for (int i = 0; i < count; ++i) {
      marked[i] = st.alive[i] && !st.stalled[i] &&
                  rng_unit(seed, Stream::mis_mark, static_cast<std::uint64_t>(st.members[i]),
                           static_cast<std::uint64_t>(t)) <
                      std::ldexp(1.0, -st.prob_exponent[i]);
    }

    // A vertex joins only when it is the sole marked vertex it can see, so
    // two marked vertices within k hops suppress each other.
    for (int i = 0; i < count; ++i) {
      joined_now[i] = false;
      if (!marked[i]) continue;
      bool sole = true;
      for (int u : nbr[i])
        if (u != i && st.alive[u] && marked[u]) {
          sole = false;
          break;
        }
      joined_now[i] = sole;
    }
    for (int i = 0; i < count; ++i)
      if (joined_now[i]) {
        in_set[i] = true;
        st.independent.push_back(st.members[i]);
      }

    // Non-stalled vertices retire the moment they are dominated; stalled
    // ones wait for the phase boundary.
    for (int i = 0; i < count; ++i) {
      if (!st.alive[i] || st.stalled[i]) continue;
      for (int u : nbr[i])
        if (joined_now[u]) {
          st.alive[i] = false;
          break;
        }
    }
    if (phase_end) {
      for (int i = 0; i < count; ++i) {
        if (st.alive[i] && st.stalled[i]) {
          for (int u : nbr[i])
            if (in_set[u]) {
              st.alive[i] = false;
              break;
            }
        }
        st.stalled[i] = false;
      }
    }

    st.iteration = t;
    if (observer) observer(st);
  }

  // Anything still dominated dies here (covers a phase cut short by the
  // iteration budget); the survivors have no set member within k hops and
  // are finished greedily.
  std::vector<std::int64_t> leftovers;
  for (int i = 0; i < count; ++i) {
    if (!st.alive[i]) continue;
    bool dominated = false;
    for (int u : nbr[i])
      if (in_set[u]) {
        dominated = true;
        break;
      }
    if (!dominated) leftovers.push_back(st.members[i]);
  }

  std::vector<std::int64_t> out = st.independent;
  if (!leftovers.empty()) {
    const auto finish = greedy_mis_power(g, leftovers, k, leftovers);
    out.insert(out.end(), finish.begin(), finish.end());
  }
  std::sort(out.begin(), out.end());

  if (log) {
    const auto words = static_cast<std::int64_t>(
        (n + g.edge_count()) * std::ceil(std::pow(std::max(n, 1), 0.25)));
    log->add(account({Primitive::mis_run, "power_mis", words, k, 0, delta_k, 0.25, n}));
  }
  return out;
}

bool is_independent_khop(const NeighborGraph& g, const std::vector<std::int64_t>& s, int k) {
  require_hops(k, "is_independent_khop");
  const auto pos = index_map(g);
  const auto members = resolve_set(pos, s, "is_independent_khop");
  std::vector<bool> in_s(g.size(), false);
  for (int v : members) in_s[v] = true;
  HopScratch scratch(g.size());
  for (int v : members) {
    bool clash = false;
    scratch.ball(g, v, k, [&](int u) {
      if (u != v && in_s[u]) clash = true;
    });
    if (clash) return false;
  }
  return true;
}

bool is_maximal_khop(const NeighborGraph& g, const std::vector<std::int64_t>& vset,
                     const std::vector<std::int64_t>& s, int k) {
  require_hops(k, "is_maximal_khop");
  const auto pos = index_map(g);
  const auto members = resolve_set(pos, vset, "is_maximal_khop");
  const auto chosen = resolve_set(pos, s, "is_maximal_khop");
  if (!std::includes(members.begin(), members.end(), chosen.begin(), chosen.end())) return false;
  const auto prop = propagate_khop(g, chosen, k);
  for (int v : members)
    if (prop.hops[v] < 0) return false;
  return true;
}

DominatingResult dominating_set_power(const NeighborGraph& g,
                                      const std::vector<std::int64_t>& vset, int k, double f,
                                      std::uint64_t seed, CostLog* log) {
  require_hops(k, "dominating_set_power");
  if (!(f >= 2.0)) throw InvalidInput("dominating_set_power: f must be at least 2");
  const auto pos = index_map(g);
  auto remaining = resolve_set(pos, vset, "dominating_set_power");

  DominatingResult res;
  res.induced.meta = g.meta;
  if (remaining.empty()) return res;

  std::vector<bool> in_vset(g.size(), false);
  for (int v : remaining) in_vset[v] = true;
  HopScratch scratch(g.size());
  int delta_k = 0;
  for (int v : remaining) {
    int ball = 0;
    scratch.ball(g, v, k, [&](int u) { ball += in_vset[u]; });
    delta_k = std::max(delta_k, ball);
  }

  // Smallest t with f^t >= delta_k, by the same repeated product the round
  // loop uses, so the final round's probability provably saturates at 1 and
  // empties the survivor pool.
  int rounds = 1;
  for (double power = f; power < static_cast<double>(delta_k); power *= f) ++rounds;

  const double log_n = std::log(static_cast<double>(std::max(g.size(), 2)));
  std::vector<int> centers_idx;
  double power = f;
  for (int t = 1; t <= rounds && !remaining.empty(); ++t, power *= f) {
    const double prob = std::min(1.0, kDominatingSampleConstant * power * log_n / delta_k);
    std::vector<int> drawn;
    for (int v : remaining) {
      const auto id = static_cast<std::uint64_t>(g.ids[v]);
      if (rng_unit(seed, Stream::dominating_sample, id, static_cast<std::uint64_t>(t)) < prob)
        drawn.push_back(v);
    }
    if (log)
      log->add(account({Primitive::map, "dominating_sample",
                        static_cast<std::int64_t>(remaining.size())}));
    centers_idx.insert(centers_idx.end(), drawn.begin(), drawn.end());
    if (drawn.empty()) continue;
    const auto prop = propagate_khop(g, drawn, k);
    std::vector<int> survivors;
    for (int v : remaining)
      if (prop.hops[v] < 0) survivors.push_back(v);
    remaining.swap(survivors);
    if (log)
      log->add(account({Primitive::explore, "dominating_frontier",
                        static_cast<std::int64_t>(g.edge_count()), k, 1}));
  }

  std::sort(centers_idx.begin(), centers_idx.end(),
            [&](int a, int b) { return g.ids[a] < g.ids[b]; });
  for (int v : centers_idx) res.centers.push_back(g.ids[v]);

  // With the cap at |centers| the exploration lists are exact, giving the
  // full within-k adjacency among centers.
  const auto lists = truncated_explore(g, res.centers, k,
                                       static_cast<std::int64_t>(res.centers.size()), log);
  std::unordered_map<std::int64_t, int> center_pos;
  for (int i = 0; i < static_cast<int>(res.centers.size()); ++i)
    center_pos.emplace(res.centers[i], i);
  res.induced.ids = res.centers;
  res.induced.adj.assign(res.centers.size(), {});
  for (std::size_t i = 0; i < res.centers.size(); ++i) {
    for (std::int64_t id : lists.lists[centers_idx[i]]) {
      if (id == res.centers[i]) continue;
      res.induced.adj[i].push_back(center_pos.at(id));
    }
    std::sort(res.induced.adj[i].begin(), res.induced.adj[i].end());
  }
  if (log)
    log->add(account({Primitive::sort, "induced_adjacency",
                      static_cast<std::int64_t>(res.centers.size()) +
                          2 * static_cast<std::int64_t>(res.induced.edge_count())}));
  return res;
}

std::vector<std::int64_t> ruling_set_power(const NeighborGraph& g,
                                           const std::vector<std::int64_t>& vset, int k, int beta,
                                           std::uint64_t seed, CostLog* log) {
  require_hops(k, "ruling_set_power");
  if (beta < 1) throw InvalidInput("ruling_set_power: beta must be at least 1");
  if (beta == 1) return sparsified_mis_power(g, vset, k, seed, {}, log);
  const auto dom = dominating_set_power(g, vset, k, 2.0, seed, log);
  if (dom.centers.empty()) return {};
  return sparsified_mis_power(dom.induced, dom.centers, 1, seed, {}, log);
}

}  // namespace rgather

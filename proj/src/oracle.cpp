#include "rgather/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace rgather {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_oracle_args(const PointSet& ps, int r) {
  if (ps.size() > kOracleCap) {
    throw InvalidInput("oracle limited to " + std::to_string(kOracleCap) + " points, got " +
                       std::to_string(ps.size()));
  }
  if (r < 1) throw InvalidInput("r must be >= 1, got " + std::to_string(r));
  if (r > ps.size()) {
    throw Infeasible("r = " + std::to_string(r) + " exceeds |P| = " + std::to_string(ps.size()));
  }
}

// Best max-distance of each subset to a center chosen from all of P.
std::vector<double> block_radii_centers_in_set(const PointSet& ps) {
  const int n = ps.size();
  const int full = 1 << n;
  std::vector<double> maxd(static_cast<std::size_t>(n) << n, 0.0);
  for (int c = 0; c < n; ++c) {
    double* row = maxd.data() + (static_cast<std::size_t>(c) << n);
    for (int mask = 1; mask < full; ++mask) {
      const int i = std::countr_zero(static_cast<unsigned>(mask));
      row[mask] = std::max(row[mask & (mask - 1)], dist_at(ps, c, i));
    }
  }
  std::vector<double> best(full, 0.0);
  for (int mask = 1; mask < full; ++mask) {
    double b = kInf;
    for (int c = 0; c < n; ++c) b = std::min(b, maxd[(static_cast<std::size_t>(c) << n) + mask]);
    best[mask] = b;
  }
  return best;
}

// One-dimensional continuous centers: the midpoint of the spanned interval.
std::vector<double> block_radii_continuous_1d(const PointSet& ps) {
  const int n = ps.size();
  const int full = 1 << n;
  std::vector<double> lo(full, kInf), hi(full, -kInf), best(full, 0.0);
  for (int mask = 1; mask < full; ++mask) {
    const int i = std::countr_zero(static_cast<unsigned>(mask));
    const double x = ps.point(i)[0];
    lo[mask] = std::min(lo[mask & (mask - 1)], x);
    hi[mask] = std::max(hi[mask & (mask - 1)], x);
    best[mask] = (hi[mask] - lo[mask]) / 2.0;
  }
  return best;
}

std::vector<double> block_power_costs(const PointSet& ps, int k_pow) {
  const int n = ps.size();
  const int full = 1 << n;
  std::vector<double> sums(static_cast<std::size_t>(n) << n, 0.0);
  for (int c = 0; c < n; ++c) {
    double* row = sums.data() + (static_cast<std::size_t>(c) << n);
    for (int mask = 1; mask < full; ++mask) {
      const int i = std::countr_zero(static_cast<unsigned>(mask));
      row[mask] = row[mask & (mask - 1)] + std::pow(dist_at(ps, c, i), k_pow);
    }
  }
  std::vector<double> best(full, 0.0);
  for (int mask = 1; mask < full; ++mask) {
    double b = kInf;
    for (int c = 0; c < n; ++c) b = std::min(b, sums[(static_cast<std::size_t>(c) << n) + mask]);
    best[mask] = b;
  }
  return best;
}

// Min over partitions of each mask into blocks of size >= r of the combined
// block values; combine is max for radius, + for power cost. Every block of
// a mask is forced to contain the mask's lowest bit, so each partition is
// enumerated exactly once.
template <typename Combine>
std::vector<double> partition_dp(const std::vector<double>& block_value, int n, int r,
                                 Combine combine) {
  const int full = 1 << n;
  std::vector<double> f(full, kInf);
  f[0] = 0.0;
  for (int mask = 1; mask < full; ++mask) {
    const int low = mask & -mask;
    const int rest = mask ^ low;
    double best = kInf;
    for (int s = rest;; s = (s - 1) & rest) {
      const int part = s | low;
      if (std::popcount(static_cast<unsigned>(part)) >= r && f[mask ^ part] < kInf) {
        best = std::min(best, combine(block_value[part], f[mask ^ part]));
      }
      if (s == 0) break;
    }
    f[mask] = best;
  }
  return f;
}

std::vector<double> radius_blocks(const PointSet& ps, bool centers_in_set) {
  if (!centers_in_set && ps.dim() != 1) {
    throw InvalidInput("continuous-center oracle mode requires one dimension");
  }
  return centers_in_set ? block_radii_centers_in_set(ps) : block_radii_continuous_1d(ps);
}

constexpr auto take_max = [](double a, double b) { return std::max(a, b); };

}  // namespace

double brute_force_opt_radius(const PointSet& ps, int r, bool centers_in_set) {
  check_oracle_args(ps, r);
  if (ps.size() == 0) return 0.0;
  const auto blocks = radius_blocks(ps, centers_in_set);
  if (r == 1) return 0.0;
  return partition_dp(blocks, ps.size(), r, take_max).back();
}

double brute_force_opt_radius_outliers(const PointSet& ps, int r, int k, bool centers_in_set) {
  check_oracle_args(ps, r);
  if (k < 0) throw InvalidInput("outlier budget must be >= 0, got " + std::to_string(k));
  const int n = ps.size();
  if (n == 0) return 0.0;
  const auto blocks = radius_blocks(ps, centers_in_set);
  if (r == 1) return 0.0;
  k = std::min(k, n);
  // layer j = best value with at most j points discarded
  std::vector<double> layer = partition_dp(blocks, n, r, take_max);
  const int full = 1 << n;
  for (int j = 1; j <= k; ++j) {
    std::vector<double> next(full, kInf);
    next[0] = 0.0;
    for (int mask = 1; mask < full; ++mask) {
      const int low = mask & -mask;
      const int rest = mask ^ low;
      double best = layer[rest];  // discard the lowest point of the mask
      for (int s = rest;; s = (s - 1) & rest) {
        const int part = s | low;
        if (std::popcount(static_cast<unsigned>(part)) >= r && next[mask ^ part] < kInf) {
          best = std::min(best, std::max(blocks[part], next[mask ^ part]));
        }
        if (s == 0) break;
      }
      next[mask] = best;
    }
    layer = std::move(next);
  }
  return layer.back();
}

double brute_force_opt_power_cost(const PointSet& ps, int r, int k_pow) {
  check_oracle_args(ps, r);
  if (k_pow < 1) throw InvalidInput("cost exponent must be >= 1, got " + std::to_string(k_pow));
  if (ps.size() == 0 || r == 1) return 0.0;
  const auto blocks = block_power_costs(ps, k_pow);
  return partition_dp(blocks, ps.size(), r, std::plus<double>()).back();
}

bool lower_bound_check(const PointSet& ps, int r) {
  const bool continuous = ps.dim() == 1;
  const double opt = brute_force_opt_radius(ps, r, !continuous);
  return 2.0 * opt >= rho_hat(ps, r) * (1.0 - 1e-12);
}

}  // namespace rgather

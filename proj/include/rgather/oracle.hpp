#pragma once

#include "rgather/points.hpp"

namespace rgather {

// The oracles minimize over every partition of P into blocks of size >= r,
// realized as a DP over subsets (3^n transitions), so they are exact and
// independent of any pipeline code path. Exponential by nature, hence the
// hard cap.
inline constexpr int kOracleCap = 12;

/// Exact optimal max-radius over all partitions into blocks of size >= r.
/// centers_in_set: centers range over P (slightly above the true optimum,
/// which allows centers anywhere in space). With the flag off, centers are
/// continuous; that mode is exact only in one dimension and errors otherwise.
double brute_force_opt_radius(const PointSet& ps, int r, bool centers_in_set = true);

/// Same objective with up to k points discarded.
double brute_force_opt_radius_outliers(const PointSet& ps, int r, int k,
                                       bool centers_in_set = true);

/// Exact optimal sum of dist(p, center)^k_pow over all partitions into
/// blocks of size >= r, centers ranging over P.
double brute_force_opt_power_cost(const PointSet& ps, int r, int k_pow);

/// Checks the radius lower bound rho_hat/2 <= optimal radius (continuous
/// centers in one dimension, centers from P otherwise).
bool lower_bound_check(const PointSet& ps, int r);

}  // namespace rgather

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rgather/points.hpp"

namespace rgather {

struct GaussianMap {
  int rows = 0;
  int cols = 0;
  std::vector<double> m;  // row-major

  void apply(std::span<const double> in, std::span<double> out) const;
};

inline constexpr double kJlConstant = 8.0;

/// Projects P to t_jl = ceil(kJlConstant / eps^2 * ln n) dimensions through a
/// Gaussian matrix with entries N(0, 1/t_jl); ids preserved. Pairwise
/// distances are within 1 +- eps with high probability.
PointSet jl_project(const PointSet& ps, double eps, std::uint64_t seed);

struct LshParams {
  int t = 4;          // hashing dimension after projection
  double w = 1.0;     // ball radius; grid spacing is 4w
  int shifts = 64;    // U, capped (full coverage would need superpolynomial U)
  int concat = 1;     // kc, hash functions concatenated per key
  int draws = 1;      // s, independent keys per point
  double p1_hat = 0.5;  // calibrated single-hash collision rate at distance 1
  double p2_hat = 0.1;  // calibrated single-hash collision rate at distance C
};

inline constexpr int kLshShiftCap = 64;
inline constexpr double kLshDrawConstant = 3.0;  // c_s in s = ceil(c_s ln n / p1_hat)

// A pair is "far" at distance >= kLshFarFactor * C (unit scale). p2_hat is
// calibrated here, and the collision-separation checks compare against it.
inline constexpr double kLshFarFactor = 10.0;

/// Desk-scale parameters: t = max(4, round(ln^{4/5} n)), w = t^{1/3},
/// kc = ceil(4 ln n / ln(1/p2_hat)), s = ceil(3 ln n / p1_hat). The collision
/// rates are Monte-Carlo calibrated at distances 1 and C on a fixed internal
/// seed and cached per (t, w, C).
LshParams derive_lsh_params(int n, double approx_c);

/// Monte-Carlo estimate (Laplace-smoothed) of the single-hash collision rate
/// for a pair at the given distance, over fresh function draws. The overload
/// with concat measures the full concatenated key instead.
double estimate_collision_rate(int t, double w, int shifts, double distance, int trials);
double estimate_collision_rate(int t, double w, int shifts, int concat, double distance,
                               int trials);

struct LshFunction {
  int t = 0;
  double w = 1.0;
  int shifts = 1;
  GaussianMap a;              // t x d, entries N(0,1)/sqrt(t)
  std::vector<double> shift;  // shifts x t, each coordinate uniform in [0, 4w)
};

/// Deterministic draw: (seed, draw, component) fully determines the function.
LshFunction make_lsh_function(int t, double w, int shifts, int dim, std::uint64_t seed,
                              std::uint64_t draw, std::uint64_t component);

// One hash evaluation. covered: some shifted grid owns a radius-w ball
// containing the projected point; cell then holds the grid coordinates of
// that ball's center under shift u. Uncovered points fall back to their
// unshifted grid cell so the key stays a concrete, hashable value; the flag
// keeps fallback keys from ever equaling covered ones.
struct BallKey {
  bool covered = false;
  std::uint32_t shift = 0;
  std::vector<std::int64_t> cell;

  bool operator==(const BallKey&) const = default;
};

BallKey lsh_hash(const LshFunction& f, std::span<const double> p);

struct LshKey {
  std::vector<BallKey> parts;

  bool covered() const {
    for (const BallKey& b : parts) {
      if (!b.covered) return false;
    }
    return true;
  }
  bool operator==(const LshKey&) const = default;
};

LshKey lsh_key(const std::vector<LshFunction>& g, std::span<const double> p);

struct LshKeyHash {
  std::size_t operator()(const LshKey& k) const;
};

}  // namespace rgather

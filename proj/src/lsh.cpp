#include "rgather/lsh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "rgather/error.hpp"
#include "rgather/prng.hpp"

namespace rgather {

namespace {

// Calibration uses its own fixed seed so derived parameters depend only on
// (n, C), never on the caller's seed.
constexpr std::uint64_t kCalibrationSeed = 0x5ca1ab1e;
constexpr int kCalibrationTrials = 4000;

constexpr std::uint64_t kMaxConcat = 256;  // component packs into the low counter byte

std::uint64_t pack_draw(std::uint64_t draw, std::uint64_t component) {
  if (component >= kMaxConcat) throw Error("lsh: concatenation index out of range");
  return draw * kMaxConcat + component;
}

// Key of a point already living in the projected t-dimensional space: the
// minimum shift index whose grid owns a radius-w ball containing pp, else the
// unshifted grid cell. Within one shifted grid, only the componentwise-nearest
// grid point can be within w, so one candidate per shift suffices.
BallKey grid_key(int t, double w, int shifts, const double* shift, const double* pp) {
  const double cell_width = 4.0 * w;
  BallKey key;
  key.cell.resize(static_cast<std::size_t>(t));
  for (int u = 0; u < shifts; ++u) {
    const double* v = shift + static_cast<std::size_t>(u) * t;
    double d2 = 0.0;
    for (int i = 0; i < t; ++i) {
      const double c = std::round((pp[i] - v[i]) / cell_width);
      key.cell[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(c);
      const double gap = pp[i] - (v[i] + c * cell_width);
      d2 += gap * gap;
    }
    if (d2 <= w * w) {
      key.covered = true;
      key.shift = static_cast<std::uint32_t>(u);
      return key;
    }
  }
  key.covered = false;
  key.shift = 0;
  for (int i = 0; i < t; ++i) {
    key.cell[static_cast<std::size_t>(i)] =
        static_cast<std::int64_t>(std::floor(pp[i] / cell_width));
  }
  return key;
}

int concat_count(int n, double p2_hat) {
  const double need = 4.0 * std::log(static_cast<double>(n)) / std::log(1.0 / p2_hat);
  return std::max(1, static_cast<int>(std::ceil(need)));
}

}  // namespace

void GaussianMap::apply(std::span<const double> in, std::span<double> out) const {
  if (static_cast<int>(in.size()) != cols || static_cast<int>(out.size()) != rows) {
    throw Error("gaussian map: shape mismatch");
  }
  for (int i = 0; i < rows; ++i) {
    double acc = 0.0;
    const double* row = m.data() + static_cast<std::size_t>(i) * cols;
    for (int j = 0; j < cols; ++j) acc += row[j] * in[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = acc;
  }
}

PointSet jl_project(const PointSet& ps, double eps, std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("jl_project: eps must lie in (0,1)");
  const int n = ps.size();
  const int d = ps.dim();
  const double ln_n = std::log(static_cast<double>(std::max(n, 2)));
  const int t_jl = std::max(1, static_cast<int>(std::ceil(kJlConstant / (eps * eps) * ln_n)));

  GaussianMap q;
  q.rows = t_jl;
  q.cols = d;
  q.m.resize(static_cast<std::size_t>(t_jl) * d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(t_jl));
  for (int i = 0; i < t_jl; ++i) {
    for (int j = 0; j < d; ++j) {
      q.m[static_cast<std::size_t>(i) * d + j] =
          scale * rng_gauss(seed, Stream::jl_projection, static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(j));
    }
  }

  std::vector<double> coords(static_cast<std::size_t>(n) * t_jl);
  for (int i = 0; i < n; ++i) {
    q.apply(ps.point(i), std::span<double>(coords.data() + static_cast<std::size_t>(i) * t_jl,
                                           static_cast<std::size_t>(t_jl)));
  }
  return PointSet(t_jl, ps.ids(), std::move(coords));
}

double estimate_collision_rate(int t, double w, int shifts, double distance, int trials) {
  return estimate_collision_rate(t, w, shifts, 1, distance, trials);
}

double estimate_collision_rate(int t, double w, int shifts, int concat, double distance,
                               int trials) {
  if (t < 1 || !(w > 0.0) || shifts < 1 || concat < 1 || trials < 1 || !(distance >= 0.0)) {
    throw Error("estimate_collision_rate: bad arguments");
  }
  // Pair placement mirrors hashing real data: the base point is uniform
  // relative to the grid (generic data is equidistributed mod the cell width),
  // and the offset has the exact N(0, distance^2/t I) law of a projected
  // difference vector. Anchoring the base at the origin instead would sit it
  // on a cell corner and bias the fallback-cell collision rate far down.
  const double cell_width = 4.0 * w;
  const double offset_scale = distance / std::sqrt(static_cast<double>(t));
  std::vector<double> p(static_cast<std::size_t>(t)), q(static_cast<std::size_t>(t));
  std::vector<double> shift(static_cast<std::size_t>(shifts) * t);
  int hits = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const auto tr = static_cast<std::uint64_t>(trial);
    for (int i = 0; i < t; ++i) {
      const auto ci = static_cast<std::uint64_t>(i);
      p[static_cast<std::size_t>(i)] =
          cell_width * rng_unit(kCalibrationSeed, Stream::lsh_calibration, tr, 0, ci);
      q[static_cast<std::size_t>(i)] =
          p[static_cast<std::size_t>(i)] +
          offset_scale * rng_gauss(kCalibrationSeed, Stream::lsh_calibration, tr, 1, ci);
    }
    bool all_equal = true;
    for (int comp = 0; comp < concat && all_equal; ++comp) {
      for (int u = 0; u < shifts; ++u) {
        for (int i = 0; i < t; ++i) {
          shift[static_cast<std::size_t>(u) * t + i] =
              cell_width * rng_unit(kCalibrationSeed, Stream::lsh_calibration, tr,
                                    2 + static_cast<std::uint64_t>(comp) * shifts + u,
                                    static_cast<std::uint64_t>(i));
        }
      }
      all_equal = grid_key(t, w, shifts, shift.data(), p.data()) ==
                  grid_key(t, w, shifts, shift.data(), q.data());
    }
    if (all_equal) ++hits;
  }
  return (hits + 1.0) / (trials + 2.0);
}

LshParams derive_lsh_params(int n, double approx_c) {
  if (n < 1) throw InvalidInput("derive_lsh_params: need at least one point");
  if (!(approx_c > 1.0)) throw InvalidInput("derive_lsh_params: C must exceed 1");

  static std::mutex cache_mutex;
  static std::map<std::pair<int, double>, LshParams> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find({n, approx_c});
    if (it != cache.end()) return it->second;
  }

  const double ln_n = std::log(static_cast<double>(std::max(n, 2)));
  LshParams params;
  params.t = std::max(4, static_cast<int>(std::llround(std::pow(ln_n, 0.8))));
  params.w = std::cbrt(static_cast<double>(params.t));
  params.shifts = kLshShiftCap;
  params.p2_hat = estimate_collision_rate(params.t, params.w, params.shifts, 1,
                                          kLshFarFactor * approx_c, kCalibrationTrials);
  params.concat = concat_count(n, params.p2_hat);
  params.p1_hat = estimate_collision_rate(params.t, params.w, params.shifts, params.concat,
                                          1.0, kCalibrationTrials);
  params.draws = std::max(
      1, static_cast<int>(std::ceil(kLshDrawConstant * ln_n / params.p1_hat)));

  std::lock_guard<std::mutex> lock(cache_mutex);
  cache.emplace(std::make_pair(n, approx_c), params);
  return params;
}

LshFunction make_lsh_function(int t, double w, int shifts, int dim, std::uint64_t seed,
                              std::uint64_t draw, std::uint64_t component) {
  if (t < 1 || !(w > 0.0) || shifts < 1 || dim < 1) {
    throw Error("make_lsh_function: bad arguments");
  }
  const std::uint64_t tag = pack_draw(draw, component);
  LshFunction f;
  f.t = t;
  f.w = w;
  f.shifts = shifts;
  f.a.rows = t;
  f.a.cols = dim;
  f.a.m.resize(static_cast<std::size_t>(t) * dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(t));
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < dim; ++j) {
      f.a.m[static_cast<std::size_t>(i) * dim + j] =
          scale * rng_gauss(seed, Stream::lsh_projection, tag, static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(j));
    }
  }
  f.shift.resize(static_cast<std::size_t>(shifts) * t);
  for (int u = 0; u < shifts; ++u) {
    for (int i = 0; i < t; ++i) {
      f.shift[static_cast<std::size_t>(u) * t + i] =
          4.0 * w * rng_unit(seed, Stream::lsh_shift, tag, static_cast<std::uint64_t>(u),
                             static_cast<std::uint64_t>(i));
    }
  }
  return f;
}

BallKey lsh_hash(const LshFunction& f, std::span<const double> p) {
  std::vector<double> pp(static_cast<std::size_t>(f.t));
  f.a.apply(p, pp);
  return grid_key(f.t, f.w, f.shifts, f.shift.data(), pp.data());
}

LshKey lsh_key(const std::vector<LshFunction>& g, std::span<const double> p) {
  LshKey key;
  key.parts.reserve(g.size());
  for (const LshFunction& f : g) key.parts.push_back(lsh_hash(f, p));
  return key;
}

std::size_t LshKeyHash::operator()(const LshKey& k) const {
  std::uint64_t h = mix64(k.parts.size());
  for (const BallKey& b : k.parts) {
    h = mix64(h ^ (b.covered ? 0x9e37u : 0x79b9u));
    h = mix64(h ^ b.shift);
    for (std::int64_t c : b.cell) h = mix64(h ^ static_cast<std::uint64_t>(c));
  }
  return static_cast<std::size_t>(h);
}

}  // namespace rgather

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "rgather/error.hpp"
#include "rgather/lsh.hpp"
#include "rgather/points.hpp"

using namespace rgather;

namespace {

std::vector<double> projected(const LshFunction& f, std::span<const double> p) {
  std::vector<double> pp(static_cast<std::size_t>(f.t));
  f.a.apply(p, pp);
  return pp;
}

}  // namespace

TEST_CASE("jl_project rejects eps outside (0,1)") {
  std::mt19937 gen(1);
  const PointSet ps = testing::random_points(gen, 5, 3);
  CHECK_THROWS_AS(jl_project(ps, 0.0, 1), InvalidInput);
  CHECK_THROWS_AS(jl_project(ps, 1.0, 1), InvalidInput);
  CHECK_THROWS_AS(jl_project(ps, -0.5, 1), InvalidInput);
}

TEST_CASE("jl_project target dimension and id preservation") {
  std::mt19937 gen(2);
  const PointSet ps = testing::random_points(gen, 50, 7);
  const PointSet proj = jl_project(ps, 0.3, 9);
  // ceil(8 / 0.09 * ln 50) = 348
  CHECK(proj.dim() == 348);
  CHECK(proj.ids() == ps.ids());
}

TEST_CASE("jl_project is linear: coincident points and the zero vector") {
  PointSet ps(2, {7, 8, 9}, {1.5, -2.0, 1.5, -2.0, 0.0, 0.0});
  const PointSet proj = jl_project(ps, 0.5, 42);
  const auto a = proj.point(0);
  const auto b = proj.point(1);
  const auto z = proj.point(2);
  for (int k = 0; k < proj.dim(); ++k) {
    CHECK(a[static_cast<std::size_t>(k)] == b[static_cast<std::size_t>(k)]);
    CHECK(z[static_cast<std::size_t>(k)] == 0.0);
  }
}

TEST_CASE("jl_project preserves pairwise distances within eps for most seeds") {
  std::mt19937 gen(3);
  const PointSet ps = testing::random_points(gen, 50, 100, 5.0);
  int good_seeds = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const PointSet proj = jl_project(ps, 0.3, seed);
    bool ok = true;
    for (int i = 0; i < ps.size() && ok; ++i) {
      for (int j = i + 1; j < ps.size() && ok; ++j) {
        const double ratio = dist_at(proj, i, j) / dist_at(ps, i, j);
        ok = ratio >= 0.7 && ratio <= 1.3;
      }
    }
    if (ok) ++good_seeds;
  }
  CHECK(good_seeds >= 95);
}

TEST_CASE("lsh_hash is deterministic and keys agree for coincident points") {
  const LshFunction f = make_lsh_function(4, std::cbrt(4.0), 64, 3, 11, 0, 0);
  const LshFunction f_again = make_lsh_function(4, std::cbrt(4.0), 64, 3, 11, 0, 0);
  std::mt19937 gen(4);
  const PointSet ps = testing::random_points(gen, 40, 3);
  for (int i = 0; i < ps.size(); ++i) {
    const BallKey k = lsh_hash(f, ps.point(i));
    CHECK(k == lsh_hash(f, ps.point(i)));
    CHECK(k == lsh_hash(f_again, ps.point(i)));
  }
}

TEST_CASE("lsh_hash rejects dimension mismatch") {
  const LshFunction f = make_lsh_function(4, 1.5, 8, 3, 1, 0, 0);
  const std::vector<double> p = {1.0, 2.0};
  CHECK_THROWS(lsh_hash(f, std::span<const double>(p)));
}

TEST_CASE("keys decode to their stated grid balls or fallback cells") {
  std::mt19937 gen(5);
  const PointSet ps = testing::random_points(gen, 60, 2, 20.0);
  const int t = 4;
  const double w = std::cbrt(4.0);
  const LshFunction f = make_lsh_function(t, w, 16, 2, 99, 3, 1);
  for (int i = 0; i < ps.size(); ++i) {
    const BallKey key = lsh_hash(f, ps.point(i));
    const std::vector<double> pp = projected(f, ps.point(i));
    // Distance from pp to the nearest grid point of the shift-u grid.
    auto gap = [&](int u) {
      double d2 = 0.0;
      for (int k = 0; k < t; ++k) {
        const double v = f.shift[static_cast<std::size_t>(u) * t + k];
        const double c = std::round((pp[static_cast<std::size_t>(k)] - v) / (4.0 * w));
        const double g = pp[static_cast<std::size_t>(k)] - (v + c * 4.0 * w);
        d2 += g * g;
      }
      return d2;
    };
    if (key.covered) {
      CHECK(gap(static_cast<int>(key.shift)) <= w * w);
      for (std::uint32_t u = 0; u < key.shift; ++u) {
        CHECK(gap(static_cast<int>(u)) > w * w);
      }
    } else {
      for (int u = 0; u < f.shifts; ++u) CHECK(gap(u) > w * w);
      for (int k = 0; k < t; ++k) {
        CHECK(key.cell[static_cast<std::size_t>(k)] ==
              static_cast<std::int64_t>(std::floor(pp[static_cast<std::size_t>(k)] / (4.0 * w))));
      }
    }
  }
}

TEST_CASE("close pairs collide more often than far pairs at t=16") {
  // 200 pairs at distance <= 1 against 200 at distance >= 10*C (C=2), hashed
  // by 1000 function draws.
  const int t = 16;
  const double w = std::cbrt(16.0);
  const int dim = 3;
  std::mt19937 gen(6);
  std::uniform_real_distribution<double> box(-50.0, 50.0);
  std::normal_distribution<double> dir(0.0, 1.0);
  std::uniform_real_distribution<double> close_len(0.1, 1.0);
  std::uniform_real_distribution<double> far_len(20.0, 40.0);

  auto make_pairs = [&](auto& len_dist) {
    std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
    for (int i = 0; i < 200; ++i) {
      std::vector<double> p(dim), q(dim), u(dim);
      double norm = 0.0;
      for (int k = 0; k < dim; ++k) {
        p[static_cast<std::size_t>(k)] = box(gen);
        u[static_cast<std::size_t>(k)] = dir(gen);
        norm += u[static_cast<std::size_t>(k)] * u[static_cast<std::size_t>(k)];
      }
      const double len = len_dist(gen) / std::sqrt(norm);
      for (int k = 0; k < dim; ++k) {
        q[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k)] + len * u[static_cast<std::size_t>(k)];
      }
      pairs.emplace_back(std::move(p), std::move(q));
    }
    return pairs;
  };
  const auto close_pairs = make_pairs(close_len);
  const auto far_pairs = make_pairs(far_len);

  std::int64_t close_hits = 0, far_hits = 0;
  for (std::uint64_t draw = 0; draw < 1000; ++draw) {
    const LshFunction f = make_lsh_function(t, w, 64, dim, 123, draw, 0);
    for (const auto& [p, q] : close_pairs) {
      if (lsh_hash(f, p) == lsh_hash(f, q)) ++close_hits;
    }
    for (const auto& [p, q] : far_pairs) {
      if (lsh_hash(f, p) == lsh_hash(f, q)) ++far_hits;
    }
  }
  CHECK(close_hits > far_hits);
}

TEST_CASE("lsh_key concatenates and degrades to lsh_hash at kc=1") {
  std::vector<LshFunction> g;
  g.push_back(make_lsh_function(4, 1.5, 32, 2, 7, 0, 0));
  const std::vector<double> p = {3.25, -1.5};
  const LshKey single = lsh_key(g, p);
  REQUIRE(single.parts.size() == 1);
  CHECK(single.parts[0] == lsh_hash(g[0], p));

  g.push_back(make_lsh_function(4, 1.5, 32, 2, 7, 0, 1));
  g.push_back(make_lsh_function(4, 1.5, 32, 2, 7, 0, 2));
  const LshKey key = lsh_key(g, p);
  REQUIRE(key.parts.size() == 3);
  CHECK(key == lsh_key(g, p));
  bool all_covered = true;
  for (const BallKey& b : key.parts) all_covered = all_covered && b.covered;
  CHECK(key.covered() == all_covered);
}

TEST_CASE("collision rate estimates decrease with distance") {
  const double at_zero = estimate_collision_rate(4, std::cbrt(4.0), 64, 0.0, 2000);
  const double at_one = estimate_collision_rate(4, std::cbrt(4.0), 64, 1.0, 2000);
  const double at_twenty = estimate_collision_rate(4, std::cbrt(4.0), 64, 20.0, 2000);
  CHECK(at_zero > 0.99);
  CHECK(at_one > at_twenty);
  CHECK(at_twenty < 0.05);
}

TEST_CASE("close/far collision rates separate by 3 sigma over 10^4 trials") {
  const int trials = 10000;
  const double c = 2.0;
  const double p_close = estimate_collision_rate(4, std::cbrt(4.0), 64, 1.0, trials);
  const double p_far =
      estimate_collision_rate(4, std::cbrt(4.0), 64, kLshFarFactor * c, trials);
  const double sigma = std::sqrt(p_close * (1 - p_close) / trials) +
                       std::sqrt(p_far * (1 - p_far) / trials);
  CHECK(p_close - p_far > 3.0 * sigma);
}

TEST_CASE("derive_lsh_params is deterministic and desk-scale sane") {
  const LshParams a = derive_lsh_params(200, 2.0);
  const LshParams b = derive_lsh_params(200, 2.0);
  CHECK(a.t == 4);  // max(4, round(ln^{4/5} 200))
  CHECK(a.w == doctest::Approx(std::cbrt(4.0)));
  CHECK(a.shifts == kLshShiftCap);
  CHECK(a.concat >= 1);
  CHECK(a.draws >= 1);
  CHECK(a.p2_hat < a.p1_hat);
  CHECK(a.t == b.t);
  CHECK(a.concat == b.concat);
  CHECK(a.draws == b.draws);
  CHECK(a.p1_hat == b.p1_hat);
  CHECK(a.p2_hat == b.p2_hat);

  CHECK_THROWS_AS(derive_lsh_params(0, 2.0), InvalidInput);
  CHECK_THROWS_AS(derive_lsh_params(10, 1.0), InvalidInput);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "rgather/points.hpp"

using namespace rgather;
using testing::line;
using testing::line_ids;
using testing::random_points;

TEST_CASE("point set construction validates its input") {
  CHECK_THROWS_AS(PointSet(0, {1}, {}), InvalidInput);
  CHECK_THROWS_AS(PointSet(2, {1}, {0.0}), InvalidInput);
  CHECK_THROWS_AS(PointSet(1, {1, 1}, {0.0, 1.0}), InvalidInput);
  CHECK_THROWS_AS(PointSet(1, {1, 2}, {0.0, std::nan("")}), InvalidInput);
  CHECK_THROWS_AS(PointSet(1, {1}, {std::numeric_limits<double>::infinity()}), InvalidInput);

  const PointSet empty(3, {}, {});
  CHECK(empty.size() == 0);
  CHECK(empty.dim() == 3);

  const PointSet ps(2, {7, 9}, {0.0, 0.0, 3.0, 4.0});
  CHECK(ps.index_of(9) == 1);
  CHECK(ps.index_of(8) == -1);
  CHECK(ps.contains(7));
}

TEST_CASE("dist") {
  const PointSet ps(2, {0, 1}, {0.0, 0.0, 3.0, 4.0});
  CHECK(dist(ps, 0, 1) == 5.0);
  CHECK(dist(ps, 1, 0) == 5.0);
  CHECK(dist(ps, 0, 0) == 0.0);

  const PointSet one_d = line_ids({0, 7});
  CHECK(dist(one_d, 0, 7) == 7.0);

  CHECK_THROWS_AS(dist(ps, 0, 42), InvalidInput);
  CHECK_THROWS_AS(euclidean(ps.point(0), one_d.point(0)), InvalidInput);
}

TEST_CASE("rho_r") {
  const PointSet ps = line_ids({0, 1, 3});
  CHECK(rho_r(ps, 0, 2) == 1.0);
  CHECK(rho_r(ps, 3, 3) == 3.0);  // distances from 3 are {0, 2, 3}
  for (std::int64_t p : {0, 1, 3}) CHECK(rho_r(ps, p, 1) == 0.0);

  CHECK_THROWS_AS(rho_r(ps, 0, 4), InvalidInput);
  CHECK_THROWS_AS(rho_r(ps, 0, 0), InvalidInput);
  CHECK_THROWS_AS(rho_r(ps, 5, 1), InvalidInput);
}

TEST_CASE("rho_r is monotone in r") {
  std::mt19937 gen(20240811);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 9);
    const int d = 1 + static_cast<int>(gen() % 3);
    const PointSet ps = random_points(gen, n, d);
    for (int i = 0; i < n; ++i) {
      double prev = 0.0;
      for (int r = 1; r <= n; ++r) {
        const double cur = rho_r(ps, ps.id(i), r);
        CHECK(cur >= prev);
        prev = cur;
      }
    }
  }
}

TEST_CASE("rho_hat") {
  CHECK(rho_hat(line_ids({0, 1, 3}), 2) == 2.0);
  CHECK(rho_hat(line_ids({0, 1, 10, 11}), 2) == 1.0);
  CHECK(rho_hat(line_ids({0, 1, 10, 11}), 1) == 0.0);
}

TEST_CASE("rho_hat_k") {
  const PointSet ps = line_ids({0, 1, 10, 11, 50});
  CHECK(rho_hat_k(ps, 2, 1) == 1.0);  // rho_2 values {1,1,1,1,39}
  CHECK(rho_hat_k(ps, 2, 0) == rho_hat(ps, 2));

  // keep-one-point degenerate case: min over p of rho_r(p)
  double min_rho = std::numeric_limits<double>::infinity();
  for (std::int64_t p : ps.ids()) min_rho = std::min(min_rho, rho_r(ps, p, 2));
  CHECK(rho_hat_k(ps, 2, ps.size() - 1) == min_rho);

  CHECK_THROWS_AS(rho_hat_k(ps, 2, 5), InvalidInput);
  CHECK_THROWS_AS(rho_hat_k(ps, 2, -1), InvalidInput);
}

namespace {

Clustering two_pair_solution() {
  Clustering sol;
  sol.clusters.push_back({0, {0, 1}});
  sol.clusters.push_back({10, {10, 11}});
  return sol;
}

}  // namespace

TEST_CASE("validate reports exact metrics") {
  const PointSet ps = line_ids({0, 1, 10, 11});
  RGatherParams params;
  params.r = 2;

  const ValidationReport rep = validate(ps, two_pair_solution(), params);
  CHECK(rep.min_cluster_size == 2);
  CHECK(rep.max_radius == 1.0);
  CHECK(rep.total_power_cost == 2.0);
  CHECK(rep.outlier_count == 0);

  const PointSet single = line_ids({5});
  Clustering self;
  self.clusters.push_back({5, {5}});
  const ValidationReport srep = validate(single, self, params);
  CHECK(srep.max_radius == 0.0);
  CHECK(srep.min_cluster_size == 1);

  const PointSet with_far = line_ids({0, 1, 10, 11, 50});
  Clustering outliered = two_pair_solution();
  outliered.outliers = {50};
  CHECK(validate(with_far, outliered, params).outlier_count == 1);
}

TEST_CASE("validate rejects malformed partitions") {
  const PointSet ps = line_ids({0, 1, 10, 11});
  RGatherParams params;

  Clustering overlap = two_pair_solution();
  overlap.clusters[1].members = {1, 10, 11};
  CHECK_THROWS_AS(validate(ps, overlap, params), InvalidInput);

  Clustering missing = two_pair_solution();
  missing.clusters[1].members = {10};
  CHECK_THROWS_AS(validate(ps, missing, params), InvalidInput);

  Clustering unknown = two_pair_solution();
  unknown.outliers = {99};
  CHECK_THROWS_AS(validate(ps, unknown, params), InvalidInput);

  Clustering foreign_center = two_pair_solution();
  foreign_center.clusters[0].center = 10;
  CHECK_THROWS_AS(validate(ps, foreign_center, params), InvalidInput);

  Clustering empty_cluster = two_pair_solution();
  empty_cluster.clusters.push_back({0, {}});
  CHECK_THROWS_AS(validate(ps, empty_cluster, params), InvalidInput);
}

TEST_CASE("max_radius is invariant under cluster relabeling") {
  const PointSet ps = line_ids({0, 1, 10, 11});
  Clustering sol = two_pair_solution();
  const double base = max_radius(ps, sol);
  std::swap(sol.clusters[0], sol.clusters[1]);
  CHECK(max_radius(ps, sol) == base);
  CHECK(min_cluster_size(sol) == 2);
  CHECK(total_power_cost(ps, sol, 2) == 2.0);
}

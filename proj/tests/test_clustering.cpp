#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "eot/clustering.hpp"

using namespace eot;

namespace {

CloudPoint at(double x, double y) {
  CloudPoint cp;
  cp.point.base.x_w = x;
  cp.point.base.y_w = y;
  return cp;
}

// Reference implementation of classical circular DBSCAN: label array with
// -1 for noise, cluster ids otherwise. Independent of the library's code path
// (plain index sets, no neighbor caching).
std::vector<int> brute_force_dbscan(const std::vector<Vec2>& pts, double eps, int min_pts) {
  const int n = static_cast<int>(pts.size());
  auto region = [&](int i) {
    std::vector<int> out;
    for (int j = 0; j < n; ++j) {
      if ((pts[i] - pts[j]).norm() <= eps) out.push_back(j);
    }
    return out;
  };
  std::vector<int> label(n, -2);
  int cid = 0;
  for (int i = 0; i < n; ++i) {
    if (label[i] != -2) continue;
    auto seeds = region(i);
    if (static_cast<int>(seeds.size()) < min_pts) {
      label[i] = -1;
      continue;
    }
    label[i] = cid;
    for (size_t k = 0; k < seeds.size(); ++k) {
      const int q = seeds[k];
      if (label[q] == -1) label[q] = cid;
      if (label[q] != -2) continue;
      label[q] = cid;
      const auto q_region = region(q);
      if (static_cast<int>(q_region.size()) >= min_pts) {
        seeds.insert(seeds.end(), q_region.begin(), q_region.end());
      }
    }
    ++cid;
  }
  return label;
}

// Canonical form for comparing partitions: set of sorted index groups.
std::set<std::vector<int>> partition_of(const std::vector<int>& labels) {
  std::set<std::vector<int>> out;
  const int max_label = *std::max_element(labels.begin(), labels.end());
  for (int c = 0; c <= max_label; ++c) {
    std::vector<int> group;
    for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
      if (labels[i] == c) group.push_back(i);
    }
    if (!group.empty()) out.insert(group);
  }
  return out;
}

}  // namespace

TEST_CASE("elliptical neighborhoods are anisotropic") {
  DbscanParams params;
  params.semi_major = 2.5;
  params.semi_minor = 1.0;
  params.min_pts = 2;
  const FlowField flow = FlowField::uniform(0.0);  // flow along +x

  SUBCASE("3 m apart along the flow exceeds the major semi-axis") {
    const auto r = dbscan({at(0, 0), at(3.0, 0)}, params, flow, ExecPolicy::serial);
    CHECK(r.clusters.empty());
    CHECK(r.noise.size() == 2);
  }
  SUBCASE("2 m apart along the flow is inside the ellipse") {
    const auto r = dbscan({at(0, 0), at(2.0, 0)}, params, flow, ExecPolicy::serial);
    REQUIRE(r.clusters.size() == 1);
    CHECK(r.clusters[0].points.size() == 2);
    CHECK(r.noise.empty());
  }
  SUBCASE("2 m apart across the flow exceeds the minor semi-axis") {
    const auto r = dbscan({at(0, 0), at(0, 2.0)}, params, flow, ExecPolicy::serial);
    CHECK(r.clusters.empty());
    CHECK(r.noise.size() == 2);
  }
}

TEST_CASE("undefined flow falls back to the circular neighborhood") {
  DbscanParams params;
  params.circle_radius = 1.5;
  params.min_pts = 2;
  const FlowField flow = FlowField::none();
  const auto near = dbscan({at(0, 0), at(0, 1.4)}, params, flow, ExecPolicy::serial);
  CHECK(near.clusters.size() == 1);
  const auto far = dbscan({at(0, 0), at(0, 1.6)}, params, flow, ExecPolicy::serial);
  CHECK(far.clusters.empty());
}

TEST_CASE("degenerate ellipse equals classical DBSCAN (brute-force oracle)") {
  DbscanParams params;
  params.semi_major = 1.2;
  params.semi_minor = 1.2;
  params.circle_radius = 1.2;

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_int_distribution<int> n_dist(5, 50);
  std::uniform_int_distribution<int> mp_dist(2, 4);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = n_dist(rng);
    params.min_pts = mp_dist(rng);
    std::vector<CloudPoint> cps;
    std::vector<Vec2> pts;
    for (int i = 0; i < n; ++i) {
      const Vec2 p{u(rng), u(rng)};
      pts.push_back(p);
      cps.push_back(at(p.x, p.y));
    }
    const auto oracle = brute_force_dbscan(pts, 1.2, params.min_pts);

    const auto got = dbscan(cps, params, FlowField::uniform(0.3), ExecPolicy::serial);
    // Rebuild labels from the returned clusters by matching positions.
    std::vector<int> got_labels(n, -1);
    for (size_t c = 0; c < got.clusters.size(); ++c) {
      for (const CloudPoint& cp : got.clusters[c].points) {
        for (int i = 0; i < n; ++i) {
          if ((pts[i] - cp.point.position()).norm() < 1e-12) got_labels[i] = static_cast<int>(c);
        }
      }
    }
    CHECK(partition_of(got_labels) == partition_of(oracle));
    // Noise sets agree as well.
    int oracle_noise = 0;
    for (const int l : oracle) oracle_noise += (l == -1);
    CHECK(static_cast<int>(got.noise.size()) == oracle_noise);
  }
}

TEST_CASE("every point lands in exactly one cluster or in noise") {
  DbscanParams params;
  params.min_pts = 3;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 12.0);
  std::vector<CloudPoint> cps;
  for (int i = 0; i < 80; ++i) cps.push_back(at(u(rng), u(rng)));
  const auto r = dbscan(cps, params, FlowField::none(), ExecPolicy::serial);
  size_t total = r.noise.size();
  for (const Cluster& c : r.clusters) {
    total += c.points.size();
    CHECK(static_cast<int>(c.points.size()) >= params.min_pts);
    for (const CloudPoint& cp : c.points) CHECK(c.bbox.contains(cp.point.position()));
  }
  CHECK(total == cps.size());
}

TEST_CASE("extreme_points_bbox") {
  const std::vector<Vec2> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  SUBCASE("axis aligned") {
    const OrientedBox b = extreme_points_bbox(square, 0.0);
    CHECK(b.length == doctest::Approx(1.0));
    CHECK(b.width == doctest::Approx(1.0));
    CHECK(b.centre.x == doctest::Approx(0.5));
    CHECK(b.centre.y == doctest::Approx(0.5));
  }
  SUBCASE("rotated 45 degrees") {
    const OrientedBox b = extreme_points_bbox(square, kPi / 4);
    CHECK(b.length == doctest::Approx(std::sqrt(2.0)));
    CHECK(b.width == doctest::Approx(std::sqrt(2.0)));
    CHECK(b.centre.x == doctest::Approx(0.5));
    CHECK(b.centre.y == doctest::Approx(0.5));
  }
  SUBCASE("single point degenerates") {
    const std::vector<Vec2> one = {{3.0, -2.0}};
    const OrientedBox b = extreme_points_bbox(one, 0.7);
    CHECK(b.length == doctest::Approx(0.0));
    CHECK(b.width == doctest::Approx(0.0));
    CHECK(b.centre.x == doctest::Approx(3.0));
    CHECK(b.centre.y == doctest::Approx(-2.0));
  }
  SUBCASE("empty input throws") {
    CHECK_THROWS_AS(extreme_points_bbox(std::vector<Vec2>{}, 0.0), std::invalid_argument);
  }
}

TEST_CASE("cluster centre is the bbox centre, not the centroid") {
  std::vector<CloudPoint> cps = {at(0, 0), at(4, 0), at(4, 2), at(0, 2), at(3.9, 1.9)};
  Cluster c = make_cluster(cps, FlowField::uniform(0.0));
  CHECK(c.centre.x == doctest::Approx(2.0));
  CHECK(c.centre.y == doctest::Approx(1.0));
  CHECK(cluster_centre(c).x == doctest::Approx(2.0));

  SUBCASE("invariant under permutation and interior points") {
    std::vector<CloudPoint> shuffled = {at(3.9, 1.9), at(0, 2), at(4, 2), at(0, 0), at(4, 0),
                                        at(2.0, 1.0), at(1.3, 0.4)};
    const Cluster c2 = make_cluster(shuffled, FlowField::uniform(0.0));
    CHECK(c2.centre.x == doctest::Approx(2.0));
    CHECK(c2.centre.y == doctest::Approx(1.0));
  }
  SUBCASE("symmetric set: centre equals centroid") {
    const Cluster c3 = make_cluster({at(-1, -1), at(1, -1), at(1, 1), at(-1, 1)},
                                    FlowField::uniform(0.0));
    CHECK(c3.centre.x == doctest::Approx(0.0));
    CHECK(c3.centre.y == doctest::Approx(0.0));
  }
  SUBCASE("single point cluster") {
    const Cluster c4 = make_cluster({at(7, 8)}, FlowField::none());
    CHECK(c4.centre.x == doctest::Approx(7.0));
    CHECK(c4.centre.y == doctest::Approx(8.0));
  }
}

TEST_CASE("flow-field queries") {
  SUBCASE("regions, first match wins") {
    const FlowField f = FlowField::regions({{0, 10, 0, 10, 0.5}, {5, 20, 0, 10, 1.5}});
    CHECK(f.query(1, 1).value() == doctest::Approx(0.5));
    CHECK(f.query(7, 1).value() == doctest::Approx(0.5));
    CHECK(f.query(15, 1).value() == doctest::Approx(1.5));
    CHECK_FALSE(f.query(-1, 1).has_value());
  }
  SUBCASE("grid with undefined cells") {
    const FlowField f = FlowField::grid({0, 0}, 1.0, 2, 2, {0.1, std::nullopt, 0.3, 0.4});
    CHECK(f.query(0.5, 0.5).value() == doctest::Approx(0.1));
    CHECK_FALSE(f.query(1.5, 0.5).has_value());
    CHECK(f.query(0.5, 1.5).value() == doctest::Approx(0.3));
    CHECK_FALSE(f.query(5.0, 5.0).has_value());
  }
  SUBCASE("json parse round trip") {
    const FlowField f = FlowField::parse(R"({"type":"uniform","direction":0.7})");
    CHECK(f.query(100, -3).value() == doctest::Approx(0.7));
  }
}

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "eot/tracker.hpp"

using namespace eot;

namespace {

Cluster cluster_at(double x, double y, double vx, double vy) {
  Cluster c;
  CloudPoint cp;
  cp.point.base.x_w = x;
  cp.point.base.y_w = y;
  cp.point.phi_w = std::atan2(y, x);
  cp.point.range_rate_comp = 0.0;
  c.points = {cp};
  c.centre = {x, y};
  c.bbox = {{x, y}, 4.0, 2.0, 0.0};
  c.velocity = Vec2{vx, vy};
  return c;
}

Cluster cluster_from_obs(const std::vector<Vec2>& positions, const Vec2& v) {
  Cluster c;
  for (const Vec2& p : positions) {
    CloudPoint cp;
    cp.point.base.x_w = p.x;
    cp.point.base.y_w = p.y;
    const double phi = std::atan2(p.y, p.x);
    cp.point.phi_w = phi;
    cp.point.range_rate_comp = v.x * std::cos(phi) + v.y * std::sin(phi);
    c.points.push_back(cp);
  }
  std::vector<Vec2> pos(positions);
  c.bbox = extreme_points_bbox(pos, v.norm() > 0 ? std::atan2(v.y, v.x) : 0.0);
  c.centre = c.bbox.centre;
  c.velocity = v;
  return c;
}

}  // namespace

TEST_CASE("predict is constant-velocity kinematics") {
  KfConfig cfg;
  Track t;
  t.state << 0, 0, 10, 0, 4, 2;

  SUBCASE("position moves by v*dt, the rest is static") {
    const Track p = predict(t, 0.1, cfg);
    CHECK(p.state(0) == doctest::Approx(1.0));
    CHECK(p.state(1) == doctest::Approx(0.0));
    CHECK(p.state(2) == doctest::Approx(10.0));
    CHECK(p.state(3) == doctest::Approx(0.0));
    CHECK(p.state(4) == doctest::Approx(4.0));
    CHECK(p.state(5) == doctest::Approx(2.0));
  }
  SUBCASE("dt <= 0 is an error") {
    CHECK_THROWS_AS(predict(t, 0.0, cfg), std::invalid_argument);
    CHECK_THROWS_AS(predict(t, -0.1, cfg), std::invalid_argument);
  }
  SUBCASE("covariance trace strictly grows") {
    const Track p = predict(t, 0.1, cfg);
    CHECK(p.cov.trace() > t.cov.trace());
  }
}

TEST_CASE("update limits") {
  KfConfig cfg;
  Track t;
  t.state << 0, 0, 0, 0, 4, 2;
  t.cov = Matrix6::Identity();
  Vector6 meas;
  meas << 1, -1, 2, 0.5, 4.4, 1.8;

  SUBCASE("r -> 0 pulls the posterior onto the measurement") {
    cfg.r_diag.setConstant(1e-12);
    const Track u = update(t, meas, cfg);
    CHECK((u.state - meas).norm() < 1e-6);
  }
  SUBCASE("r -> inf keeps the prior") {
    cfg.r_diag.setConstant(1e12);
    const Track u = update(t, meas, cfg);
    CHECK((u.state - t.state).norm() < 1e-6);
  }
  SUBCASE("unit prior and unit measurement noise meet at the midpoint") {
    cfg.r_diag.setConstant(1.0);
    Vector6 m2 = t.state;
    m2(0) = 2.0;
    const Track u = update(t, m2, cfg);
    CHECK(u.state(0) == doctest::Approx(1.0));
    CHECK(u.cov(0, 0) == doctest::Approx(0.5));
  }
}

TEST_CASE("covariance stays symmetric PSD over random cycles") {
  KfConfig cfg;
  Track t;
  t.state << 3, -2, 1, 1, 4, 2;
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    t = predict(t, 0.05 + 0.1 * std::abs(u(rng)), cfg);
    Vector6 meas = t.state;
    for (int k = 0; k < 6; ++k) meas(k) += u(rng);
    t = update(t, meas, cfg);
    CHECK((t.cov - t.cov.transpose()).norm() < 1e-9);
    const Eigen::SelfAdjointEigenSolver<Matrix6> es(t.cov);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
  }
}

TEST_CASE("merge_clusters") {
  RlsConfig rls_cfg;

  SUBCASE("a single cluster is passed through") {
    const Cluster c = cluster_at(3, 4, 10, 0);
    const MergedMeasurement m = merge_clusters({&c}, {5}, rls_cfg);
    CHECK(m.z(0) == doctest::Approx(3.0));
    CHECK(m.z(1) == doctest::Approx(4.0));
    CHECK(m.z(2) == doctest::Approx(10.0));
    CHECK(m.z(4) == doctest::Approx(4.0));
    CHECK_FALSE(m.velocity_fallback);
  }

  SUBCASE("two halves of an 8 m vehicle merge into one measurement") {
    // Front and back half point sets of a 8 x 2 rectangle moving along +x,
    // seen from afar so bearings vary a little.
    std::vector<Vec2> front, back;
    for (int k = 0; k <= 5; ++k) front.push_back({40.0 + 0.6 * k, 20.0});
    for (int k = 0; k <= 5; ++k) back.push_back({44.7 + 0.6 * k, 20.0});
    front.push_back({40.0, 22.0});
    back.push_back({48.0, 22.0});
    const Vec2 v{10.0, 0.0};
    const Cluster a = cluster_from_obs(front, v);
    const Cluster b = cluster_from_obs(back, v);
    const MergedMeasurement m = merge_clusters({&a, &b}, {6, 6}, rls_cfg);
    CHECK(m.z(4) == doctest::Approx(8.0).epsilon(0.01));
    CHECK(m.z(2) == doctest::Approx(10.0).epsilon(1e-6));
    CHECK(m.bbox.contains({40.0, 20.0}));
    CHECK(m.bbox.contains({48.0, 22.0}));
  }

  SUBCASE("degenerate refit falls back to the inlier-weighted mean") {
    RlsConfig harsh;
    harsh.warmup_updates = 0;
    harsh.outlier_delta_threshold = 1e-9;  // every nonzero residual rejects
    const Cluster a = cluster_from_obs({{30, 0}, {30.5, 0}, {31, 1}}, {10.0, 0.0});
    const Cluster b = cluster_from_obs({{35, 0}, {35.5, 1}}, {10.4, 0.0});
    const MergedMeasurement m = merge_clusters({&a, &b}, {6, 2}, harsh);
    CHECK(m.velocity_fallback);
    CHECK(m.z(2) == doctest::Approx(10.1));
    CHECK(m.z(3) == doctest::Approx(0.0));
  }
}

namespace {

// Hand-written lifecycle reference: spawn counts as the first hit.
struct ReferenceAutomaton {
  bool exists = true;
  bool valid = false;
  int hits = 1;
  int misses = 0;

  void step(bool hit, int confirm, int delete_after) {
    if (!exists) return;
    if (hit) {
      hits += 1;
      misses = 0;
      if (hits >= confirm) valid = true;
    } else {
      misses += 1;
      hits = 0;
      if (misses >= delete_after) exists = false;
    }
  }
};

}  // namespace

TEST_CASE("lifecycle matches the reference automaton for every sequence up to length 8") {
  const KfConfig kf_cfg;
  const RlsConfig rls_cfg;
  const double dt = 0.1;
  const Vec2 v{1.0, 0.0};
  const Vec2 p0{10.0, 5.0};

  for (int len = 0; len <= 8; ++len) {
    for (int mask = 0; mask < (1 << len); ++mask) {
      Tracker tracker(kf_cfg);
      tracker.step({cluster_at(p0.x, p0.y, v.x, v.y)}, {1}, 0.0, rls_cfg);
      REQUIRE(tracker.tracks().size() == 1);
      const int id = tracker.tracks()[0].id;
      ReferenceAutomaton ref;

      for (int k = 0; k < len; ++k) {
        const bool hit = (mask >> k) & 1;
        const double t = (k + 1) * dt;
        std::vector<Cluster> clusters;
        if (hit) {
          const Vec2 p = p0 + v * t;
          clusters.push_back(cluster_at(p.x, p.y, v.x, v.y));
        }
        tracker.step(clusters, {1}, t, rls_cfg);
        ref.step(hit, kf_cfg.confirm_hits, kf_cfg.delete_misses);

        const Track* got = nullptr;
        for (const Track& tr : tracker.tracks()) {
          if (tr.id == id) got = &tr;
        }
        if (!ref.exists) {
          CHECK(got == nullptr);
          break;
        }
        REQUIRE(got != nullptr);
        CHECK(got->hits == ref.hits);
        CHECK(got->misses == ref.misses);
        CHECK((got->status == TrackStatus::valid) == ref.valid);
      }
    }
  }
}

TEST_CASE("exact CV measurements keep the track on the ground truth") {
  KfConfig cfg;
  const RlsConfig rls_cfg;
  Tracker tracker(cfg);
  const Vec2 v{2.0, 1.0};
  const Vec2 p0{5.0, 0.0};
  const double dt = 1.0 / 14.0;
  for (int k = 0; k < 10; ++k) {
    const Vec2 p = p0 + v * (k * dt);
    Cluster c = cluster_at(p.x, p.y, v.x, v.y);
    c.bbox.length = 4.0;
    c.bbox.width = 2.0;
    tracker.step({c}, {5}, k * dt, rls_cfg);
    REQUIRE(tracker.tracks().size() == 1);
    const Track& t = tracker.tracks()[0];
    if (k >= 4) {
      CHECK((Vec2{t.state(0), t.state(1)} - p).norm() < 1e-6);
      CHECK(t.status == TrackStatus::valid);
    }
  }
}

TEST_CASE("tracker step spawns, confirms and deletes") {
  const KfConfig cfg;
  const RlsConfig rls_cfg;
  Tracker tracker(cfg);

  // New cluster, no tracks: one invalid track with the default extents.
  tracker.step({cluster_at(0, 0, 1, 0)}, {1}, 0.0, rls_cfg);
  REQUIRE(tracker.tracks().size() == 1);
  CHECK(tracker.tracks()[0].status == TrackStatus::invalid);
  CHECK(tracker.tracks()[0].state(4) == doctest::Approx(4.0));
  CHECK(tracker.tracks()[0].state(5) == doctest::Approx(2.0));
  CHECK(tracker.valid_tracks().empty());

  // Associated on the 2nd and 3rd frame: valid on the 3rd.
  tracker.step({cluster_at(0.1, 0, 1, 0)}, {1}, 0.1, rls_cfg);
  CHECK(tracker.tracks()[0].status == TrackStatus::invalid);
  tracker.step({cluster_at(0.2, 0, 1, 0)}, {1}, 0.2, rls_cfg);
  CHECK(tracker.tracks()[0].status == TrackStatus::valid);

  // Five consecutive empty frames delete it on the 5th.
  for (int k = 1; k <= 5; ++k) {
    tracker.step({}, {}, 0.2 + 0.1 * k, rls_cfg);
    if (k < 5) {
      CHECK(tracker.tracks().size() == 1);
    }
  }
  CHECK(tracker.tracks().empty());
}

TEST_CASE("clusters without a velocity estimate neither gate nor spawn") {
  const KfConfig cfg;
  const RlsConfig rls_cfg;
  Tracker tracker(cfg);
  Cluster c = cluster_at(1, 1, 0, 0);
  c.velocity.reset();
  tracker.step({c}, {1}, 0.0, rls_cfg);
  CHECK(tracker.tracks().empty());
}

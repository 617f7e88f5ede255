#include "eot/clustering.hpp"

#include <cstdint>
#include <queue>
#include <stdexcept>

namespace eot {

namespace {

// Membership of q in the neighborhood centred at p.
bool in_neighborhood(const Vec2& p, std::optional<double> flow_at_p, const Vec2& q,
                     const DbscanParams& params) {
  const Vec2 d = q - p;
  if (flow_at_p) {
    const Vec2 local = d.rotated(-*flow_at_p);
    const double a = params.semi_major, b = params.semi_minor;
    return (local.x * local.x) / (a * a) + (local.y * local.y) / (b * b) <= 1.0;
  }
  return d.squared_norm() <= params.circle_radius * params.circle_radius;
}

}  // namespace

void DbscanParams::validate() const {
  if (!(semi_major >= semi_minor && semi_minor > 0.0)) {
    throw std::invalid_argument("DbscanParams: require semi_major >= semi_minor > 0");
  }
  if (circle_radius <= 0.0) throw std::invalid_argument("DbscanParams: circle_radius must be > 0");
  if (min_pts < 1) throw std::invalid_argument("DbscanParams: min_pts must be >= 1");
}

DbscanResult dbscan(const std::vector<CloudPoint>& points, const DbscanParams& params,
                    const FlowField& flow, ExecPolicy policy) {
  params.validate();
  const long n = static_cast<long>(points.size());
  DbscanResult result;
  if (n == 0) return result;

  std::vector<Vec2> pos(n);
  std::vector<std::optional<double>> flow_dir(n);
  for (long i = 0; i < n; ++i) {
    pos[i] = points[i].point.position();
    flow_dir[i] = flow.query(pos[i]);
  }

  // Symmetric neighbor lists (kernel): q is a neighbor of p iff both
  // one-sided membership tests pass. Self is included.
  std::vector<std::vector<int32_t>> neighbors(n);
  auto fill_row = [&](long i) {
    neighbors[i].push_back(static_cast<int32_t>(i));
    for (long j = 0; j < n; ++j) {
      if (j == i) continue;
      if (in_neighborhood(pos[i], flow_dir[i], pos[j], params) &&
          in_neighborhood(pos[j], flow_dir[j], pos[i], params)) {
        neighbors[i].push_back(static_cast<int32_t>(j));
      }
    }
  };
  if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) fill_row(i);
  } else {
    for (long i = 0; i < n; ++i) fill_row(i);
  }

  constexpr int kUnvisited = -2, kNoise = -1;
  std::vector<int> label(n, kUnvisited);
  int cluster_id = 0;
  for (long i = 0; i < n; ++i) {
    if (label[i] != kUnvisited) continue;
    if (static_cast<int>(neighbors[i].size()) < params.min_pts) {
      label[i] = kNoise;
      continue;
    }
    // Expand a new cluster from core point i.
    label[i] = cluster_id;
    std::queue<int32_t> frontier;
    for (int32_t q : neighbors[i]) frontier.push(q);
    while (!frontier.empty()) {
      const int32_t q = frontier.front();
      frontier.pop();
      if (label[q] == kNoise) label[q] = cluster_id;  // border point
      if (label[q] != kUnvisited) continue;
      label[q] = cluster_id;
      if (static_cast<int>(neighbors[q].size()) >= params.min_pts) {
        for (int32_t r : neighbors[q]) frontier.push(r);
      }
    }
    ++cluster_id;
  }

  std::vector<std::vector<CloudPoint>> groups(cluster_id);
  for (long i = 0; i < n; ++i) {
    if (label[i] == kNoise) {
      result.noise.push_back(points[i]);
    } else {
      groups[label[i]].push_back(points[i]);
    }
  }
  result.clusters.reserve(groups.size());
  for (auto& g : groups) result.clusters.push_back(make_cluster(std::move(g), flow));
  return result;
}

Vec2 cluster_centre(const Cluster& cluster) {
  if (cluster.points.empty()) throw std::invalid_argument("cluster_centre: empty cluster");
  return cluster.bbox.centre;
}

Cluster make_cluster(std::vector<CloudPoint> points, const FlowField& flow) {
  if (points.empty()) throw std::invalid_argument("make_cluster: empty point set");
  Cluster c;
  c.points = std::move(points);
  Vec2 centroid{};
  std::vector<Vec2> positions;
  positions.reserve(c.points.size());
  for (const CloudPoint& cp : c.points) {
    positions.push_back(cp.point.position());
    centroid += positions.back();
  }
  centroid = centroid / static_cast<double>(c.points.size());
  const auto dir = flow.query(centroid);
  c.bbox = extreme_points_bbox(positions, dir.value_or(0.0));
  c.centre = c.bbox.centre;
  return c;
}

void reorient_cluster(Cluster& cluster, double orientation) {
  std::vector<Vec2> positions;
  positions.reserve(cluster.points.size());
  for (const CloudPoint& cp : cluster.points) positions.push_back(cp.point.position());
  cluster.bbox = extreme_points_bbox(positions, orientation);
  cluster.centre = cluster.bbox.centre;
}

}  // namespace eot

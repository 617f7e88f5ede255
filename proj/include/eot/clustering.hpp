#pragma once

#include <optional>
#include <vector>

#include "eot/exec.hpp"
#include "eot/flow_field.hpp"
#include "eot/preprocess.hpp"

namespace eot {

struct DbscanParams {
  double semi_major = 2.5;    // m, ellipse half-length along the flow
  double semi_minor = 1.0;    // m, half-width across the flow
  double circle_radius = 1.5; // m, fallback when flow is undefined
  int min_pts = 2;

  void validate() const;
};

/// A density-connected group of accumulated points. The bounding box is the
/// tightest rectangle at the cluster orientation; the centre is its geometric
/// centre (not the centroid). Velocity and the CAH seed are filled later by
/// the velocity stage.
struct Cluster {
  std::vector<CloudPoint> points;
  Vec2 centre{};
  OrientedBox bbox{};
  std::optional<Vec2> velocity;
  std::optional<Vec2> cah_seed;
};

struct DbscanResult {
  std::vector<Cluster> clusters;
  std::vector<CloudPoint> noise;
};

/// DBSCAN with flow-aligned elliptical neighborhoods. Two points are
/// neighbors iff each lies inside the other's ellipse (symmetrized); a
/// point's ellipse is aligned to the flow at that point, or degenerates to
/// the circle of `circle_radius` where flow is undefined. min_pts counts the
/// query point itself.
DbscanResult dbscan(const std::vector<CloudPoint>& points, const DbscanParams& params,
                    const FlowField& flow, ExecPolicy policy = ExecPolicy::parallel);

/// Geometric centre of the cluster's oriented bounding box.
Vec2 cluster_centre(const Cluster& cluster);

/// Builds a cluster (bbox + centre) from member points. Orientation is the
/// flow at the point centroid when defined, else world-axis aligned.
Cluster make_cluster(std::vector<CloudPoint> points, const FlowField& flow);

/// Recomputes bbox and centre at the given orientation (used after the
/// velocity estimate fixes the heading).
void reorient_cluster(Cluster& cluster, double orientation);

}  // namespace eot

#include "eot/association.hpp"

#include <stdexcept>

namespace eot {

Innovation innovation(const TrackGateState& track_pred, const Cluster& cluster) {
  if (!cluster.velocity) throw std::invalid_argument("innovation: cluster has no velocity estimate");
  const double dx = track_pred.x - cluster.centre.x;
  const double dy = track_pred.y - cluster.centre.y;
  const double dvx = track_pred.vx - cluster.velocity->x;
  const double dvy = track_pred.vy - cluster.velocity->y;
  Innovation in;
  in.i_pos = dx * dx + dy * dy;
  in.i_vel = dvx * dvx + dvy * dvy;
  in.total = in.i_pos + in.i_vel;
  return in;
}

AssociationResult associate(const std::vector<TrackGateState>& tracks_pred,
                            const std::vector<Cluster>& clusters, double gate_pos, double gate_vel,
                            ExecPolicy policy) {
  const long n = static_cast<long>(clusters.size());
  AssociationResult result;
  result.assignment.assign(n, std::nullopt);

  auto assign_one = [&](long c) {
    std::optional<int> best_id;
    double best_total = 0.0;
    for (const TrackGateState& t : tracks_pred) {
      const Innovation in = innovation(t, clusters[c]);
      if (!(in.i_pos < gate_pos && in.i_vel < gate_vel)) continue;
      if (!best_id || in.total < best_total || (in.total == best_total && t.id < *best_id)) {
        best_id = t.id;
        best_total = in.total;
      }
    }
    result.assignment[c] = best_id;
  };
  if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(static)
    for (long c = 0; c < n; ++c) assign_one(c);
  } else {
    for (long c = 0; c < n; ++c) assign_one(c);
  }

  for (long c = 0; c < n; ++c) {
    if (result.assignment[c]) {
      result.track_clusters[*result.assignment[c]].push_back(static_cast<int>(c));
    } else {
      result.unassigned_clusters.push_back(static_cast<int>(c));
    }
  }
  return result;
}

}  // namespace eot

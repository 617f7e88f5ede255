#pragma once

#include <map>
#include <optional>
#include <vector>

#include "eot/clustering.hpp"
#include "eot/exec.hpp"

namespace eot {

struct Innovation {
  double i_pos = 0.0;  // m^2
  double i_vel = 0.0;  // m^2/s^2
  double total = 0.0;
};

/// Minimal view of a predicted track for gating.
struct TrackGateState {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
};

struct AssociationResult {
  /// Per cluster index: assigned track id, or nullopt when no track gated in.
  std::vector<std::optional<int>> assignment;
  std::vector<int> unassigned_clusters;
  std::map<int, std::vector<int>> track_clusters;  // track id -> cluster indices
};

/// Squared position and velocity discrepancies between the predicted track
/// and the cluster. Throws if the cluster has no velocity estimate.
Innovation innovation(const TrackGateState& track_pred, const Cluster& cluster);

/// Per-cluster independent gating: candidates must satisfy i_pos < gate_pos
/// AND i_vel < gate_vel (strict); the candidate with the smallest total wins,
/// ties broken by lower track id. Several clusters may map to one track.
AssociationResult associate(const std::vector<TrackGateState>& tracks_pred,
                            const std::vector<Cluster>& clusters, double gate_pos = 9.0,
                            double gate_vel = 9.0, ExecPolicy policy = ExecPolicy::parallel);

}  // namespace eot

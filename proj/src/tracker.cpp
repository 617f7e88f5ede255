#include "eot/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eot {

void KfConfig::validate() const {
  if (sigma_accel <= 0.0 || q_extent <= 0.0) throw std::invalid_argument("KfConfig: noise must be > 0");
  if ((r_diag.array() <= 0.0).any() || (p0_diag.array() <= 0.0).any()) {
    throw std::invalid_argument("KfConfig: r/p0 diagonals must be > 0");
  }
  if (confirm_hits < 1 || delete_misses < 1) throw std::invalid_argument("KfConfig: lifecycle counts must be >= 1");
  if (init_l < 0.0 || init_w < 0.0) throw std::invalid_argument("KfConfig: init extents must be >= 0");
}

Track predict(const Track& track, double dt, const KfConfig& cfg) {
  if (dt <= 0.0) throw std::invalid_argument("predict: dt must be > 0");
  Matrix6 f = Matrix6::Identity();
  f(0, 2) = dt;
  f(1, 3) = dt;

  const double s2 = cfg.sigma_accel * cfg.sigma_accel;
  const double q_pp = s2 * dt * dt * dt / 3.0;
  const double q_pv = s2 * dt * dt / 2.0;
  const double q_vv = s2 * dt;
  Matrix6 q = Matrix6::Zero();
  q(0, 0) = q_pp; q(0, 2) = q_pv; q(2, 0) = q_pv; q(2, 2) = q_vv;
  q(1, 1) = q_pp; q(1, 3) = q_pv; q(3, 1) = q_pv; q(3, 3) = q_vv;
  q(4, 4) = cfg.q_extent * dt;
  q(5, 5) = cfg.q_extent * dt;

  Track out = track;
  out.state = f * track.state;
  out.cov = f * track.cov * f.transpose() + q;
  out.cov = 0.5 * (out.cov + out.cov.transpose().eval());
  return out;
}

Track update(const Track& track, const Vector6& meas, const KfConfig& cfg) {
  const Matrix6 r = cfg.r_diag.asDiagonal();
  const Matrix6 s = track.cov + r;  // H = I
  const Matrix6 k = track.cov * s.inverse();
  Track out = track;
  out.state = track.state + k * (meas - track.state);
  const Matrix6 ikh = Matrix6::Identity() - k;
  out.cov = ikh * track.cov * ikh.transpose() + k * r * k.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose().eval());
  out.state(4) = std::max(0.0, out.state(4));
  out.state(5) = std::max(0.0, out.state(5));
  return out;
}

MergedMeasurement merge_clusters(const std::vector<const Cluster*>& clusters,
                                 const std::vector<int>& member_inlier_counts,
                                 const RlsConfig& rls_cfg) {
  if (clusters.empty()) throw std::invalid_argument("merge_clusters: need at least one cluster");
  if (clusters.size() != member_inlier_counts.size()) {
    throw std::invalid_argument("merge_clusters: weight count mismatch");
  }

  MergedMeasurement m;
  if (clusters.size() == 1) {
    const Cluster& c = *clusters[0];
    if (!c.velocity) throw std::invalid_argument("merge_clusters: cluster has no velocity");
    m.bbox = c.bbox;
    m.z << c.centre.x, c.centre.y, c.velocity->x, c.velocity->y, c.bbox.length, c.bbox.width;
    return m;
  }

  // Inlier-count-weighted mean of member velocities: the refit seed and the
  // fallback value.
  Vec2 weighted{};
  double weight_sum = 0.0;
  std::vector<DopplerObs> pooled;
  std::vector<Vec2> positions;
  for (size_t i = 0; i < clusters.size(); ++i) {
    const Cluster& c = *clusters[i];
    if (!c.velocity) throw std::invalid_argument("merge_clusters: cluster has no velocity");
    const double w = std::max(1, member_inlier_counts[i]);
    weighted += *c.velocity * w;
    weight_sum += w;
    for (const CloudPoint& cp : c.points) {
      pooled.push_back({cp.point.phi_w, cp.point.range_rate_comp});
      positions.push_back(cp.point.position());
    }
  }
  weighted = weighted / weight_sum;

  Vec2 velocity = weighted;
  if (pooled.size() >= 2) {
    const auto refit = estimate_velocity(pooled, weighted, rls_cfg);
    if (refit) {
      velocity = refit->v;
    } else {
      m.velocity_fallback = true;
    }
  } else {
    m.velocity_fallback = true;
  }

  const double speed = velocity.norm();
  const double heading = speed > 1e-9 ? std::atan2(velocity.y, velocity.x) : clusters[0]->bbox.yaw;
  m.bbox = extreme_points_bbox(positions, heading);
  m.z << m.bbox.centre.x, m.bbox.centre.y, velocity.x, velocity.y, m.bbox.length, m.bbox.width;
  return m;
}

std::vector<Track> Tracker::valid_tracks() const {
  std::vector<Track> out;
  for (const Track& t : tracks_) {
    if (t.status == TrackStatus::valid) out.push_back(t);
  }
  return out;
}

TrackerStepResult Tracker::step(const std::vector<Cluster>& clusters,
                                const std::vector<int>& cluster_inlier_counts, double timestamp,
                                const RlsConfig& rls_cfg, double gate_pos, double gate_vel,
                                ExecPolicy policy) {
  TrackerStepResult result;

  if (last_timestamp_) {
    const double dt = timestamp - *last_timestamp_;
    if (dt <= 0.0) throw std::invalid_argument("Tracker::step: timestamps must increase");
    for (Track& t : tracks_) t = predict(t, dt, cfg_);
  }
  last_timestamp_ = timestamp;

  // Clusters without a velocity estimate cannot be gated or spawn tracks.
  std::vector<Cluster> usable;
  std::vector<int> usable_index;
  std::vector<int> usable_weights;
  for (size_t i = 0; i < clusters.size(); ++i) {
    if (!clusters[i].velocity) continue;
    usable.push_back(clusters[i]);
    usable_index.push_back(static_cast<int>(i));
    usable_weights.push_back(i < cluster_inlier_counts.size() ? cluster_inlier_counts[i] : 1);
  }

  std::vector<TrackGateState> predicted;
  predicted.reserve(tracks_.size());
  for (const Track& t : tracks_) predicted.push_back(t.gate_state());
  result.association = associate(predicted, usable, gate_pos, gate_vel, policy);

  for (Track& t : tracks_) {
    const auto it = result.association.track_clusters.find(t.id);
    if (it == result.association.track_clusters.end()) {
      t.misses += 1;
      t.hits = 0;
      continue;
    }
    std::vector<const Cluster*> members;
    std::vector<int> weights;
    for (const int ci : it->second) {
      members.push_back(&usable[ci]);
      weights.push_back(usable_weights[ci]);
    }
    const MergedMeasurement m = merge_clusters(members, weights, rls_cfg);
    if (m.velocity_fallback) result.velocity_fallbacks += 1;
    t = update(t, m.z, cfg_);
    t.hits += 1;
    t.misses = 0;
    t.last_update = timestamp;
    if (t.status == TrackStatus::invalid && t.hits >= cfg_.confirm_hits) {
      t.status = TrackStatus::valid;
    }
  }

  for (auto it = tracks_.begin(); it != tracks_.end();) {
    if (it->misses >= cfg_.delete_misses) {
      result.deleted_track_ids.push_back(it->id);
      it = tracks_.erase(it);
    } else {
      ++it;
    }
  }

  for (const int ci : result.association.unassigned_clusters) {
    const Cluster& c = usable[ci];
    Track t;
    t.id = next_id_++;
    t.state << c.centre.x, c.centre.y, c.velocity->x, c.velocity->y, cfg_.init_l, cfg_.init_w;
    t.cov = cfg_.p0_diag.asDiagonal();
    t.status = TrackStatus::invalid;
    t.hits = 1;
    t.misses = 0;
    t.last_update = timestamp;
    tracks_.push_back(t);
    result.spawned_track_ids.push_back(t.id);
  }

  // Map association indices back to the caller's cluster indexing.
  AssociationResult remapped;
  remapped.assignment.assign(clusters.size(), std::nullopt);
  for (size_t u = 0; u < usable_index.size(); ++u) {
    remapped.assignment[usable_index[u]] = result.association.assignment[u];
  }
  for (size_t i = 0; i < clusters.size(); ++i) {
    if (remapped.assignment[i]) {
      remapped.track_clusters[*remapped.assignment[i]].push_back(static_cast<int>(i));
    } else if (clusters[i].velocity) {
      remapped.unassigned_clusters.push_back(static_cast<int>(i));
    }
  }
  result.association = std::move(remapped);
  return result;
}

}  // namespace eot

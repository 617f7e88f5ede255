#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "eot/association.hpp"
#include "eot/clustering.hpp"
#include "eot/velocity.hpp"

namespace eot {

using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

enum class TrackStatus { invalid, valid };

/// Extended-object track: state (x, y, vx, vy, l, w), covariance and
/// lifecycle counters. `hits` counts consecutive frames with at least one
/// associated cluster, `misses` consecutive frames with none.
struct Track {
  int id = 0;
  Vector6 state = Vector6::Zero();
  Matrix6 cov = Matrix6::Identity();
  TrackStatus status = TrackStatus::invalid;
  int hits = 0;
  int misses = 0;
  double last_update = 0.0;

  TrackGateState gate_state() const { return {id, state(0), state(1), state(2), state(3)}; }
};

struct KfConfig {
  double sigma_accel = 2.0;      // m/s^2, white-acceleration process noise
  double q_extent = 0.01;        // m^2/s, extents drift
  // Measurement noise diag for (x, y, vx, vy, l, w); position entries from
  // the sensor's 0.4 m resolution, the rest engineering margins.
  Eigen::Matrix<double, 6, 1> r_diag{(Eigen::Matrix<double, 6, 1>() <<
      0.16, 0.16, 0.25, 0.25, 0.25, 0.25).finished()};
  Eigen::Matrix<double, 6, 1> p0_diag{(Eigen::Matrix<double, 6, 1>() <<
      0.25, 0.25, 1.0, 1.0, 1.0, 1.0).finished()};
  int confirm_hits = 3;
  int delete_misses = 5;
  double init_l = 4.0;  // m
  double init_w = 2.0;  // m

  void validate() const;
};

/// Merged one-to-many measurement: the 6-tuple plus whether the pooled
/// velocity refit fell back to the weighted mean of member velocities.
struct MergedMeasurement {
  Vector6 z = Vector6::Zero();
  OrientedBox bbox{};
  bool velocity_fallback = false;
};

/// CV propagation over dt: position moves by velocity, v/l/w static,
/// covariance inflated by the white-acceleration Q. Throws if dt <= 0.
Track predict(const Track& track, double dt, const KfConfig& cfg);

/// Standard linear Kalman measurement update with identity observation over
/// the full 6-D state (Joseph-form covariance). Lifecycle counters untouched.
Track update(const Track& track, const Vector6& meas, const KfConfig& cfg);

/// Pools the member points of all clusters assigned to one track and
/// recomputes centre, oriented bbox and velocity; the refit is seeded with
/// the inlier-count-weighted mean of the member velocities and falls back to
/// that mean if the refit is degenerate.
MergedMeasurement merge_clusters(const std::vector<const Cluster*>& clusters,
                                 const std::vector<int>& member_inlier_counts,
                                 const RlsConfig& rls_cfg);

struct TrackerStepResult {
  AssociationResult association;
  std::vector<int> spawned_track_ids;
  std::vector<int> deleted_track_ids;
  int velocity_fallbacks = 0;
};

/// Track list with lifecycle management. One instance per pipeline; frames
/// must be stepped in order.
class Tracker {
 public:
  explicit Tracker(KfConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

  /// Predict -> associate -> merge/update -> lifecycle -> spawn.
  /// `cluster_inlier_counts[i]` is the RLS inlier count of cluster i (used to
  /// weight merged velocity seeds); clusters without velocity are ignored.
  TrackerStepResult step(const std::vector<Cluster>& clusters,
                         const std::vector<int>& cluster_inlier_counts, double timestamp,
                         const RlsConfig& rls_cfg, double gate_pos = 9.0, double gate_vel = 9.0,
                         ExecPolicy policy = ExecPolicy::parallel);

  const std::vector<Track>& tracks() const { return tracks_; }
  std::vector<Track> valid_tracks() const;
  const KfConfig& config() const { return cfg_; }

 private:
  KfConfig cfg_;
  std::vector<Track> tracks_;
  int next_id_ = 0;
  std::optional<double> last_timestamp_;
};

}  // namespace eot

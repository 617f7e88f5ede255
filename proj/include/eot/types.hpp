#pragma once

#include <vector>

#include "eot/geometry.hpp"

namespace eot {

/// One radar reflection. Position is in the world frame (conversion happens
/// once at ingestion); the range rate is the raw, uncompensated Doppler value
/// and the bearing is measured against the sensor boresight.
struct RadarPoint {
  double x_w = 0.0;
  double y_w = 0.0;
  double range_rate_meas = 0.0;  // m/s, uncompensated
  double bearing_sensor = 0.0;   // rad, in (-pi, pi]
  double timestamp = 0.0;        // s
  int sensor_id = 0;

  Vec2 position() const { return {x_w, y_w}; }
};

/// Sensor pose in the ego-vehicle frame.
struct SensorMount {
  double x_s = 0.0;
  double y_s = 0.0;
  double theta_s = 0.0;  // rad, sensor yaw w.r.t. ego
};

/// Ego-vehicle pose and motion in the world frame.
struct EgoState {
  double x_e = 0.0;
  double y_e = 0.0;
  double alpha = 0.0;    // ego-to-world rotation, (-pi, pi]
  double vx_e = 0.0;
  double vy_e = 0.0;
  double omega_e = 0.0;  // yaw rate, rad/s
  double timestamp = 0.0;

  Vec2 position() const { return {x_e, y_e}; }
  Vec2 velocity() const { return {vx_e, vy_e}; }
};

struct Frame {
  std::vector<RadarPoint> points;
  EgoState ego;
  double timestamp = 0.0;
  long frame_index = 0;
};

struct WorldBearing {
  double phi_w = 0.0;  // rad, in (-pi, pi]
};

/// World-frame bearing of a reflection: phi_w = phi_s + theta_s + alpha.
inline WorldBearing bearing_to_world(double phi_s, const SensorMount& mount, const EgoState& ego) {
  return {normalize_angle(phi_s + mount.theta_s + ego.alpha)};
}

/// World position of the mounted sensor for the given ego pose.
inline Vec2 sensor_world_position(const EgoState& ego, const SensorMount& mount) {
  return ego.position() + Vec2{mount.x_s, mount.y_s}.rotated(ego.alpha);
}

}  // namespace eot

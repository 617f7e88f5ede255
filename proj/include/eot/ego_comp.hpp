#pragma once

#include <vector>

#include "eot/exec.hpp"
#include "eot/types.hpp"

namespace eot {

/// Rigid-body motion experienced at the sensor, world-aligned components.
struct SensorMotion {
  double omega_s = 0.0;
  double vx_s = 0.0;
  double vy_s = 0.0;
};

/// A radar point with the ego contribution projected out of its range rate.
struct CompensatedPoint {
  RadarPoint base;
  double range_rate_comp = 0.0;  // m/s
  double phi_w = 0.0;            // world-frame bearing, rad

  Vec2 position() const { return base.position(); }
};

/// Lever-arm transport of the ego motion to the sensor position:
/// omega_s = omega_e, v_s = v_e + omega_e x r, with r the world-frame offset
/// from the ego reference point to the sensor.
SensorMotion motion_at_sensor(const EgoState& ego, const SensorMount& mount);

/// Projection of the sensor motion onto the sensor->target line of sight,
/// direction angle theta_s + phi_s.
double ego_range_rate(const SensorMotion& sm, const SensorMount& mount, double phi_s);

/// r_comp = r_meas + r_ego; also attaches the world-frame bearing.
CompensatedPoint compensate(const RadarPoint& point, const EgoState& ego, const SensorMount& mount);

/// Batch compensation of a whole frame (kernel).
std::vector<CompensatedPoint> compensate_frame(const Frame& frame, const SensorMount& mount,
                                               ExecPolicy policy = ExecPolicy::parallel);

}  // namespace eot

#include "eot/ego_comp.hpp"

#include <cmath>

namespace eot {

SensorMotion motion_at_sensor(const EgoState& ego, const SensorMount& mount) {
  const Vec2 sensor_pos = sensor_world_position(ego, mount);
  SensorMotion sm;
  sm.omega_s = ego.omega_e;
  sm.vx_s = -(sensor_pos.y - ego.y_e) * ego.omega_e + ego.vx_e;
  sm.vy_s = (sensor_pos.x - ego.x_e) * ego.omega_e + ego.vy_e;
  return sm;
}

double ego_range_rate(const SensorMotion& sm, const SensorMount& mount, double phi_s) {
  const double los = mount.theta_s + phi_s;
  return sm.vx_s * std::cos(los) + sm.vy_s * std::sin(los);
}

CompensatedPoint compensate(const RadarPoint& point, const EgoState& ego, const SensorMount& mount) {
  const SensorMotion sm = motion_at_sensor(ego, mount);
  CompensatedPoint out;
  out.base = point;
  out.range_rate_comp = point.range_rate_meas + ego_range_rate(sm, mount, point.bearing_sensor);
  out.phi_w = bearing_to_world(point.bearing_sensor, mount, ego).phi_w;
  return out;
}

std::vector<CompensatedPoint> compensate_frame(const Frame& frame, const SensorMount& mount,
                                               ExecPolicy policy) {
  std::vector<CompensatedPoint> out(frame.points.size());
  const SensorMotion sm = motion_at_sensor(frame.ego, mount);
  const long n = static_cast<long>(frame.points.size());
  if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
      const RadarPoint& p = frame.points[i];
      out[i].base = p;
      out[i].range_rate_comp = p.range_rate_meas + ego_range_rate(sm, mount, p.bearing_sensor);
      out[i].phi_w = bearing_to_world(p.bearing_sensor, mount, frame.ego).phi_w;
    }
  } else {
    for (long i = 0; i < n; ++i) {
      const RadarPoint& p = frame.points[i];
      out[i].base = p;
      out[i].range_rate_comp = p.range_rate_meas + ego_range_rate(sm, mount, p.bearing_sensor);
      out[i].phi_w = bearing_to_world(p.bearing_sensor, mount, frame.ego).phi_w;
    }
  }
  return out;
}

}  // namespace eot

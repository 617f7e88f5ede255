#include "eot/simulator.hpp"

#include <cmath>
#include <stdexcept>

#include "eot/ego_comp.hpp"

namespace eot {

namespace {

struct SpeedRamp {
  double accel;
  double v_max;

  double speed(double t) const { return std::min(v_max, accel * t); }
  double distance(double t) const {
    const double t_ramp = v_max / accel;
    if (t <= t_ramp) return 0.5 * accel * t * t;
    return 0.5 * accel * t_ramp * t_ramp + v_max * (t - t_ramp);
  }
};

// Two straights joined by semicircular turns; counter-clockwise.
struct StadiumPath {
  double straight;
  double radius;

  double perimeter() const { return 2.0 * straight + kTwoPi * radius; }

  PoseSample at(double s, double speed) const {
    const double p = perimeter();
    s = std::fmod(std::fmod(s, p) + p, p);
    PoseSample out;
    double curvature = 0.0;
    if (s < straight) {
      out.pos = {s, 0.0};
      out.heading = 0.0;
    } else if (s < straight + kPi * radius) {
      const double phi = -0.5 * kPi + (s - straight) / radius;
      out.pos = {straight + radius * std::cos(phi), radius + radius * std::sin(phi)};
      out.heading = phi + 0.5 * kPi;
      curvature = 1.0 / radius;
    } else if (s < 2.0 * straight + kPi * radius) {
      const double d = s - straight - kPi * radius;
      out.pos = {straight - d, 2.0 * radius};
      out.heading = kPi;
    } else {
      const double phi = 0.5 * kPi + (s - 2.0 * straight - kPi * radius) / radius;
      out.pos = {radius * std::cos(phi), radius + radius * std::sin(phi)};
      out.heading = phi + 0.5 * kPi;
      curvature = 1.0 / radius;
    }
    out.heading = normalize_angle(out.heading);
    out.vel = unit_vector(out.heading) * speed;
    out.omega = speed * curvature;
    return out;
  }
};

struct Edge {
  Vec2 a, b, outward;
};

std::vector<Edge> rectangle_edges(const Vec2& centre, double heading, double length, double width) {
  const Vec2 u = unit_vector(heading);
  const Vec2 n{-u.y, u.x};
  const Vec2 hl = u * (0.5 * length);
  const Vec2 hw = n * (0.5 * width);
  const Vec2 fl = centre + hl + hw, fr = centre + hl - hw;
  const Vec2 br = centre - hl - hw, bl = centre - hl + hw;
  return {
      {fl, fr, u},              // front
      {fr, br, n * -1.0},       // right
      {br, bl, u * -1.0},       // back
      {bl, fl, n},              // left
  };
}

}  // namespace

void SensorModel::validate() const {
  if (range_sigma < 0.0 || doppler_sigma < 0.0) throw std::invalid_argument("SensorModel: negative noise");
  if (separation <= 0.0 || pos_resolution <= 0.0) throw std::invalid_argument("SensorModel: non-positive resolution");
  if (!(min_range < max_range) || min_range <= 0.0) throw std::invalid_argument("SensorModel: bad range limits");
  if (fov <= 0.0 || frame_rate <= 0.0) throw std::invalid_argument("SensorModel: bad fov/frame_rate");
}

TrajectoryFn segment_trajectory(std::vector<TrajectorySegment> segments) {
  if (segments.empty()) throw std::invalid_argument("segment_trajectory: no segments");
  return [segments = std::move(segments)](double t) -> PoseSample {
    double t_local = std::max(0.0, t);
    for (const TrajectorySegment& seg : segments) {
      if (t_local <= seg.duration || &seg == &segments.back()) {
        const double tau = std::min(t_local, seg.duration);
        const bool past_end = t_local > seg.duration;
        PoseSample out;
        switch (seg.type) {
          case TrajectorySegment::Type::line: {
            const Vec2 dir = unit_vector(seg.heading);
            const double speed = seg.duration > 0.0
                                     ? seg.v0 + (seg.v1 - seg.v0) * tau / seg.duration
                                     : seg.v0;
            const double dist = seg.duration > 0.0
                                    ? seg.v0 * tau + 0.5 * (seg.v1 - seg.v0) * tau * tau / seg.duration
                                    : 0.0;
            out.pos = seg.start + dir * dist;
            out.heading = seg.heading;
            out.vel = past_end ? Vec2{} : dir * speed;
            break;
          }
          case TrajectorySegment::Type::arc: {
            const double angle = seg.start_angle + seg.angular_speed * tau;
            out.pos = seg.centre + Vec2{std::cos(angle), std::sin(angle)} * seg.radius;
            out.heading = normalize_angle(angle + (seg.angular_speed >= 0.0 ? 0.5 * kPi : -0.5 * kPi));
            const double speed = std::abs(seg.angular_speed) * seg.radius;
            out.vel = past_end ? Vec2{} : unit_vector(out.heading) * speed;
            out.omega = past_end ? 0.0 : seg.angular_speed;
            break;
          }
          case TrajectorySegment::Type::hold:
            out.pos = seg.pos;
            out.heading = seg.heading;
            break;
        }
        return out;
      }
      t_local -= seg.duration;
    }
    return {};
  };
}

TrajectoryFn hold_trajectory(Vec2 pos, double heading) {
  TrajectorySegment seg;
  seg.type = TrajectorySegment::Type::hold;
  seg.pos = pos;
  seg.heading = heading;
  seg.duration = 1e12;
  return segment_trajectory({seg});
}

SimFrame generate_frame(const Scenario& scenario, double t, long frame_index,
                        const SensorModel& sensor, const NoiseModel& noise, std::mt19937_64& rng) {
  sensor.validate();
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const PoseSample ego_pose = scenario.ego(t);
  EgoState true_ego;
  true_ego.x_e = ego_pose.pos.x;
  true_ego.y_e = ego_pose.pos.y;
  true_ego.alpha = ego_pose.heading;
  true_ego.vx_e = ego_pose.vel.x;
  true_ego.vy_e = ego_pose.vel.y;
  true_ego.omega_e = ego_pose.omega;
  true_ego.timestamp = t;

  EgoState reported_ego = true_ego;
  if (noise.ego_vel_sigma > 0.0) {
    reported_ego.vx_e += noise.ego_vel_sigma * gauss(rng);
    reported_ego.vy_e += noise.ego_vel_sigma * gauss(rng);
  }

  const Vec2 sensor_pos = sensor_world_position(true_ego, scenario.mount);
  const SensorMotion sm = motion_at_sensor(true_ego, scenario.mount);

  SimFrame out;
  out.frame.ego = reported_ego;
  out.frame.timestamp = t;
  out.frame.frame_index = frame_index;
  out.truth.true_ego = true_ego;

  for (size_t ti = 0; ti < scenario.targets.size(); ++ti) {
    const TargetSpec& target = scenario.targets[ti];
    const PoseSample pose = target.trajectory(t);
    out.truth.targets.push_back({static_cast<int>(ti), pose.pos, pose.vel, target.length,
                                 target.width, pose.heading});

    std::vector<Vec2> emitted;  // corner samples shared by two edges emit once
    for (const Edge& edge : rectangle_edges(pose.pos, pose.heading, target.length, target.width)) {
      const Vec2 mid = (edge.a + edge.b) * 0.5;
      if (edge.outward.dot(sensor_pos - mid) <= 0.0) continue;
      const double len = (edge.b - edge.a).norm();
      const int n_pts = std::max(2, static_cast<int>(std::floor(len / sensor.separation)) + 1);
      for (int k = 0; k < n_pts; ++k) {
        const Vec2 p_true = edge.a + (edge.b - edge.a) * (static_cast<double>(k) / (n_pts - 1));
        bool duplicate = false;
        for (const Vec2& q : emitted) {
          if ((q - p_true).squared_norm() < 1e-12) { duplicate = true; break; }
        }
        if (duplicate) continue;
        emitted.push_back(p_true);

        if (unit(rng) < noise.dropout_prob) continue;
        const Vec2 los = p_true - sensor_pos;
        const double range = los.norm();
        if (range < sensor.min_range || range > sensor.max_range) continue;
        const double lambda_true = std::atan2(los.y, los.x);
        const double phi_s_true =
            normalize_angle(lambda_true - scenario.mount.theta_s - true_ego.alpha);
        if (std::abs(phi_s_true) > 0.5 * sensor.fov) continue;

        const double r_comp_true = pose.vel.dot(unit_vector(lambda_true));

        Vec2 p_meas = p_true;
        if (sensor.range_sigma > 0.0) {
          p_meas.x += sensor.range_sigma * gauss(rng);
          p_meas.y += sensor.range_sigma * gauss(rng);
        }
        const Vec2 los_m = p_meas - sensor_pos;
        const double phi_s_meas =
            normalize_angle(std::atan2(los_m.y, los_m.x) - scenario.mount.theta_s - true_ego.alpha);

        const double r_ego = ego_range_rate(sm, scenario.mount, phi_s_meas);
        double r_meas = r_comp_true - r_ego;

        bool is_outlier = false;
        if (noise.outlier_prob > 0.0 && unit(rng) < noise.outlier_prob) {
          is_outlier = true;
          const double mag = noise.outlier_offset_min +
                             unit(rng) * (noise.outlier_offset_max - noise.outlier_offset_min);
          r_meas += (unit(rng) < 0.5 ? -mag : mag);
        }
        if (sensor.doppler_sigma > 0.0) r_meas += sensor.doppler_sigma * gauss(rng);

        out.frame.points.push_back({p_meas.x, p_meas.y, r_meas, phi_s_meas, t, 0});
        out.truth.point_labels.push_back({static_cast<int>(ti), is_outlier, pose.vel});
      }
    }
  }

  if (noise.clutter_rate > 0.0) {
    std::poisson_distribution<int> poisson(noise.clutter_rate);
    const int n_clutter = poisson(rng);
    for (int k = 0; k < n_clutter; ++k) {
      const double range = sensor.min_range + unit(rng) * (0.8 * sensor.max_range - sensor.min_range);
      const double phi_s = (unit(rng) - 0.5) * sensor.fov;
      const double lambda = phi_s + scenario.mount.theta_s + true_ego.alpha;
      const Vec2 p = sensor_pos + unit_vector(lambda) * range;
      const double mag = 0.5 + unit(rng) * 7.5;
      const double r_comp = (unit(rng) < 0.5 ? -mag : mag);
      const double r_ego = ego_range_rate(sm, scenario.mount, phi_s);
      out.frame.points.push_back({p.x, p.y, r_comp - r_ego, normalize_angle(phi_s), t, 0});
      out.truth.point_labels.push_back({-1, false, {}});
    }
  }
  return out;
}

Scenario scenario_a() {
  const double radius = 30.0;
  const double straight = 0.5 * (750.0 - kTwoPi * radius);
  const StadiumPath path{straight, radius};
  const SpeedRamp ramp{1.4, 14.0};

  Scenario s;
  s.label = "A";
  s.duration = 40.0;
  s.ego = [path, ramp](double t) { return path.at(ramp.distance(t), ramp.speed(t)); };
  TargetSpec trackee;
  trackee.trajectory = [path, ramp](double t) {
    return path.at(ramp.distance(t) + 25.0, ramp.speed(t));
  };
  s.targets.push_back(trackee);
  return s;
}

Scenario scenario_b() {
  Scenario s;
  s.label = "B";
  s.duration = 10.0;
  s.ego = hold_trajectory({0.0, 0.0}, 0.0);

  const Vec2 start{60.0, 3.5};
  const Vec2 dir = unit_vector(kPi);
  std::vector<TrajectorySegment> segs(3);
  segs[0].type = TrajectorySegment::Type::line;
  segs[0].start = start;
  segs[0].heading = kPi;
  segs[0].v0 = 0.0;
  segs[0].v1 = 8.0;
  segs[0].duration = 4.0;  // 16 m
  segs[1] = segs[0];
  segs[1].start = start + dir * 16.0;
  segs[1].v0 = 8.0;
  segs[1].v1 = 8.0;
  segs[1].duration = 2.0;  // 16 m
  segs[2] = segs[0];
  segs[2].start = segs[1].start + dir * 16.0;
  segs[2].v0 = 8.0;
  segs[2].v1 = 0.0;
  segs[2].duration = 4.0;  // 16 m, stops at x = 12

  TargetSpec trackee;
  trackee.trajectory = segment_trajectory(std::move(segs));
  s.targets.push_back(trackee);
  return s;
}

Scenario scenario_c() {
  Scenario s;
  s.label = "C";
  s.duration = 11.2;
  s.ego = hold_trajectory({0.0, 0.0}, 0.0);

  TrajectorySegment seg;
  seg.type = TrajectorySegment::Type::line;
  seg.start = {30.0, -28.0};
  seg.heading = 0.5 * kPi;
  seg.v0 = 5.0;
  seg.v1 = 5.0;
  seg.duration = 11.2;  // crosses the boresight at t = 5.6 s

  TargetSpec trackee;
  trackee.trajectory = segment_trajectory({seg});
  s.targets.push_back(trackee);
  return s;
}

Scenario circle_scenario(double circle_radius, double speed) {
  // Tracker follows the trackee around a circle centred at the origin,
  // 20 m behind along the arc.
  Scenario s;
  s.label = "circle";
  s.duration = 15.0;

  TrajectorySegment ego_seg;
  ego_seg.type = TrajectorySegment::Type::arc;
  ego_seg.centre = {0.0, 0.0};
  ego_seg.radius = circle_radius;
  ego_seg.start_angle = 0.0;
  ego_seg.angular_speed = speed / circle_radius;
  ego_seg.duration = 1e12;
  s.ego = segment_trajectory({ego_seg});

  TrajectorySegment trackee_seg = ego_seg;
  trackee_seg.start_angle = 20.0 / circle_radius;
  TargetSpec trackee;
  trackee.trajectory = segment_trajectory({trackee_seg});
  s.targets.push_back(trackee);
  return s;
}

Scenario dense_scenario(int n_objects, double duration) {
  if (n_objects < 1) throw std::invalid_argument("dense_scenario: need at least one object");
  Scenario s;
  s.label = "dense";
  s.duration = duration;
  s.ego = hold_trajectory({0.0, 0.0}, 0.0);
  for (int i = 0; i < n_objects; ++i) {
    TrajectorySegment seg;
    seg.type = TrajectorySegment::Type::line;
    seg.start = {15.0 + 7.0 * (i / 6), -10.0 + 4.0 * (i % 6)};
    seg.heading = 0.0;
    seg.v0 = 5.0 + (i % 5);
    seg.v1 = seg.v0;
    seg.duration = 1e12;
    TargetSpec target;
    target.trajectory = segment_trajectory({seg});
    s.targets.push_back(target);
  }
  return s;
}

double path_length(const TrajectoryFn& traj, double t0, double t1, int steps) {
  double total = 0.0;
  Vec2 prev = traj(t0).pos;
  for (int i = 1; i <= steps; ++i) {
    const double t = t0 + (t1 - t0) * i / steps;
    const Vec2 p = traj(t).pos;
    total += (p - prev).norm();
    prev = p;
  }
  return total;
}

}  // namespace eot

#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "eot/types.hpp"

namespace eot {

struct SensorModel {
  double range_sigma = 0.1;      // m, positional noise sigma
  double pos_resolution = 0.4;   // m
  double separation = 0.6;       // m, minimum target separability
  double doppler_sigma = 0.12;   // m/s
  double fov = 2.0943951023931953;  // rad, full width
  double max_range = 150.0;      // m
  double min_range = 1.0;        // m
  double frame_rate = 14.0;      // Hz

  void validate() const;
};

struct NoiseModel {
  double outlier_prob = 0.3;
  double outlier_offset_min = 1.0;  // m/s, |corruption| lower bound
  double outlier_offset_max = 6.0;  // m/s, upper bound
  double dropout_prob = 0.1;
  double clutter_rate = 1.0;        // expected spurious dynamic points per frame
  double ego_vel_sigma = 0.0;       // m/s, noise on the REPORTED ego velocity

  static NoiseModel clean() { return {0.0, 1.0, 6.0, 0.0, 0.0, 0.0}; }
};

struct PoseSample {
  Vec2 pos{};
  double heading = 0.0;
  Vec2 vel{};
  double omega = 0.0;
};

using TrajectoryFn = std::function<PoseSample(double)>;

struct TrajectorySegment {
  enum class Type { line, arc, hold };
  Type type = Type::hold;
  double duration = 0.0;
  // line: start point, fixed heading, speed ramps v0 -> v1
  Vec2 start{};
  double heading = 0.0;
  double v0 = 0.0;
  double v1 = 0.0;
  // arc: constant angular rate around a centre
  Vec2 centre{};
  double radius = 0.0;
  double start_angle = 0.0;
  double angular_speed = 0.0;
  // hold: stationary pose
  Vec2 pos{};
};

/// Piecewise trajectory; clamps to the end pose (zero velocity) past the
/// total duration.
TrajectoryFn segment_trajectory(std::vector<TrajectorySegment> segments);

/// Stationary pose.
TrajectoryFn hold_trajectory(Vec2 pos, double heading);

struct TargetSpec {
  double length = 4.0;
  double width = 2.0;
  TrajectoryFn trajectory;
};

struct Scenario {
  std::string label = "custom";
  TrajectoryFn ego;
  std::vector<TargetSpec> targets;
  double duration = 10.0;  // s
  SensorMount mount{2.0, 0.0, 0.0};
};

struct PointTruth {
  int target_id = -1;  // -1 = clutter
  bool is_outlier = false;
  Vec2 velocity{};     // true target velocity (zero for clutter)
};

struct TargetTruth {
  int id = 0;
  Vec2 centre{};
  Vec2 velocity{};
  double length = 0.0;
  double width = 0.0;
  double heading = 0.0;
};

struct FrameTruth {
  std::vector<TargetTruth> targets;
  std::vector<PointTruth> point_labels;  // parallel to Frame::points
  EgoState true_ego;
};

struct SimFrame {
  Frame frame;
  FrameTruth truth;
};

/// Samples reflections on the sensor-facing edges of each target (>= the
/// separation spacing, corners included), applies dropout/noise/outliers,
/// emits r_meas = r_comp_true - r_ego so that downstream compensation
/// recovers the truth, and appends Poisson clutter.
SimFrame generate_frame(const Scenario& scenario, double t, long frame_index,
                        const SensorModel& sensor, const NoiseModel& noise, std::mt19937_64& rng);

/// Tracker follows the trackee around a ~750 m stadium loop; trackee ramps
/// 0 -> 14 m/s.
Scenario scenario_a();
/// Stationary tracker; trackee approaches in the adjacent lane with an
/// acceleration and a deceleration phase.
Scenario scenario_b();
/// Stationary tracker; trackee crosses perpendicular to the boresight.
Scenario scenario_c();

/// Target driving a full circle in front of a stationary tracker.
Scenario circle_scenario(double circle_radius = 18.0, double speed = 8.0);
/// Receding multi-lane traffic with n targets (benchmark workloads).
Scenario dense_scenario(int n_objects, double duration = 7.5);

/// Arc length of the scenario-a loop measured by sampling the ego path.
double path_length(const TrajectoryFn& traj, double t0, double t1, int steps = 20000);

}  // namespace eot

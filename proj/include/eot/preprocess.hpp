#pragma once

#include <deque>
#include <map>
#include <vector>

#include "eot/ego_comp.hpp"

namespace eot {

/// A compensated point together with the frame it was captured in.
struct CloudPoint {
  CompensatedPoint point;
  long source_frame = 0;
};

/// Keeps the points with |r_comp| >= threshold (dynamic points), order preserved.
std::vector<CompensatedPoint> remove_static(const std::vector<CompensatedPoint>& points,
                                            double threshold);

/// Sliding window of the most recent frames' dynamic points.
class AccumulatedCloud {
 public:
  explicit AccumulatedCloud(int depth = 3);

  /// Appends a frame and evicts the oldest one beyond the window depth.
  /// Throws if frame_index does not increase strictly.
  void push(const std::vector<CompensatedPoint>& frame_points, long frame_index, double frame_time);

  const std::vector<CloudPoint>& points() const { return points_; }
  const std::deque<long>& window() const { return window_; }
  const std::map<long, double>& frame_times() const { return frame_times_; }
  double reference_time() const { return reference_time_; }
  int depth() const { return depth_; }
  void clear();

 private:
  int depth_;
  std::vector<CloudPoint> points_;
  std::deque<long> window_;
  std::map<long, double> frame_times_;
  double reference_time_ = 0.0;
};

/// Translates each point from its capture time onto the reference time using
/// the cluster velocity: p' = p + v * (t_ref - t_capture). Points from the
/// newest frame are unchanged. Throws if a source frame has no known time.
std::vector<CloudPoint> correct_distortion(const std::vector<CloudPoint>& cluster_points,
                                           const Vec2& velocity,
                                           const std::map<long, double>& frame_times,
                                           double reference_time);

}  // namespace eot

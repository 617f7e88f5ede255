#include "eot/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eot {

std::vector<CompensatedPoint> remove_static(const std::vector<CompensatedPoint>& points,
                                            double threshold) {
  std::vector<CompensatedPoint> out;
  out.reserve(points.size());
  for (const CompensatedPoint& p : points) {
    if (std::abs(p.range_rate_comp) >= threshold) out.push_back(p);
  }
  return out;
}

AccumulatedCloud::AccumulatedCloud(int depth) : depth_(depth) {
  if (depth < 1) throw std::invalid_argument("AccumulatedCloud: depth must be >= 1");
}

void AccumulatedCloud::push(const std::vector<CompensatedPoint>& frame_points, long frame_index,
                            double frame_time) {
  if (!window_.empty() && frame_index <= window_.back()) {
    throw std::invalid_argument("AccumulatedCloud: frame_index must increase strictly");
  }
  window_.push_back(frame_index);
  frame_times_[frame_index] = frame_time;
  reference_time_ = frame_time;
  for (const CompensatedPoint& p : frame_points) points_.push_back({p, frame_index});
  while (static_cast<int>(window_.size()) > depth_) {
    const long evicted = window_.front();
    window_.pop_front();
    frame_times_.erase(evicted);
    std::erase_if(points_, [evicted](const CloudPoint& cp) { return cp.source_frame == evicted; });
  }
}

void AccumulatedCloud::clear() {
  points_.clear();
  window_.clear();
  frame_times_.clear();
  reference_time_ = 0.0;
}

std::vector<CloudPoint> correct_distortion(const std::vector<CloudPoint>& cluster_points,
                                           const Vec2& velocity,
                                           const std::map<long, double>& frame_times,
                                           double reference_time) {
  std::vector<CloudPoint> out;
  out.reserve(cluster_points.size());
  for (const CloudPoint& cp : cluster_points) {
    const auto it = frame_times.find(cp.source_frame);
    if (it == frame_times.end()) {
      throw std::invalid_argument("correct_distortion: unknown source frame time");
    }
    const double dt = reference_time - it->second;
    CloudPoint corrected = cp;
    corrected.point.base.x_w += velocity.x * dt;
    corrected.point.base.y_w += velocity.y * dt;
    out.push_back(corrected);
  }
  return out;
}

}  // namespace eot

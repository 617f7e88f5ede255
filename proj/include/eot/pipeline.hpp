#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eot/association.hpp"
#include "eot/clustering.hpp"
#include "eot/ego_comp.hpp"
#include "eot/flow_field.hpp"
#include "eot/preprocess.hpp"
#include "eot/tracker.hpp"
#include "eot/velocity.hpp"

namespace eot {

struct PreprocessConfig {
  double static_threshold = 0.5;  // m/s
  int accumulation_depth = 3;
};

struct RansacConfig {
  int iters = 64;
  double inlier_tol = 0.3;  // m/s
};

struct PipelineConfig {
  PreprocessConfig preprocess;
  DbscanParams dbscan;
  RlsConfig rls;
  RansacConfig ransac;
  double gate_pos = 9.0;  // m^2
  double gate_vel = 9.0;  // m^2/s^2
  KfConfig kf;
  double cah_gate = 3.0;  // m, cluster matching across accumulation steps
  ExecPolicy exec = ExecPolicy::parallel;
  bool compute_baselines = true;
};

/// Everything the pipeline derived for one cluster of one frame.
struct ClusterOutput {
  Cluster cluster;   // points corrected to the frame time, bbox along heading
  Vec2 raw_centre{}; // centre before distortion correction
  std::optional<VelocityEstimate> rls;
  std::optional<Vec2> ols;
  std::optional<Vec2> ransac;
  std::optional<Vec2> cah;  // finite-difference velocity, when a match existed
};

struct FrameOutput {
  long frame_index = 0;
  double t = 0.0;
  std::vector<ClusterOutput> clusters;
  AssociationResult association;
  std::vector<Track> tracks;  // post-step snapshot
  double velocity_ms = 0.0;   // RLS stage wall time
  double pipeline_ms = 0.0;   // full per-frame wall time (baselines excluded)
  int degenerate_clusters = 0;
  size_t raw_points = 0;
  size_t dynamic_points = 0;
};

/// Stateful per-frame pipeline: compensate -> static filter -> accumulate ->
/// cluster -> velocity -> distortion correction -> associate -> track.
/// Frames must be processed strictly in order.
class Pipeline {
 public:
  Pipeline(PipelineConfig cfg, SensorMount mount, FlowField flow, std::uint64_t seed);

  FrameOutput process(const Frame& frame);

  const Tracker& tracker() const { return tracker_; }
  const PipelineConfig& config() const { return cfg_; }

 private:
  PipelineConfig cfg_;
  SensorMount mount_;
  FlowField flow_;
  std::uint64_t seed_;
  AccumulatedCloud cloud_;
  Tracker tracker_;
  std::vector<Vec2> prev_raw_centres_;
  double prev_time_ = 0.0;
  bool has_prev_ = false;
};

}  // namespace eot

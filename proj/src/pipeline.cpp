#include "eot/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace eot {

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

Pipeline::Pipeline(PipelineConfig cfg, SensorMount mount, FlowField flow, std::uint64_t seed)
    : cfg_(std::move(cfg)),
      mount_(mount),
      flow_(std::move(flow)),
      seed_(seed),
      cloud_(cfg_.preprocess.accumulation_depth),
      tracker_(cfg_.kf) {
  cfg_.dbscan.validate();
  cfg_.rls.validate();
}

FrameOutput Pipeline::process(const Frame& frame) {
  const auto t_start = std::chrono::steady_clock::now();
  const std::uint64_t frame_seed = derive_seed(seed_, static_cast<std::uint64_t>(frame.frame_index));

  FrameOutput out;
  out.frame_index = frame.frame_index;
  out.t = frame.timestamp;
  out.raw_points = frame.points.size();

  const std::vector<CompensatedPoint> compensated = compensate_frame(frame, mount_, cfg_.exec);
  const std::vector<CompensatedPoint> dynamic =
      remove_static(compensated, cfg_.preprocess.static_threshold);
  out.dynamic_points = dynamic.size();
  cloud_.push(dynamic, frame.frame_index, frame.timestamp);

  DbscanResult db = dbscan(cloud_.points(), cfg_.dbscan, flow_, cfg_.exec);
  const size_t n_clusters = db.clusters.size();

  // CAH seeds from raw centres of the previous accumulation step.
  std::vector<Vec2> seeds(n_clusters, Vec2{});
  std::vector<std::optional<Vec2>> cah_values(n_clusters);
  for (size_t i = 0; i < n_clusters; ++i) {
    if (!has_prev_) break;
    const Vec2 c = db.clusters[i].centre;
    double best = std::numeric_limits<double>::max();
    std::optional<Vec2> best_prev;
    for (const Vec2& p : prev_raw_centres_) {
      const double d = (c - p).norm();
      if (d < best) {
        best = d;
        best_prev = p;
      }
    }
    if (best_prev && best <= cfg_.cah_gate && frame.timestamp > prev_time_) {
      seeds[i] = cah_seed(c, *best_prev, frame.timestamp, prev_time_);
      cah_values[i] = seeds[i];
    }
  }

  std::vector<std::vector<DopplerObs>> cluster_obs(n_clusters);
  for (size_t i = 0; i < n_clusters; ++i) {
    for (const CloudPoint& cp : db.clusters[i].points) {
      cluster_obs[i].push_back({cp.point.phi_w, cp.point.range_rate_comp});
    }
  }

  const auto t_vel = std::chrono::steady_clock::now();
  RlsConfig rls_cfg = cfg_.rls;
  rls_cfg.rng_seed = frame_seed;
  const auto estimates = estimate_cluster_velocities(cluster_obs, seeds, rls_cfg, cfg_.exec);
  out.velocity_ms = ms_since(t_vel);

  out.clusters.resize(n_clusters);
  std::vector<Cluster> tracked_clusters(n_clusters);
  std::vector<int> inlier_counts(n_clusters, 1);
  for (size_t i = 0; i < n_clusters; ++i) {
    ClusterOutput& co = out.clusters[i];
    co.raw_centre = db.clusters[i].centre;
    co.cah = cah_values[i];
    co.rls = estimates[i];
    Cluster c = std::move(db.clusters[i]);
    if (estimates[i]) {
      const Vec2 v = estimates[i]->v;
      c.points = correct_distortion(c.points, v, cloud_.frame_times(), cloud_.reference_time());
      const double heading = v.norm() > 1e-9 ? std::atan2(v.y, v.x) : c.bbox.yaw;
      reorient_cluster(c, heading);
      c.velocity = v;
      c.cah_seed = seeds[i];
      inlier_counts[i] = estimates[i]->inlier_count;
    } else {
      out.degenerate_clusters += 1;
    }
    tracked_clusters[i] = c;
    co.cluster = std::move(c);
  }

  RlsConfig merge_cfg = rls_cfg;
  merge_cfg.rng_seed = derive_seed(frame_seed, 0x6d65726765ULL);
  const TrackerStepResult step = tracker_.step(tracked_clusters, inlier_counts, frame.timestamp,
                                               merge_cfg, cfg_.gate_pos, cfg_.gate_vel, cfg_.exec);
  out.association = step.association;
  out.tracks = tracker_.tracks();
  out.pipeline_ms = ms_since(t_start);

  // Baselines run on the identical cluster observations; evaluation-only,
  // kept out of the timed path.
  if (cfg_.compute_baselines) {
    for (size_t i = 0; i < n_clusters; ++i) {
      if (cluster_obs[i].size() < 2) continue;
      out.clusters[i].ols = ols_baseline(cluster_obs[i]);
      out.clusters[i].ransac =
          ransac_ols_baseline(cluster_obs[i], cfg_.ransac.iters, cfg_.ransac.inlier_tol,
                              derive_seed(frame_seed, 0x72616e736163ULL + i));
    }
  }

  prev_raw_centres_.clear();
  for (const ClusterOutput& co : out.clusters) prev_raw_centres_.push_back(co.raw_centre);
  prev_time_ = frame.timestamp;
  has_prev_ = true;
  return out;
}

}  // namespace eot

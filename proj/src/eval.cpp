#include "eot/eval.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace eot {

using nlohmann::ordered_json;

namespace {

const TargetTruth* nearest_target(const FrameTruth& truth, const Vec2& p, double gate) {
  const TargetTruth* best = nullptr;
  double best_d = gate;
  for (const TargetTruth& t : truth.targets) {
    const double d = (t.centre - p).norm();
    if (d <= best_d) {
      best_d = d;
      best = &t;
    }
  }
  return best;
}

void evaluate_frame(const FrameOutput& out, const FrameTruth& truth, const RunConfig& run,
                    RunResult& result) {
  for (const ClusterOutput& co : out.clusters) {
    result.total_clusters += 1;
    if (!co.rls) {
      result.degenerate_clusters += 1;
      continue;
    }
    const TargetTruth* target = nearest_target(truth, co.cluster.centre, run.match_gate);
    if (!target) continue;
    const double true_speed = target->velocity.norm();
    result.rls_errors.push_back(co.rls->v.norm() - true_speed);
    if (co.ols) result.ols_errors.push_back(co.ols->norm() - true_speed);
    if (co.ransac) result.ransac_errors.push_back(co.ransac->norm() - true_speed);
    if (co.cah) result.cah_errors.push_back(co.cah->norm() - true_speed);
  }

  for (const TargetTruth& target : truth.targets) {
    const Track* best = nullptr;
    double best_d = std::numeric_limits<double>::max();
    for (const Track& t : out.tracks) {
      if (t.status != TrackStatus::valid) continue;
      const double d = (Vec2{t.state(0), t.state(1)} - target.centre).norm();
      if (d < best_d) {
        best_d = d;
        best = &t;
      }
    }
    if (best && best_d <= run.match_gate) {
      result.track_pos.push_back({out.frame_index, out.t, target.id, best_d});
      if (target.id == 0) {
        result.extents.push_back({out.frame_index, out.t, best->state(4), best->state(5),
                                  target.length, target.width});
      }
    }
  }

  result.timing.push_back({out.frame_index, out.t, out.velocity_ms, out.pipeline_ms,
                           out.raw_points, out.clusters.size()});
}

}  // namespace

double RunResult::pos_rmse() const {
  if (track_pos.empty()) return 0.0;
  double sq = 0.0;
  for (const TrackPosSample& s : track_pos) sq += s.error * s.error;
  return std::sqrt(sq / static_cast<double>(track_pos.size()));
}

std::map<std::string, SpeedErrorStats> RunResult::algorithm_stats() const {
  std::map<std::string, SpeedErrorStats> out;
  if (!rls_errors.empty()) out["rls"] = stats_from_errors(rls_errors);
  if (!ols_errors.empty()) out["ols"] = stats_from_errors(ols_errors);
  if (!ransac_errors.empty()) out["ransac"] = stats_from_errors(ransac_errors);
  if (!cah_errors.empty()) out["cah"] = stats_from_errors(cah_errors);
  return out;
}

RunResult run_scenario(const Scenario& scenario, const AppConfig& cfg, std::uint64_t seed,
                       bool keep_frames) {
  RunResult result;
  result.scenario_label = scenario.label;
  result.seed = seed;

  Pipeline pipeline(cfg.pipeline_config(), scenario.mount, cfg.flow_field(), seed);
  const double dt = 1.0 / cfg.sensor.frame_rate;
  const long n_frames = static_cast<long>(std::floor(scenario.duration * cfg.sensor.frame_rate)) + 1;

  for (long k = 0; k < n_frames; ++k) {
    const double t = k * dt;
    std::mt19937_64 rng(derive_seed(seed ^ 0x73696d756c617465ULL, static_cast<std::uint64_t>(k)));
    SimFrame sim = generate_frame(scenario, t, k, cfg.sensor, cfg.noise, rng);
    FrameOutput out = pipeline.process(sim.frame);
    evaluate_frame(out, sim.truth, cfg.run, result);
    if (keep_frames) result.frames.push_back({std::move(out), std::move(sim.truth)});
  }
  return result;
}

RunResult run_stream(const RecordStream& stream, const AppConfig& cfg, std::uint64_t seed,
                     const std::string& label, bool keep_frames) {
  RunResult result;
  result.scenario_label = label;
  result.seed = seed;

  Pipeline pipeline(cfg.pipeline_config(), stream.mount, cfg.flow_field(), seed);
  for (size_t k = 0; k < stream.frames.size(); ++k) {
    FrameOutput out = pipeline.process(stream.frames[k]);
    evaluate_frame(out, stream.truths[k], cfg.run, result);
    if (keep_frames) result.frames.push_back({std::move(out), stream.truths[k]});
  }
  return result;
}

ordered_json build_report(const RunResult& result, const AppConfig& cfg) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["scenario"] = result.scenario_label;
  j["seed"] = result.seed;
  j["frames"] = result.timing.size();
  j["clusters"] = result.total_clusters;
  j["degenerate_clusters"] = result.degenerate_clusters;

  ordered_json algos = ordered_json::object();
  for (const auto& [name, stats] : result.algorithm_stats()) {
    algos[name] = {{"mean", stats.mean},
                   {"median", stats.median},
                   {"variance", stats.variance},
                   {"samples", stats.samples}};
  }
  j["algorithms"] = algos;

  ordered_json extents = ordered_json::array();
  for (const ExtentsSample& e : result.extents) {
    extents.push_back({{"frame", e.frame}, {"t", e.t}, {"l", e.l}, {"w", e.w},
                       {"l_true", e.l_true}, {"w_true", e.w_true}});
  }
  j["tracking"] = {{"pos_rmse", result.pos_rmse()},
                   {"pos_samples", result.track_pos.size()},
                   {"extents_series", extents}};
  j["config"] = config_to_json(cfg);
  return j;
}

std::string traces_to_string(const RunResult& result) {
  std::ostringstream os;
  for (const FrameEval& fe : result.frames) {
    const FrameOutput& f = fe.output;
    ordered_json j;
    j["frame"] = f.frame_index;
    j["t"] = f.t;
    ordered_json clusters = ordered_json::array();
    for (size_t i = 0; i < f.clusters.size(); ++i) {
      const ClusterOutput& c = f.clusters[i];
      ordered_json cj;
      cj["n"] = c.cluster.points.size();
      cj["x"] = c.cluster.centre.x;
      cj["y"] = c.cluster.centre.y;
      cj["l"] = c.cluster.bbox.length;
      cj["w"] = c.cluster.bbox.width;
      if (c.rls) {
        cj["vx"] = c.rls->v.x;
        cj["vy"] = c.rls->v.y;
        cj["reproj"] = c.rls->reprojection_error;
        cj["inliers"] = c.rls->inlier_count;
        cj["filter"] = c.rls->filter_index;
      }
      if (c.ols) cj["ols"] = {c.ols->x, c.ols->y};
      if (c.ransac) cj["ransac"] = {c.ransac->x, c.ransac->y};
      if (c.cah) cj["cah"] = {c.cah->x, c.cah->y};
      if (i < f.association.assignment.size() && f.association.assignment[i]) {
        cj["track"] = *f.association.assignment[i];
      }
      clusters.push_back(cj);
    }
    j["clusters"] = clusters;
    ordered_json tracks = ordered_json::array();
    for (const Track& t : f.tracks) {
      tracks.push_back({{"id", t.id},
                        {"valid", t.status == TrackStatus::valid},
                        {"x", t.state(0)}, {"y", t.state(1)},
                        {"vx", t.state(2)}, {"vy", t.state(3)},
                        {"l", t.state(4)}, {"w", t.state(5)},
                        {"hits", t.hits}, {"misses", t.misses}});
    }
    j["tracks"] = tracks;
    os << j.dump() << '\n';
  }
  return os.str();
}

void write_run_artifacts(const RunResult& result, const AppConfig& cfg,
                         const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream os(out_dir + "/report.json");
    os << build_report(result, cfg).dump(2) << '\n';
  }
  {
    std::ofstream os(out_dir + "/traces.ndjson");
    os << traces_to_string(result);
  }
  {
    std::ofstream os(out_dir + "/timing.csv");
    os << "frame,t,points,clusters,velocity_ms,pipeline_ms\n";
    for (const TimingSample& s : result.timing) {
      os << s.frame << ',' << s.t << ',' << s.points << ',' << s.clusters << ','
         << s.velocity_ms << ',' << s.pipeline_ms << '\n';
    }
  }
}

std::vector<BenchRow> bench_sweep(const std::vector<int>& object_counts, const AppConfig& cfg,
                                  std::uint64_t seed, double duration) {
  AppConfig bench_cfg = cfg;
  bench_cfg.run.compute_baselines = false;
  std::vector<BenchRow> rows;
  for (const int n : object_counts) {
    const Scenario scenario = dense_scenario(n, duration);
    const RunResult r = run_scenario(scenario, bench_cfg, seed, /*keep_frames=*/false);
    BenchRow row;
    row.objects = n;
    row.frames = static_cast<long>(r.timing.size());
    for (const TimingSample& s : r.timing) {
      row.points_mean += static_cast<double>(s.points);
      row.velocity_mean_ms += s.velocity_ms;
      row.velocity_max_ms = std::max(row.velocity_max_ms, s.velocity_ms);
      row.pipeline_mean_ms += s.pipeline_ms;
      row.pipeline_max_ms = std::max(row.pipeline_max_ms, s.pipeline_ms);
    }
    if (row.frames > 0) {
      row.points_mean /= static_cast<double>(row.frames);
      row.velocity_mean_ms /= static_cast<double>(row.frames);
      row.pipeline_mean_ms /= static_cast<double>(row.frames);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "objects,frames,points_mean,velocity_mean_ms,velocity_max_ms,pipeline_mean_ms,pipeline_max_ms\n";
  for (const BenchRow& r : rows) {
    os << r.objects << ',' << r.frames << ',' << r.points_mean << ',' << r.velocity_mean_ms << ','
       << r.velocity_max_ms << ',' << r.pipeline_mean_ms << ',' << r.pipeline_max_ms << '\n';
  }
  return os.str();
}

}  // namespace eot

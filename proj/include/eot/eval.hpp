#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "eot/config.hpp"
#include "eot/metrics.hpp"
#include "eot/pipeline.hpp"
#include "eot/records.hpp"
#include "eot/simulator.hpp"

namespace eot {

inline constexpr int kReportSchemaVersion = 1;

struct FrameEval {
  FrameOutput output;
  FrameTruth truth;
};

struct TrackPosSample {
  long frame = 0;
  double t = 0.0;
  int target_id = 0;
  double error = 0.0;  // m, valid-track position error vs truth centre
};

struct ExtentsSample {
  long frame = 0;
  double t = 0.0;
  double l = 0.0, w = 0.0;
  double l_true = 0.0, w_true = 0.0;
};

struct TimingSample {
  long frame = 0;
  double t = 0.0;
  double velocity_ms = 0.0;
  double pipeline_ms = 0.0;
  size_t points = 0;
  size_t clusters = 0;
};

struct RunResult {
  std::string scenario_label;
  std::uint64_t seed = 0;
  std::vector<FrameEval> frames;
  std::vector<double> rls_errors;     // signed speed errors vs ground truth
  std::vector<double> ols_errors;
  std::vector<double> ransac_errors;
  std::vector<double> cah_errors;
  std::vector<TrackPosSample> track_pos;
  std::vector<ExtentsSample> extents;
  std::vector<TimingSample> timing;
  long total_clusters = 0;
  long degenerate_clusters = 0;

  double pos_rmse() const;
  std::map<std::string, SpeedErrorStats> algorithm_stats() const;
};

/// Simulates the scenario frame by frame and drives the pipeline over it;
/// collects per-algorithm speed errors (clusters matched to truth targets by
/// centre within run.match_gate), tracking errors and timings.
RunResult run_scenario(const Scenario& scenario, const AppConfig& cfg, std::uint64_t seed,
                       bool keep_frames = true);

/// Same evaluation over a pre-recorded frame stream.
RunResult run_stream(const RecordStream& stream, const AppConfig& cfg, std::uint64_t seed,
                     const std::string& label = "stream", bool keep_frames = true);

/// Deterministic report (no wall-clock content).
nlohmann::ordered_json build_report(const RunResult& result, const AppConfig& cfg);

/// Writes report.json, traces.ndjson and timing.csv into out_dir.
void write_run_artifacts(const RunResult& result, const AppConfig& cfg, const std::string& out_dir);

std::string traces_to_string(const RunResult& result);

struct BenchRow {
  int objects = 0;
  long frames = 0;
  double points_mean = 0.0;
  double velocity_mean_ms = 0.0;
  double velocity_max_ms = 0.0;
  double pipeline_mean_ms = 0.0;
  double pipeline_max_ms = 0.0;
};

/// Per-frame latency sweep over dense-traffic scenarios of increasing object
/// count; baselines are disabled so only the production path is timed.
std::vector<BenchRow> bench_sweep(const std::vector<int>& object_counts, const AppConfig& cfg,
                                  std::uint64_t seed, double duration = 7.5);

std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace eot

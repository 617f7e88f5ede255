#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "eot/pipeline.hpp"
#include "eot/simulator.hpp"

namespace eot {

inline constexpr int kConfigSchemaVersion = 1;

struct RunConfig {
  bool parallel = true;
  bool compute_baselines = true;
  double cah_gate = 3.0;           // m
  double match_gate = 6.0;         // m, cluster/track <-> truth matching
  double max_degenerate_ratio = 0.5;
  double ego_max_skew = 0.010;     // s
};

/// Full application configuration: pipeline parameters plus the simulator's
/// sensor/noise blocks and run options.
struct AppConfig {
  PreprocessConfig preprocess;
  DbscanParams dbscan;
  RlsConfig rls;
  RansacConfig ransac;
  double gate_pos = 9.0;
  double gate_vel = 9.0;
  KfConfig kf;
  SensorModel sensor;
  NoiseModel noise;
  RunConfig run;
  std::optional<nlohmann::json> flow;  // inline flow-field block

  PipelineConfig pipeline_config() const;
  FlowField flow_field() const;
};

AppConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const AppConfig& cfg);

AppConfig load_config(const std::string& path);

/// Applies EOT_<SECTION>_<FIELD> environment overrides (e.g.
/// EOT_RLS_NUM_FILTERS=12, EOT_NOISE_OUTLIER_PROB=0.1). Returns the names of
/// the fields that were overridden.
std::vector<std::string> apply_env_overrides(AppConfig& cfg);

}  // namespace eot

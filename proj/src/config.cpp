#include "eot/config.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace eot {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void get_diag(const json& j, const char* key, Eigen::Matrix<double, 6, 1>& out) {
  if (!j.contains(key)) return;
  const auto arr = j.at(key).get<std::vector<double>>();
  if (arr.size() != 6) throw std::invalid_argument(std::string("config: ") + key + " needs 6 entries");
  for (int i = 0; i < 6; ++i) out(i) = arr[i];
}

std::vector<double> diag_to_vec(const Eigen::Matrix<double, 6, 1>& d) {
  return {d(0), d(1), d(2), d(3), d(4), d(5)};
}

}  // namespace

PipelineConfig AppConfig::pipeline_config() const {
  PipelineConfig p;
  p.preprocess = preprocess;
  p.dbscan = dbscan;
  p.rls = rls;
  p.ransac = ransac;
  p.gate_pos = gate_pos;
  p.gate_vel = gate_vel;
  p.kf = kf;
  p.cah_gate = run.cah_gate;
  p.exec = run.parallel ? ExecPolicy::parallel : ExecPolicy::serial;
  p.compute_baselines = run.compute_baselines;
  return p;
}

FlowField AppConfig::flow_field() const {
  if (!flow) return FlowField::none();
  return FlowField::parse(flow->dump());
}

AppConfig config_from_json(const json& j) {
  AppConfig cfg;
  if (j.contains("preprocess")) {
    const auto& s = j.at("preprocess");
    get_if(s, "static_threshold", cfg.preprocess.static_threshold);
    get_if(s, "accumulation_depth", cfg.preprocess.accumulation_depth);
  }
  if (j.contains("dbscan")) {
    const auto& s = j.at("dbscan");
    get_if(s, "semi_major", cfg.dbscan.semi_major);
    get_if(s, "semi_minor", cfg.dbscan.semi_minor);
    get_if(s, "circle_radius", cfg.dbscan.circle_radius);
    get_if(s, "min_pts", cfg.dbscan.min_pts);
  }
  if (j.contains("rls")) {
    const auto& s = j.at("rls");
    get_if(s, "outlier_delta_threshold", cfg.rls.outlier_delta_threshold);
    get_if(s, "warmup_updates", cfg.rls.warmup_updates);
    get_if(s, "num_filters", cfg.rls.num_filters);
    get_if(s, "p0_scale", cfg.rls.p0_scale);
  }
  if (j.contains("ransac")) {
    const auto& s = j.at("ransac");
    get_if(s, "iters", cfg.ransac.iters);
    get_if(s, "inlier_tol", cfg.ransac.inlier_tol);
  }
  if (j.contains("association")) {
    const auto& s = j.at("association");
    get_if(s, "gate_pos", cfg.gate_pos);
    get_if(s, "gate_vel", cfg.gate_vel);
  }
  if (j.contains("kf")) {
    const auto& s = j.at("kf");
    get_if(s, "sigma_accel", cfg.kf.sigma_accel);
    get_if(s, "q_extent", cfg.kf.q_extent);
    get_diag(s, "r_diag", cfg.kf.r_diag);
    get_diag(s, "p0_diag", cfg.kf.p0_diag);
    get_if(s, "confirm_hits", cfg.kf.confirm_hits);
    get_if(s, "delete_misses", cfg.kf.delete_misses);
    get_if(s, "init_l", cfg.kf.init_l);
    get_if(s, "init_w", cfg.kf.init_w);
  }
  if (j.contains("sensor")) {
    const auto& s = j.at("sensor");
    get_if(s, "range_sigma", cfg.sensor.range_sigma);
    get_if(s, "pos_resolution", cfg.sensor.pos_resolution);
    get_if(s, "separation", cfg.sensor.separation);
    get_if(s, "doppler_sigma", cfg.sensor.doppler_sigma);
    get_if(s, "fov", cfg.sensor.fov);
    get_if(s, "max_range", cfg.sensor.max_range);
    get_if(s, "min_range", cfg.sensor.min_range);
    get_if(s, "frame_rate", cfg.sensor.frame_rate);
  }
  if (j.contains("noise")) {
    const auto& s = j.at("noise");
    get_if(s, "outlier_prob", cfg.noise.outlier_prob);
    get_if(s, "outlier_offset_min", cfg.noise.outlier_offset_min);
    get_if(s, "outlier_offset_max", cfg.noise.outlier_offset_max);
    get_if(s, "dropout_prob", cfg.noise.dropout_prob);
    get_if(s, "clutter_rate", cfg.noise.clutter_rate);
    get_if(s, "ego_vel_sigma", cfg.noise.ego_vel_sigma);
  }
  if (j.contains("run")) {
    const auto& s = j.at("run");
    get_if(s, "parallel", cfg.run.parallel);
    get_if(s, "compute_baselines", cfg.run.compute_baselines);
    get_if(s, "cah_gate", cfg.run.cah_gate);
    get_if(s, "match_gate", cfg.run.match_gate);
    get_if(s, "max_degenerate_ratio", cfg.run.max_degenerate_ratio);
    get_if(s, "ego_max_skew", cfg.run.ego_max_skew);
  }
  if (j.contains("flow")) cfg.flow = j.at("flow");
  return cfg;
}

ordered_json config_to_json(const AppConfig& cfg) {
  ordered_json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["preprocess"] = {{"static_threshold", cfg.preprocess.static_threshold},
                     {"accumulation_depth", cfg.preprocess.accumulation_depth}};
  j["dbscan"] = {{"semi_major", cfg.dbscan.semi_major},
                 {"semi_minor", cfg.dbscan.semi_minor},
                 {"circle_radius", cfg.dbscan.circle_radius},
                 {"min_pts", cfg.dbscan.min_pts}};
  j["rls"] = {{"outlier_delta_threshold", cfg.rls.outlier_delta_threshold},
              {"warmup_updates", cfg.rls.warmup_updates},
              {"num_filters", cfg.rls.num_filters},
              {"p0_scale", cfg.rls.p0_scale}};
  j["ransac"] = {{"iters", cfg.ransac.iters}, {"inlier_tol", cfg.ransac.inlier_tol}};
  j["association"] = {{"gate_pos", cfg.gate_pos}, {"gate_vel", cfg.gate_vel}};
  j["kf"] = {{"sigma_accel", cfg.kf.sigma_accel},
             {"q_extent", cfg.kf.q_extent},
             {"r_diag", diag_to_vec(cfg.kf.r_diag)},
             {"p0_diag", diag_to_vec(cfg.kf.p0_diag)},
             {"confirm_hits", cfg.kf.confirm_hits},
             {"delete_misses", cfg.kf.delete_misses},
             {"init_l", cfg.kf.init_l},
             {"init_w", cfg.kf.init_w}};
  j["sensor"] = {{"range_sigma", cfg.sensor.range_sigma},
                 {"pos_resolution", cfg.sensor.pos_resolution},
                 {"separation", cfg.sensor.separation},
                 {"doppler_sigma", cfg.sensor.doppler_sigma},
                 {"fov", cfg.sensor.fov},
                 {"max_range", cfg.sensor.max_range},
                 {"min_range", cfg.sensor.min_range},
                 {"frame_rate", cfg.sensor.frame_rate}};
  j["noise"] = {{"outlier_prob", cfg.noise.outlier_prob},
                {"outlier_offset_min", cfg.noise.outlier_offset_min},
                {"outlier_offset_max", cfg.noise.outlier_offset_max},
                {"dropout_prob", cfg.noise.dropout_prob},
                {"clutter_rate", cfg.noise.clutter_rate},
                {"ego_vel_sigma", cfg.noise.ego_vel_sigma}};
  j["run"] = {{"parallel", cfg.run.parallel},
              {"compute_baselines", cfg.run.compute_baselines},
              {"cah_gate", cfg.run.cah_gate},
              {"match_gate", cfg.run.match_gate},
              {"max_degenerate_ratio", cfg.run.max_degenerate_ratio},
              {"ego_max_skew", cfg.run.ego_max_skew}};
  if (cfg.flow) j["flow"] = *cfg.flow;
  return j;
}

AppConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    throw std::runtime_error("config: parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

std::vector<std::string> apply_env_overrides(AppConfig& cfg) {
  std::vector<std::string> applied;
  const auto d = [&](const char* name, double& field) {
    if (const char* v = std::getenv(name)) {
      field = std::stod(v);
      applied.push_back(name);
    }
  };
  const auto i = [&](const char* name, int& field) {
    if (const char* v = std::getenv(name)) {
      field = std::stoi(v);
      applied.push_back(name);
    }
  };
  const auto b = [&](const char* name, bool& field) {
    if (const char* v = std::getenv(name)) {
      const std::string s(v);
      field = (s == "1" || s == "true" || s == "on");
      applied.push_back(name);
    }
  };

  d("EOT_PREPROCESS_STATIC_THRESHOLD", cfg.preprocess.static_threshold);
  i("EOT_PREPROCESS_ACCUMULATION_DEPTH", cfg.preprocess.accumulation_depth);
  d("EOT_DBSCAN_SEMI_MAJOR", cfg.dbscan.semi_major);
  d("EOT_DBSCAN_SEMI_MINOR", cfg.dbscan.semi_minor);
  d("EOT_DBSCAN_CIRCLE_RADIUS", cfg.dbscan.circle_radius);
  i("EOT_DBSCAN_MIN_PTS", cfg.dbscan.min_pts);
  d("EOT_RLS_OUTLIER_DELTA_THRESHOLD", cfg.rls.outlier_delta_threshold);
  i("EOT_RLS_WARMUP_UPDATES", cfg.rls.warmup_updates);
  i("EOT_RLS_NUM_FILTERS", cfg.rls.num_filters);
  d("EOT_RLS_P0_SCALE", cfg.rls.p0_scale);
  i("EOT_RANSAC_ITERS", cfg.ransac.iters);
  d("EOT_RANSAC_INLIER_TOL", cfg.ransac.inlier_tol);
  d("EOT_ASSOCIATION_GATE_POS", cfg.gate_pos);
  d("EOT_ASSOCIATION_GATE_VEL", cfg.gate_vel);
  d("EOT_KF_SIGMA_ACCEL", cfg.kf.sigma_accel);
  d("EOT_KF_Q_EXTENT", cfg.kf.q_extent);
  i("EOT_KF_CONFIRM_HITS", cfg.kf.confirm_hits);
  i("EOT_KF_DELETE_MISSES", cfg.kf.delete_misses);
  d("EOT_KF_INIT_L", cfg.kf.init_l);
  d("EOT_KF_INIT_W", cfg.kf.init_w);
  d("EOT_SENSOR_RANGE_SIGMA", cfg.sensor.range_sigma);
  d("EOT_SENSOR_POS_RESOLUTION", cfg.sensor.pos_resolution);
  d("EOT_SENSOR_SEPARATION", cfg.sensor.separation);
  d("EOT_SENSOR_DOPPLER_SIGMA", cfg.sensor.doppler_sigma);
  d("EOT_SENSOR_FOV", cfg.sensor.fov);
  d("EOT_SENSOR_MAX_RANGE", cfg.sensor.max_range);
  d("EOT_SENSOR_MIN_RANGE", cfg.sensor.min_range);
  d("EOT_SENSOR_FRAME_RATE", cfg.sensor.frame_rate);
  d("EOT_NOISE_OUTLIER_PROB", cfg.noise.outlier_prob);
  d("EOT_NOISE_OUTLIER_OFFSET_MIN", cfg.noise.outlier_offset_min);
  d("EOT_NOISE_OUTLIER_OFFSET_MAX", cfg.noise.outlier_offset_max);
  d("EOT_NOISE_DROPOUT_PROB", cfg.noise.dropout_prob);
  d("EOT_NOISE_CLUTTER_RATE", cfg.noise.clutter_rate);
  d("EOT_NOISE_EGO_VEL_SIGMA", cfg.noise.ego_vel_sigma);
  b("EOT_RUN_PARALLEL", cfg.run.parallel);
  b("EOT_RUN_COMPUTE_BASELINES", cfg.run.compute_baselines);
  d("EOT_RUN_CAH_GATE", cfg.run.cah_gate);
  d("EOT_RUN_MATCH_GATE", cfg.run.match_gate);
  d("EOT_RUN_MAX_DEGENERATE_RATIO", cfg.run.max_degenerate_ratio);
  d("EOT_RUN_EGO_MAX_SKEW", cfg.run.ego_max_skew);
  return applied;
}

}  // namespace eot

#include "eot/records.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace eot {

using nlohmann::ordered_json;

void write_header_record(std::ostream& os, const SensorMount& mount, double frame_rate) {
  ordered_json j;
  j["type"] = "header";
  j["schema_version"] = kRecordSchemaVersion;
  j["mount"] = {{"x", mount.x_s}, {"y", mount.y_s}, {"theta", mount.theta_s}};
  j["frame_rate"] = frame_rate;
  os << j.dump() << '\n';
}

void write_frame_records(std::ostream& os, const SimFrame& sim, bool include_truth) {
  const Frame& f = sim.frame;
  {
    ordered_json j;
    j["type"] = "ego";
    j["frame"] = f.frame_index;
    j["t"] = f.timestamp;
    j["x"] = f.ego.x_e;
    j["y"] = f.ego.y_e;
    j["alpha"] = f.ego.alpha;
    j["vx"] = f.ego.vx_e;
    j["vy"] = f.ego.vy_e;
    j["omega"] = f.ego.omega_e;
    os << j.dump() << '\n';
  }
  for (size_t i = 0; i < f.points.size(); ++i) {
    const RadarPoint& p = f.points[i];
    ordered_json j;
    j["type"] = "point";
    j["frame"] = f.frame_index;
    j["t"] = f.timestamp;
    j["x"] = p.x_w;
    j["y"] = p.y_w;
    j["rr"] = p.range_rate_meas;
    j["bearing"] = p.bearing_sensor;
    j["sensor"] = p.sensor_id;
    if (include_truth && i < sim.truth.point_labels.size()) {
      const PointTruth& pt = sim.truth.point_labels[i];
      j["gt_id"] = pt.target_id;
      j["outlier"] = pt.is_outlier;
      j["gt_vx"] = pt.velocity.x;
      j["gt_vy"] = pt.velocity.y;
    }
    os << j.dump() << '\n';
  }
  if (include_truth) {
    for (const TargetTruth& t : sim.truth.targets) {
      ordered_json j;
      j["type"] = "truth";
      j["frame"] = f.frame_index;
      j["t"] = f.timestamp;
      j["id"] = t.id;
      j["x"] = t.centre.x;
      j["y"] = t.centre.y;
      j["vx"] = t.velocity.x;
      j["vy"] = t.velocity.y;
      j["l"] = t.length;
      j["w"] = t.width;
      j["heading"] = t.heading;
      os << j.dump() << '\n';
    }
  }
}

RecordStream read_records(std::istream& is, double max_ego_skew) {
  RecordStream out;
  std::string line;
  long line_no = 0;
  bool saw_header = false;

  struct PendingFrame {
    std::vector<RadarPoint> points;
    std::vector<PointTruth> labels;
    std::vector<TargetTruth> targets;
    double t = 0.0;
    bool any_truth = false;
  };
  std::map<long, PendingFrame> frames;
  std::vector<EgoState> egos;

  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      throw std::runtime_error("record stream: parse error at line " + std::to_string(line_no) +
                               ": " + e.what());
    }
    const std::string type = j.value("type", "");
    try {
      if (type == "header") {
        saw_header = true;
        out.mount = {j.at("mount").at("x").get<double>(), j.at("mount").at("y").get<double>(),
                     j.at("mount").at("theta").get<double>()};
        out.frame_rate = j.value("frame_rate", 14.0);
      } else if (type == "point") {
        PendingFrame& pf = frames[j.at("frame").get<long>()];
        pf.t = j.at("t").get<double>();
        pf.points.push_back({j.at("x").get<double>(), j.at("y").get<double>(),
                             j.at("rr").get<double>(), j.at("bearing").get<double>(),
                             pf.t, j.value("sensor", 0)});
        PointTruth label;
        if (j.contains("gt_id")) {
          label.target_id = j.at("gt_id").get<int>();
          label.is_outlier = j.value("outlier", false);
          label.velocity = {j.value("gt_vx", 0.0), j.value("gt_vy", 0.0)};
          pf.any_truth = true;
        }
        pf.labels.push_back(label);
      } else if (type == "ego") {
        EgoState e;
        e.x_e = j.at("x").get<double>();
        e.y_e = j.at("y").get<double>();
        e.alpha = j.at("alpha").get<double>();
        e.vx_e = j.at("vx").get<double>();
        e.vy_e = j.at("vy").get<double>();
        e.omega_e = j.at("omega").get<double>();
        e.timestamp = j.at("t").get<double>();
        egos.push_back(e);
      } else if (type == "truth") {
        PendingFrame& pf = frames[j.at("frame").get<long>()];
        pf.t = j.at("t").get<double>();
        pf.any_truth = true;
        pf.targets.push_back({j.at("id").get<int>(),
                              {j.at("x").get<double>(), j.at("y").get<double>()},
                              {j.at("vx").get<double>(), j.at("vy").get<double>()},
                              j.at("l").get<double>(), j.at("w").get<double>(),
                              j.value("heading", 0.0)});
      } else {
        throw std::runtime_error("unknown record type '" + type + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("record stream: bad record at line " + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  if (!saw_header) throw std::runtime_error("record stream: missing header record");

  for (auto& [index, pf] : frames) {
    Frame f;
    f.frame_index = index;
    f.timestamp = pf.t;
    f.points = std::move(pf.points);

    double best = std::numeric_limits<double>::max();
    const EgoState* best_ego = nullptr;
    for (const EgoState& e : egos) {
      const double dt = std::abs(e.timestamp - pf.t);
      if (dt < best) {
        best = dt;
        best_ego = &e;
      }
    }
    if (!best_ego || best > max_ego_skew) {
      throw std::runtime_error("record stream: no ego state within " +
                               std::to_string(max_ego_skew) + " s of frame " +
                               std::to_string(index));
    }
    f.ego = *best_ego;

    FrameTruth truth;
    truth.targets = std::move(pf.targets);
    truth.point_labels = std::move(pf.labels);
    truth.true_ego = f.ego;
    out.has_truth = out.has_truth || pf.any_truth;

    out.frames.push_back(std::move(f));
    out.truths.push_back(std::move(truth));
  }
  return out;
}

}  // namespace eot

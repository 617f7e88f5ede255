#include "eot/scenario_io.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace eot {

using nlohmann::json;

namespace {

Vec2 vec_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

TrajectorySegment segment_from_json(const json& j) {
  TrajectorySegment seg;
  const std::string type = j.at("type").get<std::string>();
  seg.duration = j.at("duration").get<double>();
  if (type == "line") {
    seg.type = TrajectorySegment::Type::line;
    seg.start = vec_from(j.at("start"));
    seg.heading = j.at("heading").get<double>();
    seg.v0 = j.at("v0").get<double>();
    seg.v1 = j.at("v1").get<double>();
  } else if (type == "arc") {
    seg.type = TrajectorySegment::Type::arc;
    seg.centre = vec_from(j.at("centre"));
    seg.radius = j.at("radius").get<double>();
    seg.start_angle = j.at("start_angle").get<double>();
    seg.angular_speed = j.at("angular_speed").get<double>();
  } else if (type == "hold") {
    seg.type = TrajectorySegment::Type::hold;
    seg.pos = vec_from(j.at("pos"));
    seg.heading = j.value("heading", 0.0);
  } else {
    throw std::invalid_argument("scenario: unknown segment type '" + type + "'");
  }
  return seg;
}

TrajectoryFn trajectory_from_json(const json& j) {
  std::vector<TrajectorySegment> segs;
  for (const auto& s : j.at("segments")) segs.push_back(segment_from_json(s));
  return segment_trajectory(std::move(segs));
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  if (j.contains("builtin")) {
    const std::string name = j.at("builtin").get<std::string>();
    Scenario s;
    if (name == "a") {
      s = scenario_a();
    } else if (name == "b") {
      s = scenario_b();
    } else if (name == "c") {
      s = scenario_c();
    } else if (name == "circle") {
      s = circle_scenario(j.value("radius", 18.0), j.value("speed", 8.0));
    } else if (name == "dense") {
      s = dense_scenario(j.value("objects", 30), j.value("duration", 7.5));
    } else {
      throw std::invalid_argument("scenario: unknown builtin '" + name + "'");
    }
    if (j.contains("duration")) s.duration = j.at("duration").get<double>();
    return s;
  }

  Scenario s;
  s.label = j.value("label", "custom");
  s.duration = j.at("duration").get<double>();
  if (j.contains("mount")) {
    const auto& m = j.at("mount");
    s.mount = {m.value("x", 2.0), m.value("y", 0.0), m.value("theta", 0.0)};
  }
  s.ego = j.contains("ego") ? trajectory_from_json(j.at("ego")) : hold_trajectory({0, 0}, 0.0);
  for (const auto& t : j.at("targets")) {
    TargetSpec spec;
    spec.length = t.value("length", 4.0);
    spec.width = t.value("width", 2.0);
    spec.trajectory = trajectory_from_json(t);
    s.targets.push_back(std::move(spec));
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scenario: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    throw std::runtime_error("scenario: parse error in " + path + ": " + e.what());
  }
  return scenario_from_json(j);
}

Scenario resolve_scenario(const std::string& name_or_path) {
  if (name_or_path == "a" || name_or_path == "A") return scenario_a();
  if (name_or_path == "b" || name_or_path == "B") return scenario_b();
  if (name_or_path == "c" || name_or_path == "C") return scenario_c();
  if (name_or_path == "circle") return circle_scenario();
  if (std::filesystem::exists(name_or_path)) return load_scenario(name_or_path);
  throw std::runtime_error("scenario: '" + name_or_path +
                           "' is neither a builtin name (a, b, c, circle) nor a file");
}

}  // namespace eot

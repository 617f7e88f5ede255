#include "eot/flow_field.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace eot {

FlowField FlowField::none() {
  FlowField f;
  f.fn_ = [](double, double) { return std::nullopt; };
  return f;
}

FlowField FlowField::uniform(double direction) {
  FlowField f;
  const double d = normalize_angle(direction);
  f.fn_ = [d](double, double) { return std::optional<double>{d}; };
  return f;
}

FlowField FlowField::regions(std::vector<Region> regions) {
  FlowField f;
  f.fn_ = [regions = std::move(regions)](double x, double y) -> std::optional<double> {
    for (const Region& r : regions) {
      if (x >= r.x_min && x <= r.x_max && y >= r.y_min && y <= r.y_max) {
        return normalize_angle(r.direction);
      }
    }
    return std::nullopt;
  };
  return f;
}

FlowField FlowField::grid(Vec2 origin, double cell_size, int nx, int ny,
                          std::vector<std::optional<double>> values) {
  if (cell_size <= 0 || nx <= 0 || ny <= 0 ||
      values.size() != static_cast<size_t>(nx) * static_cast<size_t>(ny)) {
    throw std::invalid_argument("FlowField::grid: inconsistent dimensions");
  }
  FlowField f;
  f.fn_ = [=, values = std::move(values)](double x, double y) -> std::optional<double> {
    const int ix = static_cast<int>(std::floor((x - origin.x) / cell_size));
    const int iy = static_cast<int>(std::floor((y - origin.y) / cell_size));
    if (ix < 0 || ix >= nx || iy < 0 || iy >= ny) return std::nullopt;
    const auto& v = values[static_cast<size_t>(iy) * nx + ix];
    if (!v) return std::nullopt;
    return normalize_angle(*v);
  };
  return f;
}

FlowField FlowField::from_function(std::function<std::optional<double>(double, double)> fn) {
  FlowField f;
  f.fn_ = std::move(fn);
  return f;
}

std::optional<double> FlowField::query(double x, double y) const { return fn_(x, y); }

FlowField FlowField::parse(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  const std::string type = j.at("type").get<std::string>();
  if (type == "none") return none();
  if (type == "uniform") return uniform(j.at("direction").get<double>());
  if (type == "regions") {
    std::vector<Region> regions;
    for (const auto& r : j.at("regions")) {
      regions.push_back({r.at("x_min").get<double>(), r.at("x_max").get<double>(),
                         r.at("y_min").get<double>(), r.at("y_max").get<double>(),
                         r.at("direction").get<double>()});
    }
    return FlowField::regions(std::move(regions));
  }
  if (type == "grid") {
    std::vector<std::optional<double>> values;
    for (const auto& v : j.at("values")) {
      if (v.is_null()) {
        values.emplace_back(std::nullopt);
      } else {
        values.emplace_back(v.get<double>());
      }
    }
    return grid({j.at("x0").get<double>(), j.at("y0").get<double>()},
                j.at("cell_size").get<double>(), j.at("nx").get<int>(), j.at("ny").get<int>(),
                std::move(values));
  }
  throw std::invalid_argument("FlowField: unknown type '" + type + "'");
}

FlowField FlowField::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("FlowField: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace eot

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eot/geometry.hpp"

namespace eot {

/// Traffic-flow direction lookup. Stands in for a pre-annotated HD map:
/// regions with a known flow direction get elliptical DBSCAN neighborhoods,
/// everywhere else falls back to the circular one.
class FlowField {
 public:
  struct Region {
    double x_min, x_max, y_min, y_max;
    double direction;  // rad
  };

  /// Flow undefined everywhere.
  static FlowField none();
  /// Same direction everywhere.
  static FlowField uniform(double direction);
  /// Axis-aligned rectangles, first match wins.
  static FlowField regions(std::vector<Region> regions);
  /// Regular grid; cells may be undefined. values is row-major [ny][nx].
  static FlowField grid(Vec2 origin, double cell_size, int nx, int ny,
                        std::vector<std::optional<double>> values);
  /// Arbitrary callable (used by the simulator to sample a path tangent).
  static FlowField from_function(std::function<std::optional<double>(double, double)> fn);

  std::optional<double> query(double x, double y) const;
  std::optional<double> query(const Vec2& p) const { return query(p.x, p.y); }

  /// Parses the documented flow-field file (JSON text). Throws on bad input.
  static FlowField load(const std::string& path);
  static FlowField parse(const std::string& json_text);

 private:
  FlowField() = default;
  std::function<std::optional<double>(double, double)> fn_;
};

}  // namespace eot

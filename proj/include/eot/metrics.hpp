#pragma once

#include <utility>
#include <vector>

#include "eot/geometry.hpp"

namespace eot {

struct SpeedErrorStats {
  double mean = 0.0;
  double median = 0.0;
  double variance = 0.0;  // population
  long samples = 0;
};

/// Stats over signed speed errors ||v_est|| - ||v_true||. Estimates are
/// matched to the nearest truth sample within max_dt. Throws when nothing
/// matches.
SpeedErrorStats speed_error_stats(const std::vector<std::pair<double, Vec2>>& estimates,
                                  const std::vector<std::pair<double, Vec2>>& truth,
                                  double max_dt);

/// Stats of a raw error sample (helper shared with the evaluation driver).
SpeedErrorStats stats_from_errors(std::vector<double> errors);

}  // namespace eot

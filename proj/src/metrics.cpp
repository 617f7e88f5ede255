#include "eot/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eot {

SpeedErrorStats stats_from_errors(std::vector<double> errors) {
  if (errors.empty()) throw std::invalid_argument("stats_from_errors: empty sample");
  SpeedErrorStats s;
  s.samples = static_cast<long>(errors.size());
  double sum = 0.0;
  for (const double e : errors) sum += e;
  s.mean = sum / static_cast<double>(s.samples);
  double sq = 0.0;
  for (const double e : errors) sq += (e - s.mean) * (e - s.mean);
  s.variance = sq / static_cast<double>(s.samples);
  std::sort(errors.begin(), errors.end());
  const size_t n = errors.size();
  s.median = (n % 2 == 1) ? errors[n / 2] : 0.5 * (errors[n / 2 - 1] + errors[n / 2]);
  return s;
}

SpeedErrorStats speed_error_stats(const std::vector<std::pair<double, Vec2>>& estimates,
                                  const std::vector<std::pair<double, Vec2>>& truth,
                                  double max_dt) {
  if (estimates.empty() || truth.empty()) {
    throw std::invalid_argument("speed_error_stats: empty input");
  }
  std::vector<double> errors;
  for (const auto& [t_est, v_est] : estimates) {
    double best_dt = max_dt;
    const Vec2* best = nullptr;
    for (const auto& [t_true, v_true] : truth) {
      const double dt = std::abs(t_true - t_est);
      if (dt <= best_dt) {
        best_dt = dt;
        best = &v_true;
      }
    }
    if (best) errors.push_back(v_est.norm() - best->norm());
  }
  if (errors.empty()) throw std::invalid_argument("speed_error_stats: no matchable samples");
  return stats_from_errors(std::move(errors));
}

}  // namespace eot

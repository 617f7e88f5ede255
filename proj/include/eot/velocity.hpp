#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "eot/exec.hpp"
#include "eot/geometry.hpp"

namespace eot {

/// One Doppler observation: world-frame bearing and compensated range rate.
struct DopplerObs {
  double phi_w = 0.0;
  double r_dot = 0.0;
};

struct RlsConfig {
  double outlier_delta_threshold = 0.4;  // m/s, per velocity component
  int warmup_updates = 3;                // accepted updates before rejection kicks in
  int num_filters = 10;
  double p0_scale = 1.0;                 // P0 = p0_scale * I
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Recursive least-squares state for the 2-D velocity fit, with inlier
/// bookkeeping. P stays symmetric positive-definite through updates.
struct RlsFilter {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  Eigen::Matrix2d P = Eigen::Matrix2d::Identity();
  int update_count = 0;
  std::vector<int> inliers;
  std::vector<int> rejected;
};

struct VelocityEstimate {
  Vec2 v{};
  double reprojection_error = 0.0;  // mean |r_hat - r| over inliers
  int inlier_count = 0;
  int filter_index = 0;
  Vec2 seed{};
};

/// Finite-difference seed from cluster centre displacement.
/// Throws if t_now <= t_prev.
Vec2 cah_seed(const Vec2& centre_now, const Vec2& centre_prev, double t_now, double t_prev);

/// Single RLS update with unit forgetting:
///   k = P phi / (1 + phi' P phi),  v += k (r - phi' v),  P -= (P phi phi' P) / (1 + phi' P phi).
RlsFilter rls_update(const RlsFilter& f, double phi_w, double r_dot);

/// Feeds points in the given order; once warmup_updates updates have been
/// accepted, a point whose tentative update moves either velocity component
/// by more than the threshold is recorded as an outlier and discarded
/// without touching v or P. Throws if fewer than 2 points.
RlsFilter run_filter(std::span<const DopplerObs> points, std::span<const int> order, Vec2 seed_v0,
                     const RlsConfig& cfg);

/// Mean absolute reprojection error over the filter's inliers.
/// Throws if the filter has no inliers.
double reprojection_error(const RlsFilter& f, std::span<const DopplerObs> points);

/// Multi-start estimate: num_filters random feed orders, winner by least mean
/// reprojection error (ties: larger inlier count, then lower filter index).
/// Throws if fewer than 2 points; returns nullopt when every filter ends with
/// fewer than 2 inliers (degenerate).
std::optional<VelocityEstimate> estimate_velocity(std::span<const DopplerObs> points, Vec2 seed_v0,
                                                  const RlsConfig& cfg);

/// Closed-form least squares via the normal equations. Returns nullopt when
/// the regressor matrix is rank-deficient. Throws if fewer than 2 points.
std::optional<Vec2> ols_baseline(std::span<const DopplerObs> points);

/// 2-point-sample RANSAC with an OLS refit on the best consensus set.
/// Returns nullopt when no invertible 2-point sample exists.
std::optional<Vec2> ransac_ols_baseline(std::span<const DopplerObs> points, int iters,
                                        double inlier_tol, std::uint64_t rng_seed);

/// Per-cluster velocity estimation batch (kernel). Each cluster i runs with
/// cfg.rng_seed replaced by a stream derived from (cfg.rng_seed, i), so the
/// result is independent of the execution policy.
std::vector<std::optional<VelocityEstimate>> estimate_cluster_velocities(
    const std::vector<std::vector<DopplerObs>>& cluster_points, const std::vector<Vec2>& seeds,
    const RlsConfig& cfg, ExecPolicy policy = ExecPolicy::parallel);

/// Stream-splitting helper: a distinct 64-bit seed for substream `index`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace eot

#include "eot/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace eot {

namespace {

Eigen::Vector2d regressor(double phi_w) { return {std::cos(phi_w), std::sin(phi_w)}; }

// Fisher-Yates with an explicit engine so shuffles stay reproducible.
std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<int> dist(0, i);
    std::swap(order[i], order[dist(rng)]);
  }
  return order;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 over the combined value; cheap and collision-resistant enough
  // for substream separation.
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void RlsConfig::validate() const {
  if (outlier_delta_threshold <= 0.0) throw std::invalid_argument("RlsConfig: threshold must be > 0");
  if (warmup_updates < 0) throw std::invalid_argument("RlsConfig: warmup_updates must be >= 0");
  if (num_filters < 1) throw std::invalid_argument("RlsConfig: num_filters must be >= 1");
  if (p0_scale <= 0.0) throw std::invalid_argument("RlsConfig: p0_scale must be > 0");
}

Vec2 cah_seed(const Vec2& centre_now, const Vec2& centre_prev, double t_now, double t_prev) {
  if (t_now <= t_prev) throw std::invalid_argument("cah_seed: t_now must exceed t_prev");
  return (centre_now - centre_prev) / (t_now - t_prev);
}

RlsFilter rls_update(const RlsFilter& f, double phi_w, double r_dot) {
  const Eigen::Vector2d phi = regressor(phi_w);
  const Eigen::Vector2d p_phi = f.P * phi;
  const double denom = 1.0 + phi.dot(p_phi);
  RlsFilter out = f;
  out.v = f.v + (p_phi / denom) * (r_dot - phi.dot(f.v));
  out.P = f.P - (p_phi * p_phi.transpose()) / denom;
  out.P = 0.5 * (out.P + out.P.transpose().eval());  // keep symmetric
  out.update_count = f.update_count + 1;
  return out;
}

RlsFilter run_filter(std::span<const DopplerObs> points, std::span<const int> order, Vec2 seed_v0,
                     const RlsConfig& cfg) {
  if (points.size() < 2) throw std::invalid_argument("run_filter: need at least 2 points");
  RlsFilter f;
  f.v = {seed_v0.x, seed_v0.y};
  f.P = cfg.p0_scale * Eigen::Matrix2d::Identity();
  for (const int idx : order) {
    const DopplerObs& obs = points[idx];
    RlsFilter tentative = rls_update(f, obs.phi_w, obs.r_dot);
    if (f.update_count >= cfg.warmup_updates) {
      const Eigen::Vector2d dv = tentative.v - f.v;
      if (std::abs(dv.x()) > cfg.outlier_delta_threshold ||
          std::abs(dv.y()) > cfg.outlier_delta_threshold) {
        f.rejected.push_back(idx);
        continue;
      }
    }
    f = std::move(tentative);
    f.inliers.push_back(idx);
  }
  return f;
}

double reprojection_error(const RlsFilter& f, std::span<const DopplerObs> points) {
  if (f.inliers.empty()) throw std::invalid_argument("reprojection_error: no inliers");
  double sum = 0.0;
  for (const int idx : f.inliers) {
    const DopplerObs& obs = points[idx];
    const double r_hat = f.v.x() * std::cos(obs.phi_w) + f.v.y() * std::sin(obs.phi_w);
    sum += std::abs(r_hat - obs.r_dot);
  }
  return sum / static_cast<double>(f.inliers.size());
}

std::optional<VelocityEstimate> estimate_velocity(std::span<const DopplerObs> points, Vec2 seed_v0,
                                                  const RlsConfig& cfg) {
  cfg.validate();
  if (points.size() < 2) throw std::invalid_argument("estimate_velocity: need at least 2 points");
  const int n = static_cast<int>(points.size());

  std::optional<VelocityEstimate> best;
  for (int k = 0; k < cfg.num_filters; ++k) {
    std::mt19937_64 rng(derive_seed(cfg.rng_seed, static_cast<std::uint64_t>(k)));
    const std::vector<int> order = random_permutation(n, rng);
    const RlsFilter f = run_filter(points, order, seed_v0, cfg);
    if (static_cast<int>(f.inliers.size()) < 2) continue;
    const double err = reprojection_error(f, points);
    const int inlier_count = static_cast<int>(f.inliers.size());
    const bool wins = !best || err < best->reprojection_error ||
                      (err == best->reprojection_error && inlier_count > best->inlier_count);
    if (wins) {
      best = VelocityEstimate{{f.v.x(), f.v.y()}, err, inlier_count, k, seed_v0};
    }
  }
  return best;
}

std::optional<Vec2> ols_baseline(std::span<const DopplerObs> points) {
  if (points.size() < 2) throw std::invalid_argument("ols_baseline: need at least 2 points");
  Eigen::Matrix2d xtx = Eigen::Matrix2d::Zero();
  Eigen::Vector2d xty = Eigen::Vector2d::Zero();
  for (const DopplerObs& obs : points) {
    const Eigen::Vector2d phi = regressor(obs.phi_w);
    xtx += phi * phi.transpose();
    xty += phi * obs.r_dot;
  }
  // Regressors are unit vectors, so trace(xtx) == n; a tiny determinant
  // relative to n^2 means all bearings are (numerically) identical.
  const double n = static_cast<double>(points.size());
  if (std::abs(xtx.determinant()) < 1e-12 * n * n) return std::nullopt;
  const Eigen::Vector2d v = xtx.ldlt().solve(xty);
  return Vec2{v.x(), v.y()};
}

std::optional<Vec2> ransac_ols_baseline(std::span<const DopplerObs> points, int iters,
                                        double inlier_tol, std::uint64_t rng_seed) {
  if (points.size() < 2) throw std::invalid_argument("ransac_ols_baseline: need at least 2 points");
  const int n = static_cast<int>(points.size());
  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<int> pick(0, n - 1);

  int best_count = 0;
  double best_residual = 0.0;
  std::vector<int> best_set;
  std::vector<int> consensus;
  for (int it = 0; it < iters; ++it) {
    const int i = pick(rng);
    int j = pick(rng);
    if (i == j) continue;
    Eigen::Matrix2d a;
    a << std::cos(points[i].phi_w), std::sin(points[i].phi_w),
        std::cos(points[j].phi_w), std::sin(points[j].phi_w);
    if (std::abs(a.determinant()) < 1e-9) continue;
    const Eigen::Vector2d v = a.inverse() * Eigen::Vector2d(points[i].r_dot, points[j].r_dot);
    consensus.clear();
    double residual = 0.0;
    for (int k = 0; k < n; ++k) {
      const double r_hat = v.x() * std::cos(points[k].phi_w) + v.y() * std::sin(points[k].phi_w);
      const double e = std::abs(r_hat - points[k].r_dot);
      if (e <= inlier_tol) {
        consensus.push_back(k);
        residual += e;
      }
    }
    const int count = static_cast<int>(consensus.size());
    if (count > best_count || (count == best_count && count > 0 && residual < best_residual)) {
      best_count = count;
      best_residual = residual;
      best_set = consensus;
    }
  }
  if (best_count < 2) return std::nullopt;

  std::vector<DopplerObs> subset;
  subset.reserve(best_set.size());
  for (const int k : best_set) subset.push_back(points[k]);
  const auto refit = ols_baseline(subset);
  if (refit) return refit;
  // Consensus set collapsed to one bearing; fall back to the minimal solve.
  return std::nullopt;
}

std::vector<std::optional<VelocityEstimate>> estimate_cluster_velocities(
    const std::vector<std::vector<DopplerObs>>& cluster_points, const std::vector<Vec2>& seeds,
    const RlsConfig& cfg, ExecPolicy policy) {
  if (cluster_points.size() != seeds.size()) {
    throw std::invalid_argument("estimate_cluster_velocities: size mismatch");
  }
  const long n = static_cast<long>(cluster_points.size());
  std::vector<std::optional<VelocityEstimate>> out(n);
  auto run_one = [&](long i) {
    RlsConfig local = cfg;
    local.rng_seed = derive_seed(cfg.rng_seed, 0x10000 + static_cast<std::uint64_t>(i));
    if (cluster_points[i].size() < 2) {
      out[i] = std::nullopt;
      return;
    }
    out[i] = estimate_velocity(cluster_points[i], seeds[i], local);
  };
  if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) run_one(i);
  } else {
    for (long i = 0; i < n; ++i) run_one(i);
  }
  return out;
}

}  // namespace eot

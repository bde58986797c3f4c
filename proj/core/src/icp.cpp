#include "fmcw/icp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fmcw {

std::vector<int> icp_associate(const PointCloud& prev, const PointCloud& next, double dtheta,
                               const Eigen::Vector2d& dX_V) {
  const Eigen::Matrix2d R = rot2(dtheta);
  std::vector<int> match(prev.points.size(), -1);
  for (size_t k = 0; k < prev.points.size(); ++k) {
    const Eigen::Vector2d moved = R * prev.points[k];
    double best = std::numeric_limits<double>::infinity();
    for (size_t l = 0; l < next.points.size(); ++l) {
      const double dist = (next.points[l] - dX_V - moved).squaredNorm();
      if (dist < best) {
        best = dist;
        match[k] = static_cast<int>(l);
      }
    }
  }
  return match;
}

RigidFit icp_solve_rigid(const std::vector<Eigen::Vector2d>& xs,
                         const std::vector<Eigen::Vector2d>& zs,
                         const std::vector<double>& weights) {
  if (xs.size() != zs.size() || xs.size() != weights.size() || xs.empty())
    throw std::runtime_error("icp solve: empty or mismatched point sets");
  double wsum = 0.0;
  Eigen::Vector2d xbar = Eigen::Vector2d::Zero(), zbar = Eigen::Vector2d::Zero();
  for (size_t k = 0; k < xs.size(); ++k) {
    wsum += weights[k];
    xbar += weights[k] * xs[k];
    zbar += weights[k] * zs[k];
  }
  if (!(wsum > 0.0)) throw std::runtime_error("icp solve: all weights vanish");
  xbar /= wsum;
  zbar /= wsum;
  double cross = 0.0, dot = 0.0;
  for (size_t k = 0; k < xs.size(); ++k) {
    const Eigen::Vector2d x = xs[k] - xbar;
    const Eigen::Vector2d z = zs[k] - zbar;
    cross += weights[k] * (x.x() * z.y() - x.y() * z.x());
    dot += weights[k] * x.dot(z);
  }
  RigidFit fit;
  // All points coincident after centering: rotation unobservable.
  fit.dtheta = (cross == 0.0 && dot == 0.0) ? 0.0 : std::atan2(cross, dot);
  fit.dX_V = zbar - rot2(fit.dtheta) * xbar;
  return fit;
}

IcpResult icp(const PointCloud& prev, const PointCloud& next, const IcpSettings& settings,
              double init_dtheta, const Eigen::Vector2d& init_dX_V) {
  if (prev.points.empty() || next.points.empty())
    throw std::runtime_error("icp: empty point cloud");
  IcpResult res;
  res.dtheta = init_dtheta;
  res.dX_V = init_dX_V;
  res.converged = false;
  const double c2 = settings.robust_c * settings.robust_c;
  std::vector<Eigen::Vector2d> zs(prev.points.size());
  std::vector<double> weights(prev.points.size());
  for (res.iterations = 0; res.iterations < settings.max_iters;) {
    ++res.iterations;
    const std::vector<int> match = icp_associate(prev, next, res.dtheta, res.dX_V);
    const Eigen::Matrix2d R = rot2(res.dtheta);
    double objective = 0.0;
    for (size_t k = 0; k < prev.points.size(); ++k) {
      zs[k] = next.points[match[k]];
      const double res2 = (zs[k] - res.dX_V - R * prev.points[k]).squaredNorm();
      weights[k] = std::exp(-res2 / c2);
      objective += weights[k] * res2;
    }
    res.objective = objective;
    const RigidFit fit = icp_solve_rigid(prev.points, zs, weights);
    const double moved_angle = std::abs(std::remainder(fit.dtheta - res.dtheta, 2.0 * M_PI));
    const double moved_translation = (fit.dX_V - res.dX_V).norm();
    res.dtheta = fit.dtheta;
    res.dX_V = fit.dX_V;
    if (moved_angle < settings.eps_rotation && moved_translation < settings.eps_translation) {
      res.converged = true;
      break;
    }
  }
  return res;
}

GroundDelta to_ground(double dtheta, const Eigen::Vector2d& dX_V, double psi_next) {
  GroundDelta g;
  g.dpsi = -dtheta;
  g.dX_G = rot2(psi_next - M_PI / 2.0) * (-dX_V);
  return g;
}

}  // namespace fmcw

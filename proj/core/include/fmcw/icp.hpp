#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fmcw/types.hpp"

namespace fmcw {

struct PointCloud {
  std::vector<Eigen::Vector2d> points;  // vehicle frame, m
  int frame_index = 0;
};

struct IcpSettings {
  int max_iters = 50;
  double eps_translation = 1e-10;  // m
  double eps_rotation = 1e-12;     // rad
  double robust_c = 0.1;           // Welsch scale, m
};

struct IcpResult {
  double dtheta = 0.0;
  Eigen::Vector2d dX_V = Eigen::Vector2d::Zero();
  int iterations = 0;
  bool converged = true;
  double objective = 0.0;  // weighted residual sum at the final pose
};

inline Eigen::Matrix2d rot2(double angle) {
  Eigen::Matrix2d R;
  R << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return R;
}

// Eq. (35): each x_k in prev maps to the z_l in next minimizing
// ||(z_l - dX_V) - R(dtheta) x_k||^2. Repeats allowed (plain nearest
// neighbor, not bijective).
std::vector<int> icp_associate(const PointCloud& prev, const PointCloud& next, double dtheta,
                               const Eigen::Vector2d& dX_V);

// Weighted closed-form 2D Procrustes fit of Eq. (34): dtheta from the
// cross/dot correlations of the weight-centered pairs, dX_V from the
// centroids. Zero angular spread (all points coincident after centering)
// degrades to a translation-only solution with dtheta = 0.
struct RigidFit {
  double dtheta = 0.0;
  Eigen::Vector2d dX_V = Eigen::Vector2d::Zero();
};
RigidFit icp_solve_rigid(const std::vector<Eigen::Vector2d>& xs,
                         const std::vector<Eigen::Vector2d>& zs,
                         const std::vector<double>& weights);

// Alternates association and the rigid solve with Welsch weights
// w = exp(-residual^2 / robust_c^2) recomputed each iteration, until the pose
// change drops below the thresholds or max_iters.
IcpResult icp(const PointCloud& prev, const PointCloud& next, const IcpSettings& settings,
              double init_dtheta = 0.0, const Eigen::Vector2d& init_dX_V = Eigen::Vector2d::Zero());

// Eq. (36): dpsi = -dtheta, dX_G = R(psi_next - pi/2) * (-dX_V).
struct GroundDelta {
  double dpsi = 0.0;
  Eigen::Vector2d dX_G = Eigen::Vector2d::Zero();
};
GroundDelta to_ground(double dtheta, const Eigen::Vector2d& dX_V, double psi_next);

}  // namespace fmcw

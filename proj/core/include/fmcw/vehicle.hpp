#pragma once

#include <Eigen/Dense>

#include "fmcw/scene.hpp"

namespace fmcw {

// Planar point-mass with a heading state. The speed is signed along the
// heading axis (negative while reversing); position integrates f(psi) * v
// with f(psi) = (cos psi, sin psi).
struct VehicleState {
  Eigen::Vector2d pos = Eigen::Vector2d::Zero();
  double psi = 0.0;
  double v = 0.0;
};

struct ControlCommand {
  double force = 0.0;     // longitudinal, N
  double psi_rate = 0.0;  // commanded heading rate, rad/s
};

struct SpeedPid {
  double integral = 0.0;
  double prev_error = 0.0;
  bool primed = false;
  double step(double error, const ControllerParams& p);
};

// One dt of the true dynamics: m dv = (F - damping * v) dt, then the pose.
VehicleState vehicle_step(const VehicleState& s, const ControlCommand& u,
                          const ControllerParams& p);

// Pure-pursuit on the believed pose while reversing along the path. Picks the
// target point `lookahead` behind the nearest path point, commands the heading
// that points the tail at it, and a tapered negative speed near the goal.
struct PurePursuit {
  SpeedPid pid;
  ControlCommand step(const VehicleState& believed, const ParkingScene& scene);
  static double path_progress(const VehicleState& believed, const ParkingScene& scene);
};

}  // namespace fmcw

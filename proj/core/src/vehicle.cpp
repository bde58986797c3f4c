#include "fmcw/vehicle.hpp"

#include <cmath>
#include <limits>

namespace fmcw {
namespace {

constexpr double kMaxForce = 5000.0;    // N
constexpr double kMaxPsiRate = 0.7;     // rad/s, steering-limited heading rate

double wrap_angle(double a) { return std::remainder(a, 2.0 * M_PI); }

// Nearest point on the polyline: returns (arc length at the projection,
// total arc length).
std::pair<double, double> project_on_path(const Eigen::Vector2d& p,
                                          const std::vector<Eigen::Vector2d>& path) {
  double best_dist = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  double s = 0.0;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const Eigen::Vector2d a = path[i];
    const Eigen::Vector2d d = path[i + 1] - a;
    const double len2 = d.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
    const Eigen::Vector2d q = a + t * d;
    const double dist = (p - q).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best_s = s + t * std::sqrt(len2);
    }
    s += std::sqrt(len2);
  }
  return {best_s, s};
}

Eigen::Vector2d point_at_arc_length(const std::vector<Eigen::Vector2d>& path, double s) {
  if (s <= 0.0) return path.front();
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const double len = (path[i + 1] - path[i]).norm();
    if (s <= len && len > 0.0) return path[i] + (s / len) * (path[i + 1] - path[i]);
    s -= len;
  }
  return path.back();
}

}  // namespace

double SpeedPid::step(double error, const ControllerParams& p) {
  integral += error * p.dt;
  const double derivative = primed ? (error - prev_error) / p.dt : 0.0;
  prev_error = error;
  primed = true;
  double force = p.kp_v * error + p.ki_v * integral + p.kd_v * derivative;
  if (force > kMaxForce) {
    force = kMaxForce;
    integral -= error * p.dt;  // anti-windup: drop the step that saturated
  } else if (force < -kMaxForce) {
    force = -kMaxForce;
    integral -= error * p.dt;
  }
  return force;
}

VehicleState vehicle_step(const VehicleState& s, const ControlCommand& u,
                          const ControllerParams& p) {
  VehicleState next = s;
  next.v = s.v + p.dt * (u.force - p.damping * s.v) / p.mass;
  next.psi = wrap_angle(s.psi + p.dt * std::clamp(u.psi_rate, -kMaxPsiRate, kMaxPsiRate));
  next.pos = s.pos + p.dt * next.v * Eigen::Vector2d(std::cos(next.psi), std::sin(next.psi));
  return next;
}

double PurePursuit::path_progress(const VehicleState& believed, const ParkingScene& scene) {
  const auto [s_here, total] = project_on_path(believed.pos, scene.reference_path);
  return total - s_here;  // arc length still to travel
}

ControlCommand PurePursuit::step(const VehicleState& believed, const ParkingScene& scene) {
  const ControllerParams& p = scene.control;
  const auto [s_here, total] = project_on_path(believed.pos, scene.reference_path);
  const double remaining = total - s_here;
  const double s_look = std::min(s_here + p.lookahead, total);
  const Eigen::Vector2d target = point_at_arc_length(scene.reference_path, s_look);

  // Reversing: the forward axis points away from the travel direction, so the
  // chord aim runs from the lookahead point back to the vehicle, and the
  // reference heading is the reversed path tangent.
  const double h = std::min(1e-3, total);
  const Eigen::Vector2d tangent =
      point_at_arc_length(scene.reference_path, s_look) -
      point_at_arc_length(scene.reference_path, std::max(0.0, s_look - h));
  double psi_align = believed.psi;
  if (tangent.norm() > 1e-12) psi_align = std::atan2(-tangent.y(), -tangent.x());

  const Eigen::Vector2d away = believed.pos - target;
  double psi_chord = psi_align;
  if (away.norm() > 1e-9) psi_chord = std::atan2(away.y(), away.x());

  // The chord direction is singular at the path end; fade to the reference
  // heading over the taper distance so the final approach aligns the heading.
  const double blend = std::min(1.0, remaining / std::max(p.taper_distance, 1e-9));
  const double psi_des = psi_align + blend * wrap_angle(psi_chord - psi_align);

  ControlCommand cmd;
  cmd.psi_rate = p.k_psi * wrap_angle(psi_des - believed.psi);

  // Signed distance to go: arc length while on the path, signed overshoot past
  // the end so an overrun commands a forward return instead of more reversing.
  double to_go = remaining;
  if (remaining < 1e-9 && tangent.norm() > 1e-12)
    to_go = (believed.pos - scene.reference_path.back()).dot(-tangent.normalized());
  const double taper = std::min(1.0, std::abs(to_go) / std::max(p.taper_distance, 1e-9));
  const double v_cmd = -std::copysign(std::max(p.v_min, p.v_ref * taper), to_go);
  cmd.force = pid.step(v_cmd - believed.v, p);
  return cmd;
}

}  // namespace fmcw

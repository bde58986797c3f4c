#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fmcw/config_file.hpp"
#include "fmcw/icp.hpp"
#include "fmcw/types.hpp"

namespace fmcw {

enum class Algo { Fft2d, Music2d, Lse, Mle, Truth };
Algo algo_from_name(const std::string& name);  // fft | music | lse | mle | truth
std::string algo_name(Algo a);

struct RadarMount {
  Eigen::Vector2d pos_V;    // position on the body, vehicle frame
  double boresight = 0.0;   // rotation of the radar frame w.r.t. the vehicle frame
  double fov = 2.0943951023931953;  // 120 deg
};

struct ObstacleRect {  // axis-aligned in the ground frame
  Eigen::Vector2d center;
  double width = 0.0, length = 0.0;  // x extent, y extent
  bool contains(const Eigen::Vector2d& p, double shrink) const;
  bool intersects_segment(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double shrink) const;
};

struct ControllerParams {
  double mass = 1000.0;      // kg
  double damping = 50.0;     // N s/m
  double v_ref = 1.9444444;  // m/s (7 km/h), applied negative when reversing
  double dt = 0.01;          // frame interval T_f, s
  double kp_v = 800.0, ki_v = 200.0, kd_v = 0.0;
  double k_psi = 4.0;        // heading loop gain, 1/s
  double lookahead = 1.2;    // pure-pursuit lookahead along the path, m
  double taper_distance = 1.0;  // start slowing this far (path length) from the goal
  double v_min = 0.15;          // floor of the tapered speed command
  double noise_v = 0.1;             // per-frame N(0, .) on speed, m/s
  double noise_psi = 0.001745329;   // per-frame N(0, .) on heading, rad (0.1 deg)
};

struct ParkingScene {
  RadarConfig radar;
  double snr_db = 20.0;
  std::vector<Eigen::Vector2d> scatterers;  // ground frame
  std::vector<ObstacleRect> obstacles;      // the parked vehicles
  std::vector<RadarMount> mounts;
  std::vector<Eigen::Vector2d> reference_path;  // dense polyline, start -> goal
  Eigen::Vector2d start_pos = Eigen::Vector2d::Zero();
  double start_psi = 0.0;
  Eigen::Vector2d goal_pos = Eigen::Vector2d::Zero();
  double goal_psi = 0.0;
  ControllerParams control;
  IcpSettings icp;
  double stop_pos_tol = 0.05;        // m, on the believed pose
  double stop_psi_tol = 0.017453293; // rad (1 deg)
  int max_frames = 1000;
  double occlusion_shrink = 0.01;    // m, rectangle shrink so boundary scatterers stay visible
  int fft_oversample = 256;          // estimator grid factor inside the loop
  int music_Ns = 10, music_Ms = 10;

  void validate() const;
};

ParkingScene load_scene(KeyValueFile& kv);
ParkingScene load_scene_file(const std::string& path);

// Vehicle-frame coordinates: +y is the vehicle forward axis, heading psi is
// the ground-frame angle of +y_V, so ground = pos + rot2(psi - pi/2) * local.
Eigen::Vector2d vehicle_to_ground(const Eigen::Vector2d& pos, double psi,
                                  const Eigen::Vector2d& local);
Eigen::Vector2d ground_to_vehicle(const Eigen::Vector2d& pos, double psi,
                                  const Eigen::Vector2d& global);

// A scatterer is visible to a mounted radar when inside its FOV cone, closer
// than the unambiguous range, and not occluded by any obstacle rectangle
// (segment test with the rectangles shrunk so their own boundary scatterers
// are not self-occluded).
struct VisibleScatterer {
  int scatterer_index;
  int radar_index;
  double range;
  double theta;  // off-boresight angle, rad, positive toward the radar +x axis
};
std::vector<VisibleScatterer> visible_scatterers(const ParkingScene& scene,
                                                 const Eigen::Vector2d& pos, double psi);

// Radar-frame (r, theta) of a ground point as seen by mount `mi` at the pose.
VisibleScatterer range_angle_of(const ParkingScene& scene, int mi, const Eigen::Vector2d& pos,
                                double psi, const Eigen::Vector2d& point_G);

// (r, theta) back to a vehicle-frame point through the mount geometry.
Eigen::Vector2d mount_point_to_vehicle(const RadarMount& mount, double r, double theta);

}  // namespace fmcw

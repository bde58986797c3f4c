#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fmcw/icp.hpp"
#include "fmcw/scene.hpp"
#include "fmcw/vehicle.hpp"

namespace fmcw {

// One synthesized + estimated frame: the point cloud in the vehicle frame at
// the pose it was taken, with per-point weights shared with the ICP stage.
struct FrameCloud {
  PointCloud cloud;               // vehicle frame
  std::vector<int> scatterer_ids; // ground-truth index per point (diagnostics)
  std::vector<int> radar_ids;     // mount that measured each point
  std::vector<double> ranges;     // estimated r per point, radar frame
  std::vector<double> thetas;     // estimated theta per point, rad
  VehicleState true_state;        // pose the frame was taken at
  int dropped_groups = 0;         // radar groups whose estimator failed this frame
};

// Measure every visible scatterer through its nearest-seeing radar: each radar
// synthesizes one K-target deramped measurement of its assigned scatterers and
// the chosen estimator turns it back into (r, theta) pairs. `Truth` bypasses
// the waveform and returns exact ranges/angles (a zero-noise reference).
FrameCloud run_point_cloud(const ParkingScene& scene, const VehicleState& truth, Algo algo,
                           std::uint64_t seed);

struct FrameLog {
  VehicleState truth;
  VehicleState believed;
  double drift = 0.0;           // || pos_true - pos_believed ||
  double icp_rms = 0.0;
  int cloud_size = 0;
  int icp_iterations = 0;
};

struct ParkingResult {
  std::vector<FrameLog> frames;
  bool reached_goal = false;
  double final_drift = 0.0;      // position drift at the stop frame
  double max_drift = 0.0;
  double final_psi_error = 0.0;  // |psi_true - psi_believed| at stop, rad
  double mean_cloud_size = 0.0;
  int frame_count = 0;
  int dead_reckoned = 0;   // frames where ICP failed or had no cloud overlap
  int dropped_groups = 0;  // radar groups discarded across all frames
};

// Closed loop: believed pose drives the controller, true dynamics (plus
// per-frame actuation noise) move the vehicle, and scan matching between
// consecutive clouds updates the believed pose through Eq. (36).
ParkingResult run_parking(const ParkingScene& scene, Algo algo, std::uint64_t seed,
                          std::vector<FrameCloud>* cloud_log = nullptr);

// Trajectory CSV: frame, t, true_x, true_y, true_psi, est_x, est_y, est_psi,
// n_scatterers, icp_iters. `dt` converts frame index to seconds.
void write_parking_csv(const std::string& path, const ParkingResult& result, double dt);

}  // namespace fmcw

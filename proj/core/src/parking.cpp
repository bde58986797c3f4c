#include "fmcw/parking.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include "fmcw/lse.hpp"
#include "fmcw/mle.hpp"
#include "fmcw/music.hpp"
#include "fmcw/spectral.hpp"
#include "fmcw/synth.hpp"

namespace fmcw {
namespace {

double wrap_angle(double a) { return std::remainder(a, 2.0 * M_PI); }

std::vector<TargetEstimate> estimate_group(const MeasurementMatrix& z, int K, Algo algo,
                                           const ParkingScene& scene) {
  GridSpec grid;
  grid.range_oversample = scene.fft_oversample;
  grid.angle_oversample = scene.fft_oversample;
  switch (algo) {
    case Algo::Fft2d:
      return fft2d_estimate(z, K, grid).targets;
    case Algo::Music2d:
      return music2d_estimate(z, K, scene.music_Ns, scene.music_Ms, grid).targets;
    case Algo::Lse: {
      const EstimateResult seeds = fft2d_estimate(z, K, grid);
      return lse_estimate(z, seeds.targets, grid).targets;
    }
    case Algo::Mle: {
      // Dense scenes: noise keeps the likelihood jittering, so the noiseless
      // convergence threshold would always run out the iteration budget; the
      // trust regions pin each target to its own basin.
      MlSettings settings;
      settings.delta_rel = 1e-9;
      settings.max_iters = 30;
      settings.max_step_u = scene.radar.lambda() / 32.0;
      settings.trust_u = 1.5 * scene.radar.lambda() / scene.radar.M();
      settings.trust_r = 1.5 * scene.radar.range_bin();
      std::vector<TargetEstimate> seeds = fft2d_estimate(z, K, grid).targets;
      while (true) {
        try {
          return mle_estimate(z, static_cast<int>(seeds.size()), settings, &seeds).targets;
        } catch (const std::runtime_error&) {
          // Two seeds migrating into one basin make the amplitude system
          // singular; retire the weakest seed and refit the rest.
          if (seeds.size() <= 1) throw;
          seeds.pop_back();
        }
      }
    }
    case Algo::Truth:
      break;
  }
  throw std::runtime_error("estimate_group: truth estimator takes no measurement");
}

// Diagnostics: greedily match each estimate to the nearest true scatterer of
// the group in (r, arc) metric.
std::vector<int> match_ids(const std::vector<TargetEstimate>& est,
                           const std::vector<VisibleScatterer>& truth) {
  std::vector<int> ids(est.size(), -1);
  std::vector<bool> used(truth.size(), false);
  for (size_t e = 0; e < est.size(); ++e) {
    double best = std::numeric_limits<double>::infinity();
    int pick = -1;
    for (size_t t = 0; t < truth.size(); ++t) {
      if (used[t]) continue;
      const double dr = est[e].r - truth[t].range;
      const double darc = truth[t].range * wrap_angle(est[e].theta - truth[t].theta);
      const double dist = dr * dr + darc * darc;
      if (dist < best) {
        best = dist;
        pick = static_cast<int>(t);
      }
    }
    if (pick >= 0) {
      used[pick] = true;
      ids[e] = truth[pick].scatterer_index;
    }
  }
  return ids;
}

}  // namespace

FrameCloud run_point_cloud(const ParkingScene& scene, const VehicleState& truth, Algo algo,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform_phase(0.0, 2.0 * M_PI);

  const std::vector<VisibleScatterer> vis = visible_scatterers(scene, truth.pos, truth.psi);
  std::map<int, std::vector<VisibleScatterer>> by_radar;
  for (const VisibleScatterer& v : vis) by_radar[v.radar_index].push_back(v);

  FrameCloud frame;
  frame.true_state = truth;
  for (const auto& [radar_index, group] : by_radar) {
    const RadarMount& mount = scene.mounts.at(radar_index);
    if (algo == Algo::Truth) {
      for (const VisibleScatterer& v : group) {
        frame.cloud.points.push_back(mount_point_to_vehicle(mount, v.range, v.theta));
        frame.scatterer_ids.push_back(v.scatterer_index);
        frame.radar_ids.push_back(radar_index);
        frame.ranges.push_back(v.range);
        frame.thetas.push_back(v.theta);
      }
      continue;
    }
    std::vector<Target> targets;
    targets.reserve(group.size());
    for (const VisibleScatterer& v : group) {
      Target t;
      t.a = 1.0;
      t.phi = uniform_phase(rng);  // fresh reflection phase every frame
      t.r = v.range;
      t.theta = v.theta;
      targets.push_back(t);
    }
    const double sigma = sigma_for_snr(scene.radar, 1.0, scene.snr_db);
    const MeasurementMatrix z =
        synthesize_measurement(scene.radar, targets, sigma, rng());
    std::vector<TargetEstimate> est;
    try {
      est = estimate_group(z, static_cast<int>(group.size()), algo, scene);
    } catch (const std::runtime_error&) {
      // Degraded frame: drop this radar's returns and let scan matching run
      // on the remaining groups (same fallback family as a failed ICP frame).
      ++frame.dropped_groups;
      continue;
    }
    const std::vector<int> ids = match_ids(est, group);
    for (size_t e = 0; e < est.size(); ++e) {
      frame.cloud.points.push_back(mount_point_to_vehicle(mount, est[e].r, est[e].theta));
      frame.scatterer_ids.push_back(ids[e]);
      frame.radar_ids.push_back(radar_index);
      frame.ranges.push_back(est[e].r);
      frame.thetas.push_back(est[e].theta);
    }
  }
  return frame;
}

ParkingResult run_parking(const ParkingScene& scene, Algo algo, std::uint64_t seed,
                          std::vector<FrameCloud>* cloud_log) {
  scene.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  VehicleState truth;
  truth.pos = scene.start_pos;
  truth.psi = scene.start_psi;
  truth.v = 0.0;
  VehicleState believed = truth;

  ParkingResult result;
  PurePursuit controller;

  FrameCloud prev = run_point_cloud(scene, truth, algo, rng());
  if (cloud_log) cloud_log->push_back(prev);
  result.dropped_groups += prev.dropped_groups;
  double cloud_total = prev.cloud.points.size();
  int cloud_frames = 1;
  {
    FrameLog log;
    log.truth = truth;
    log.believed = believed;
    log.cloud_size = static_cast<int>(prev.cloud.points.size());
    result.frames.push_back(log);
  }

  for (int frame = 1; frame <= scene.max_frames; ++frame) {
    believed.v = truth.v;  // speed is measured; position and heading are not
    const ControlCommand cmd = controller.step(believed, scene);

    // Dead-reckoned prediction of the believed pose, used to warm-start the
    // scan matcher through the inverse of Eq. (36).
    const VehicleState predicted = vehicle_step(believed, cmd, scene.control);
    const double init_dtheta = -wrap_angle(predicted.psi - believed.psi);
    const Eigen::Vector2d init_dX_V =
        -(rot2(M_PI / 2.0 - predicted.psi) * (predicted.pos - believed.pos));

    truth = vehicle_step(truth, cmd, scene.control);
    truth.v += scene.control.noise_v * gauss(rng);
    truth.psi = wrap_angle(truth.psi + scene.control.noise_psi * gauss(rng));

    FrameCloud next = run_point_cloud(scene, truth, algo, rng());
    if (cloud_log) cloud_log->push_back(next);
    result.dropped_groups += next.dropped_groups;
    cloud_total += next.cloud.points.size();
    ++cloud_frames;

    FrameLog log;
    log.cloud_size = static_cast<int>(next.cloud.points.size());
    bool matched = false;
    if (!prev.cloud.points.empty() && !next.cloud.points.empty()) {
      try {
        const IcpResult fit = icp(prev.cloud, next.cloud, scene.icp, init_dtheta, init_dX_V);
        const double psi_next = wrap_angle(believed.psi - fit.dtheta);
        const GroundDelta gd = to_ground(fit.dtheta, fit.dX_V, psi_next);
        believed.pos += gd.dX_G;
        believed.psi = psi_next;
        log.icp_iterations = fit.iterations;
        log.icp_rms = std::sqrt(fit.objective / prev.cloud.points.size());
        matched = true;
      } catch (const std::runtime_error&) {
        // Documented fallback: a degenerate match (weights all vanished)
        // degrades that frame to dead reckoning.
      }
    }
    if (!matched) {
      believed = predicted;
      ++result.dead_reckoned;
    }
    believed.v = truth.v;

    log.truth = truth;
    log.believed = believed;
    log.drift = (truth.pos - believed.pos).norm();
    result.frames.push_back(log);
    result.max_drift = std::max(result.max_drift, log.drift);
    result.frame_count = frame;

    if ((believed.pos - scene.goal_pos).norm() <= scene.stop_pos_tol &&
        std::abs(wrap_angle(believed.psi - scene.goal_psi)) <= scene.stop_psi_tol) {
      result.reached_goal = true;
      result.final_drift = log.drift;
      result.final_psi_error = std::abs(wrap_angle(truth.psi - believed.psi));
      break;
    }
    prev = std::move(next);
  }
  if (!result.reached_goal && !result.frames.empty()) {
    result.final_drift = result.frames.back().drift;
    result.final_psi_error = std::abs(wrap_angle(truth.psi - believed.psi));
  }
  result.mean_cloud_size = cloud_total / cloud_frames;
  return result;
}

void write_parking_csv(const std::string& path, const ParkingResult& result, double dt) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(12);
  out << "frame,t,true_x,true_y,true_psi,est_x,est_y,est_psi,n_scatterers,icp_iters\n";
  for (size_t i = 0; i < result.frames.size(); ++i) {
    const FrameLog& f = result.frames[i];
    out << i << ',' << i * dt << ',' << f.truth.pos.x() << ',' << f.truth.pos.y() << ','
        << f.truth.psi << ',' << f.believed.pos.x() << ',' << f.believed.pos.y() << ','
        << f.believed.psi << ',' << f.cloud_size << ',' << f.icp_iterations << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace fmcw

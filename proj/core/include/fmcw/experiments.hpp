#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fmcw/scene.hpp"
#include "fmcw/types.hpp"

namespace fmcw {

struct SweepSettings {
  std::vector<double> snr_db;      // sweep axis
  int trials = 500;                // Monte-Carlo trials per SNR point
  std::uint64_t seed_base = 1;     // trial t at SNR index s uses seed_base + s * trials + t
  bool randomize_phase = true;     // fresh phi ~ U(0, 2pi) per target per trial
  int fft_oversample = 256;
  int music_Ns = 10, music_Ms = 10;
  int threads = 0;                 // 0: hardware_concurrency
};

struct SweepTargetStat {
  double rmse_r = 0.0;      // m
  double rmse_theta = 0.0;  // rad
  long count = 0;           // trials contributing to this target
  double crb_r = 0.0;       // sqrt CRB, m
  double crb_theta = 0.0;   // rad
};

struct SweepPoint {
  double snr_db = 0.0;
  std::vector<SweepTargetStat> per_target;
  double rmse_r = 0.0;      // m, pooled over targets and trials
  double rmse_theta = 0.0;  // rad
  double crb_r = 0.0;       // sqrt CRB, m (first target)
  double crb_theta = 0.0;   // rad
  int failures = 0;         // trials dropped (estimator threw or diverged)
};

struct SweepResult {
  Algo algo = Algo::Fft2d;
  std::vector<SweepPoint> points;
};

// RMSE vs SNR for one estimator over the given targets. Estimates are matched
// to truths by nearest (r, theta) in CRB-normalized distance, exhaustively
// over permutations for small K.
SweepResult run_rmse_sweep(const RadarConfig& config, const std::vector<Target>& targets,
                           Algo algo, const SweepSettings& settings);

void write_sweep_csv(const std::string& path, const SweepResult& result);

}  // namespace fmcw

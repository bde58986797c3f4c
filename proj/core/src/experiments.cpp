#include "fmcw/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "fmcw/crb.hpp"
#include "fmcw/lse.hpp"
#include "fmcw/mle.hpp"
#include "fmcw/music.hpp"
#include "fmcw/spectral.hpp"
#include "fmcw/synth.hpp"

namespace fmcw {
namespace {

struct TrialSums {
  std::vector<double> sq_r;      // per target
  std::vector<double> sq_theta;  // per target
  long count = 0;                // trials contributing
  int failures = 0;
};

std::vector<TargetEstimate> run_estimator(const MeasurementMatrix& z, int K, Algo algo,
                                          const SweepSettings& s) {
  GridSpec grid;
  grid.range_oversample = s.fft_oversample;
  grid.angle_oversample = s.fft_oversample;
  switch (algo) {
    case Algo::Fft2d:
      return fft2d_estimate(z, K, grid).targets;
    case Algo::Music2d:
      return music2d_estimate(z, K, s.music_Ns, s.music_Ms, grid).targets;
    case Algo::Lse: {
      const EstimateResult seeds = fft2d_estimate(z, K, grid);
      if (static_cast<int>(seeds.targets.size()) != K)
        throw std::runtime_error("sweep: fewer seed peaks than targets");
      return lse_estimate(z, seeds.targets, grid).targets;
    }
    case Algo::Mle: {
      MlSettings settings;
      return mle_estimate(z, K, settings).targets;
    }
    case Algo::Truth:
      throw std::runtime_error("sweep: truth is not a waveform estimator");
  }
  throw std::runtime_error("sweep: unknown estimator");
}

// Exhaustive minimum-cost assignment in the CRB-normalized metric; K is
// small (K! permutations). Returns per-target squared errors.
void match_errors(const std::vector<TargetEstimate>& est, const std::vector<Target>& truth,
                  const std::vector<CrbResult>& bounds, std::vector<double>& sq_r,
                  std::vector<double>& sq_theta) {
  const size_t K = truth.size();
  std::vector<int> perm(K);
  std::iota(perm.begin(), perm.end(), 0);
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<int> best = perm;
  do {
    double cost = 0.0;
    for (size_t k = 0; k < K; ++k) {
      const TargetEstimate& e = est[perm[k]];
      const double nr = (e.r - truth[k].r) / bounds[k].sigma_r;
      const double nt = (e.theta - truth[k].theta) / bounds[k].sigma_theta;
      cost += nr * nr + nt * nt;
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (size_t k = 0; k < K; ++k) {
    const TargetEstimate& e = est[best[k]];
    sq_r[k] += (e.r - truth[k].r) * (e.r - truth[k].r);
    sq_theta[k] += (e.theta - truth[k].theta) * (e.theta - truth[k].theta);
  }
}

TrialSums run_trials(const RadarConfig& config, const std::vector<Target>& base, Algo algo,
                     const SweepSettings& settings, double sigma,
                     const std::vector<CrbResult>& bounds, std::uint64_t seed_lo,
                     std::uint64_t seed_hi) {
  const int K = static_cast<int>(base.size());
  TrialSums sums;
  sums.sq_r.assign(K, 0.0);
  sums.sq_theta.assign(K, 0.0);
  for (std::uint64_t seed = seed_lo; seed < seed_hi; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform_phase(0.0, 2.0 * M_PI);
    std::vector<Target> targets = base;
    if (settings.randomize_phase)
      for (Target& t : targets) t.phi = uniform_phase(rng);
    const MeasurementMatrix z = synthesize_measurement(config, targets, sigma, rng());
    try {
      const std::vector<TargetEstimate> est = run_estimator(z, K, algo, settings);
      if (static_cast<int>(est.size()) != K)
        throw std::runtime_error("sweep: estimator returned fewer peaks than targets");
      match_errors(est, targets, bounds, sums.sq_r, sums.sq_theta);
      ++sums.count;
    } catch (const std::exception&) {
      ++sums.failures;
    }
  }
  return sums;
}

}  // namespace

SweepResult run_rmse_sweep(const RadarConfig& config, const std::vector<Target>& targets,
                           Algo algo, const SweepSettings& settings) {
  config.validate();
  if (targets.empty()) throw std::runtime_error("sweep: no targets");
  if (targets.size() > 6) throw std::runtime_error("sweep: exhaustive matching limited to K <= 6");
  if (settings.snr_db.empty()) throw std::runtime_error("sweep: empty SNR axis");
  if (settings.trials < 1) throw std::runtime_error("sweep: trials must be positive");

  SweepResult result;
  result.algo = algo;
  int threads = settings.threads > 0 ? settings.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, settings.trials));

  for (size_t s = 0; s < settings.snr_db.size(); ++s) {
    const double snr = settings.snr_db[s];
    const double sigma = sigma_for_snr(config, targets[0].a, snr);
    std::vector<CrbResult> bounds;
    for (const Target& t : targets) bounds.push_back(crb_for_snr(config, t, snr));

    const std::uint64_t base =
        settings.seed_base + static_cast<std::uint64_t>(s) * settings.trials;
    std::vector<std::future<TrialSums>> futures;
    const int per = (settings.trials + threads - 1) / threads;
    for (int c = 0; c < threads; ++c) {
      const std::uint64_t lo = base + static_cast<std::uint64_t>(c) * per;
      const std::uint64_t hi = std::min<std::uint64_t>(base + settings.trials, lo + per);
      if (lo >= hi) break;
      futures.push_back(std::async(std::launch::async, run_trials, std::cref(config),
                                   std::cref(targets), algo, std::cref(settings), sigma,
                                   std::cref(bounds), lo, hi));
    }
    const int K = static_cast<int>(targets.size());
    TrialSums total;
    total.sq_r.assign(K, 0.0);
    total.sq_theta.assign(K, 0.0);
    for (auto& f : futures) {
      const TrialSums part = f.get();
      for (int k = 0; k < K; ++k) {
        total.sq_r[k] += part.sq_r[k];
        total.sq_theta[k] += part.sq_theta[k];
      }
      total.count += part.count;
      total.failures += part.failures;
    }

    SweepPoint point;
    point.snr_db = snr;
    point.crb_r = bounds[0].sigma_r;
    point.crb_theta = bounds[0].sigma_theta;
    point.failures = total.failures;
    double pooled_r = 0.0, pooled_theta = 0.0;
    for (int k = 0; k < K; ++k) {
      SweepTargetStat stat;
      stat.count = total.count;
      stat.crb_r = bounds[k].sigma_r;
      stat.crb_theta = bounds[k].sigma_theta;
      if (total.count > 0) {
        stat.rmse_r = std::sqrt(total.sq_r[k] / total.count);
        stat.rmse_theta = std::sqrt(total.sq_theta[k] / total.count);
      }
      pooled_r += total.sq_r[k];
      pooled_theta += total.sq_theta[k];
      point.per_target.push_back(stat);
    }
    if (total.count > 0) {
      point.rmse_r = std::sqrt(pooled_r / (total.count * K));
      point.rmse_theta = std::sqrt(pooled_theta / (total.count * K));
    }
    result.points.push_back(point);
  }
  return result;
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  const double deg = 180.0 / M_PI;
  out << std::setprecision(12);
  out << "algo,snr_db,target,rmse_r_m,rmse_theta_deg,count,crb_r_m,crb_theta_deg,failures\n";
  for (const SweepPoint& p : result.points)
    for (size_t k = 0; k < p.per_target.size(); ++k) {
      const SweepTargetStat& t = p.per_target[k];
      out << algo_name(result.algo) << ',' << p.snr_db << ',' << k << ',' << t.rmse_r << ','
          << t.rmse_theta * deg << ',' << t.count << ',' << t.crb_r << ',' << t.crb_theta * deg
          << ',' << p.failures << "\n";
    }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace fmcw

// fmcw: command-line front end for the deramped FMCW MIMO radar toolkit.
//
// Subcommands: synth, estimate, bias, crb, sweep, pointcloud, park.
// Exit codes: 0 success, 1 usage/config error, 2 numerical failure
// (non-convergence, unresolved peaks, singular systems, aborted simulation).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fmcw/config_file.hpp"
#include "fmcw/crb.hpp"
#include "fmcw/experiments.hpp"
#include "fmcw/io.hpp"
#include "fmcw/lse.hpp"
#include "fmcw/mle.hpp"
#include "fmcw/music.hpp"
#include "fmcw/parking.hpp"
#include "fmcw/scene.hpp"
#include "fmcw/spectral.hpp"
#include "fmcw/synth.hpp"
#include "fmcw/vehicle.hpp"

namespace {

constexpr double kDeg = 180.0 / M_PI;

// Configuration problems (bad files, unknown keys, malformed values) exit
// with the usage code; numerical failures downstream exit with 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void apply_overrides(fmcw::KeyValueFile& kv, const std::vector<std::string>& overrides) {
  for (const std::string& item : overrides) {
    const size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw UsageError("override '" + item + "' is not of the form key=value");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    kv.override_value(key, value);
    std::cout << "override: " << key << " = " << value << " (cli)\n";
  }
}

struct Problem {
  fmcw::RadarConfig radar;
  std::vector<fmcw::Target> targets;
};

Problem load_problem(const std::string& path, const std::vector<std::string>& overrides) {
  try {
    fmcw::KeyValueFile kv = fmcw::KeyValueFile::parse_file(path);
    std::cout << "config: " << path << "\n";
    apply_overrides(kv, overrides);
    Problem p;
    p.radar = fmcw::load_radar_config(kv, "radar.");
    p.targets = fmcw::load_targets(kv);
    kv.finish();
    return p;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

// Radar-only variant for `bias`; target keys are allowed and ignored.
fmcw::RadarConfig load_radar_only(const std::string& path,
                                  const std::vector<std::string>& overrides) {
  try {
    fmcw::KeyValueFile kv = fmcw::KeyValueFile::parse_file(path);
    std::cout << "config: " << path << "\n";
    apply_overrides(kv, overrides);
    const fmcw::RadarConfig radar = fmcw::load_radar_config(kv, "radar.");
    if (kv.has("target_count")) (void)fmcw::load_targets(kv);
    kv.finish();
    return radar;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

fmcw::ParkingScene load_scene_checked(const std::string& path,
                                      const std::vector<std::string>& overrides) {
  try {
    fmcw::KeyValueFile kv = fmcw::KeyValueFile::parse_file(path);
    std::cout << "scene: " << path << "\n";
    apply_overrides(kv, overrides);
    fmcw::ParkingScene scene = fmcw::load_scene(kv);
    kv.finish();
    scene.validate();
    return scene;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

// SNR axis: "20", "0,10,20", or "start:step:stop" (stop inclusive).
std::vector<double> parse_axis(const std::string& text) {
  std::vector<double> out;
  const auto to_double = [&](const std::string& s) {
    try {
      size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError("bad number '" + s + "' in SNR axis '" + text + "'");
    }
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw UsageError("SNR range must be start:step:stop, got '" + text + "'");
    const double start = to_double(parts[0]);
    const double step = to_double(parts[1]);
    const double stop = to_double(parts[2]);
    if (step <= 0.0) throw UsageError("SNR range step must be positive");
    for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
  } else {
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(to_double(part));
  }
  if (out.empty()) throw UsageError("empty SNR axis '" + text + "'");
  return out;
}

fmcw::MeasurementMatrix make_measurement(const Problem& p, double sigma, bool have_snr,
                                         double snr_db, std::uint64_t seed) {
  if (have_snr) sigma = fmcw::sigma_for_snr(p.radar, p.targets[0].a, snr_db);
  if (sigma > 0.0) return fmcw::synthesize_measurement(p.radar, p.targets, sigma, seed);
  return fmcw::synthesize_noiseless(p.radar, p.targets);
}

Eigen::VectorXd linspace_step(double lo, double hi, double step) {
  const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  Eigen::VectorXd v(count);
  for (int i = 0; i < count; ++i) v[i] = lo + i * step;
  return v;
}

// ---------------------------------------------------------------------------
// synth

int run_synth(const Problem& p, double sigma, bool have_snr, double snr_db, std::uint64_t seed,
              const std::string& out_base) {
  const fmcw::MeasurementMatrix z = make_measurement(p, sigma, have_snr, snr_db, seed);
  const std::string base = fmcw::output_path(fmcw::default_output_dir(), out_base);
  fmcw::export_measurement(z, base);
  std::cout << "synth: N=" << z.N() << " M=" << z.M() << " targets=" << p.targets.size()
            << " sigma=" << z.sigma << " -> " << base << ".hdr, " << base << ".bin\n";
  return 0;
}

// ---------------------------------------------------------------------------
// estimate

struct SpectrumRequest {
  std::string path;       // empty: no export
  std::string window;     // "x0:x1:y0:y1" in bin units, empty: auto around peaks
  double step = 0.03125;  // bins
};

void export_spectrum(const fmcw::MeasurementMatrix& z, fmcw::Algo algo, int K, int Ns, int Ms,
                     const std::vector<fmcw::TargetEstimate>& estimates,
                     const SpectrumRequest& req) {
  double x0, x1, y0, y1;
  if (!req.window.empty()) {
    std::vector<std::string> parts;
    std::stringstream ss(req.window);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 4) throw UsageError("--spectrum-window must be x0:x1:y0:y1 (bin units)");
    x0 = std::stod(parts[0]);
    x1 = std::stod(parts[1]);
    y0 = std::stod(parts[2]);
    y1 = std::stod(parts[3]);
  } else {
    double lo = z.N(), hi = 0.0;
    for (const fmcw::TargetEstimate& e : estimates) {
      const double x = fmcw::range_to_bin(z.config, e.r);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    x0 = std::max(0.0, lo - 4.0);
    x1 = std::min(static_cast<double>(z.N()), hi + 4.0);
    y0 = 0.0;
    y1 = z.M() - req.step;  // full angle axis
  }
  if (!(x1 > x0) || !(y1 >= y0) || req.step <= 0.0)
    throw UsageError("empty spectrum window");
  const Eigen::VectorXd xs = linspace_step(x0, x1, req.step);
  const Eigen::VectorXd ys = linspace_step(y0, y1, req.step);
  Eigen::MatrixXd mag;
  if (algo == fmcw::Algo::Music2d)
    mag = fmcw::music2d_spectrum(z, K, Ns, Ms, xs, ys);
  else
    mag = fmcw::dtft_patch(z, xs, ys);
  fmcw::write_spectrum_csv(req.path, xs, ys, mag);
  std::cout << "spectrum: " << xs.size() << " x " << ys.size() << " grid -> " << req.path << "\n";
}

void export_lse_slice(const fmcw::MeasurementMatrix& z, double r, double lo_deg, double hi_deg,
                      double step_deg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(12) << "theta_deg,objective\n";
  for (double t = lo_deg; t <= hi_deg + 1e-12; t += step_deg) {
    const double u = z.config.spacing() * std::sin(t / kDeg);
    out << t << ',' << fmcw::lse_objective(z, r, u) << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
  std::cout << "slice: J(r=" << r << " m, theta) -> " << path << "\n";
}

int run_estimate(const Problem& p, const std::string& algo_text, int K, int oversample, int Ns,
                 int Ms, double sigma, bool have_snr, double snr_db, std::uint64_t seed,
                 const std::string& out_name, const SpectrumRequest& spectrum,
                 const std::string& slice_path, double slice_r, double slice_lo_deg,
                 double slice_hi_deg, double slice_step_deg) {
  const fmcw::Algo algo = fmcw::algo_from_name(algo_text);
  if (algo == fmcw::Algo::Truth) throw UsageError("estimate: truth is not a waveform estimator");
  const fmcw::MeasurementMatrix z = make_measurement(p, sigma, have_snr, snr_db, seed);
  if (K <= 0) K = static_cast<int>(p.targets.size());

  fmcw::GridSpec grid;
  grid.range_oversample = oversample;
  grid.angle_oversample = oversample;

  fmcw::EstimateResult result;
  switch (algo) {
    case fmcw::Algo::Fft2d:
      result = fmcw::fft2d_estimate(z, K, grid);
      break;
    case fmcw::Algo::Music2d:
      result = fmcw::music2d_estimate(z, K, Ns, Ms, grid);
      break;
    case fmcw::Algo::Lse: {
      const fmcw::EstimateResult seeds = fmcw::fft2d_estimate(z, K, grid);
      if (!seeds.resolved) {
        result = seeds;
        break;
      }
      result = fmcw::lse_estimate(z, seeds.targets, grid);
      break;
    }
    default: {
      fmcw::MlSettings settings;
      result = fmcw::mle_estimate(z, K, settings);
      break;
    }
  }

  const std::string name = fmcw::algo_name(algo);
  for (size_t k = 0; k < result.targets.size(); ++k) {
    const fmcw::TargetEstimate& e = result.targets[k];
    std::cout << name << " k=" << k << ": r=" << std::setprecision(10) << e.r
              << " m, theta=" << e.theta * kDeg << " deg, power=" << e.power << "\n";
  }
  if (algo == fmcw::Algo::Mle)
    std::cout << name << ": iterations=" << result.iterations
              << " converged=" << (result.converged ? "yes" : "no") << "\n";

  const std::string out = fmcw::output_path(fmcw::default_output_dir(), out_name);
  fmcw::write_estimates_csv(out, name, result.targets);
  std::cout << "estimates -> " << out << "\n";

  if (!spectrum.path.empty()) {
    const std::string spath = fmcw::output_path(fmcw::default_output_dir(), spectrum.path);
    SpectrumRequest req = spectrum;
    req.path = spath;
    export_spectrum(z, algo, K, Ns, Ms, result.targets, req);
  }
  if (!slice_path.empty()) {
    if (algo != fmcw::Algo::Lse) throw UsageError("--slice requires --algo lse");
    double r = slice_r;
    if (r <= 0.0) {
      if (result.targets.empty()) throw std::runtime_error("slice: no estimate to anchor r");
      r = result.targets[0].r;
    }
    export_lse_slice(z, r, slice_lo_deg, slice_hi_deg, slice_step_deg,
                     fmcw::output_path(fmcw::default_output_dir(), slice_path));
  }

  if (!result.resolved) {
    std::cerr << "estimate: only " << result.targets.size() << " of " << K
              << " peaks were separable\n";
    return 2;
  }
  if (!result.converged) {
    std::cerr << "estimate: iteration limit reached before the stopping rule\n";
    return 2;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// bias

int run_bias(const fmcw::RadarConfig& radar, double theta_deg) {
  const auto [r_bias, theta_bias] = fmcw::bias_prediction(radar, theta_deg / kDeg);
  std::ostringstream line;
  line << "bias at theta=" << theta_deg << " deg: range " << std::setprecision(2) << r_bias
       << " m (" << std::setprecision(6) << r_bias << "), angle " << std::setprecision(3)
       << theta_bias * kDeg << " deg (" << std::setprecision(6) << theta_bias * kDeg << ")";
  std::cout << line.str() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// crb

int run_crb(const Problem& p, const std::string& snr_text, const std::string& out_name) {
  const std::vector<double> snrs = parse_axis(snr_text);
  if (p.targets.size() > 1)
    std::cerr << "crb: multiple targets in config, using the first (single-target bound)\n";
  const fmcw::Target& target = p.targets[0];

  const std::string out = fmcw::output_path(fmcw::default_output_dir(), out_name);
  std::ofstream file(out);
  if (!file) throw std::runtime_error("cannot write " + out);
  file << std::setprecision(12) << "snr_db,sigma_r_m,sigma_theta_deg\n";
  for (double snr : snrs) {
    const fmcw::CrbResult crb = fmcw::crb_for_snr(p.radar, target, snr);
    file << snr << ',' << crb.sigma_r << ',' << crb.sigma_theta * kDeg << "\n";
    std::cout << "crb snr=" << snr << " dB: sigma_r=" << crb.sigma_r
              << " m, sigma_theta=" << crb.sigma_theta * kDeg << " deg\n";
  }
  if (!file) throw std::runtime_error("write failed: " + out);
  std::cout << "crb -> " << out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

int run_sweep(const Problem& p, const std::vector<std::string>& algos, const std::string& snr_text,
              int trials, std::uint64_t seed_base, int oversample, int Ns, int Ms, int threads,
              const std::string& out_prefix) {
  fmcw::SweepSettings settings;
  settings.snr_db = parse_axis(snr_text);
  settings.trials = trials;
  settings.seed_base = seed_base;
  settings.fft_oversample = oversample;
  settings.music_Ns = Ns;
  settings.music_Ms = Ms;
  settings.threads = threads;

  for (const std::string& algo_text : algos) {
    const fmcw::Algo algo = fmcw::algo_from_name(algo_text);
    if (algo == fmcw::Algo::Truth) throw UsageError("sweep: truth is not a waveform estimator");
    const fmcw::SweepResult result = fmcw::run_rmse_sweep(p.radar, p.targets, algo, settings);
    const std::string out = fmcw::output_path(fmcw::default_output_dir(),
                                              out_prefix + "_" + fmcw::algo_name(algo) + ".csv");
    fmcw::write_sweep_csv(out, result);
    for (const fmcw::SweepPoint& point : result.points)
      std::cout << "sweep " << fmcw::algo_name(algo) << " snr=" << point.snr_db
                << " dB: rmse_r=" << point.rmse_r << " m, rmse_theta=" << point.rmse_theta * kDeg
                << " deg, crb_r=" << point.crb_r << " m, crb_theta=" << point.crb_theta * kDeg
                << " deg, failures=" << point.failures << "\n";
    std::cout << "sweep " << fmcw::algo_name(algo) << ": " << trials << " trials x "
              << settings.snr_db.size() << " SNR points -> " << out << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// pointcloud

int run_pointcloud(const fmcw::ParkingScene& scene, const std::string& algo_text,
                   std::uint64_t seed, const std::string& out_name) {
  const fmcw::Algo algo = fmcw::algo_from_name(algo_text);
  fmcw::VehicleState pose;
  pose.pos = scene.start_pos;
  pose.psi = scene.start_psi;
  const fmcw::FrameCloud frame = fmcw::run_point_cloud(scene, pose, algo, seed);

  const std::string out = fmcw::output_path(fmcw::default_output_dir(), out_name);
  std::ofstream file(out);
  if (!file) throw std::runtime_error("cannot write " + out);
  file << std::setprecision(12)
       << "point,radar,scatterer,x_m,y_m,true_x_m,true_y_m,err_r_m,err_theta_deg,err_pos_m\n";

  double sum_r = 0.0, sum_theta = 0.0, sum_pos = 0.0;
  long matched = 0;
  for (size_t i = 0; i < frame.cloud.points.size(); ++i) {
    const int sid = frame.scatterer_ids[i];
    const int rid = frame.radar_ids[i];
    double true_x = 0.0, true_y = 0.0, err_r = 0.0, err_theta = 0.0, err_pos = 0.0;
    if (sid >= 0) {
      const fmcw::VisibleScatterer truth = fmcw::range_angle_of(
          scene, rid, pose.pos, pose.psi, scene.scatterers[static_cast<size_t>(sid)]);
      const Eigen::Vector2d true_V =
          fmcw::mount_point_to_vehicle(scene.mounts[static_cast<size_t>(rid)], truth.range,
                                       truth.theta);
      true_x = true_V.x();
      true_y = true_V.y();
      err_r = frame.ranges[i] - truth.range;
      err_theta = std::remainder(frame.thetas[i] - truth.theta, 2.0 * M_PI);
      err_pos = (frame.cloud.points[i] - true_V).norm();
      sum_r += err_r * err_r;
      sum_theta += err_theta * err_theta;
      sum_pos += err_pos * err_pos;
      ++matched;
    }
    file << i << ',' << rid << ',' << sid << ',' << frame.cloud.points[i].x() << ','
         << frame.cloud.points[i].y() << ',' << true_x << ',' << true_y << ',' << err_r << ','
         << err_theta * kDeg << ',' << err_pos << "\n";
  }
  if (!file) throw std::runtime_error("write failed: " + out);

  std::cout << "pointcloud " << fmcw::algo_name(algo) << ": detected "
            << frame.cloud.points.size() << " of " << scene.scatterers.size() << " scatterers\n";
  if (matched > 0)
    std::cout << "rmse over " << matched << " matched points: r=" << std::sqrt(sum_r / matched)
              << " m, theta=" << std::sqrt(sum_theta / matched) * kDeg
              << " deg, position=" << std::sqrt(sum_pos / matched) << " m\n";
  std::cout << "pointcloud -> " << out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// park

int run_park(const fmcw::ParkingScene& scene, const std::string& algo_text, std::uint64_t seed,
             const std::string& out_name) {
  const fmcw::Algo algo = fmcw::algo_from_name(algo_text);
  const fmcw::ParkingResult result = fmcw::run_parking(scene, algo, seed);

  const std::string out = fmcw::output_path(fmcw::default_output_dir(), out_name);
  fmcw::write_parking_csv(out, result, scene.control.dt);
  std::cout << "park " << fmcw::algo_name(algo) << " seed=" << seed
            << ": frames=" << result.frame_count
            << " reached_goal=" << (result.reached_goal ? "yes" : "no")
            << " final_drift=" << result.final_drift << " m max_drift=" << result.max_drift
            << " m mean_cloud=" << result.mean_cloud_size
            << " dead_reckoned=" << result.dead_reckoned
            << " dropped_groups=" << result.dropped_groups << "\n";
  std::cout << "trajectory -> " << out << "\n";
  if (!result.reached_goal) {
    std::cerr << "park: aborted, goal not reached within " << scene.max_frames << " frames\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deramped FMCW MIMO radar: synthesis, estimation, bounds, and parking simulation"};
  app.require_subcommand(1);

  // Option storage. Variables with differing per-subcommand defaults are not
  // shared: CLI11 applies every registered default at parse time.
  std::string config_path, scene_path, algo_text = "fft2d", snr_text;
  std::string synth_out = "measurement", est_out = "estimates.csv", crb_out = "crb.csv";
  std::string sweep_prefix = "sweep", cloud_out = "cloud.csv", park_out = "trajectory.csv";
  std::vector<std::string> overrides, sweep_algos{"fft2d", "music2d", "lse", "mle"};
  double sigma = 0.0, snr_db = 0.0, theta_deg = 0.0;
  std::uint64_t seed = 0, park_seed = 1, seed_base = 1;
  int K = 0, est_oversample = 2048, sweep_oversample = 256, Ns = 10, Ms = 10;
  int trials = 300, threads = 0;
  SpectrumRequest spectrum;
  std::string slice_path;
  double slice_r = 0.0, slice_lo_deg = -30.0, slice_hi_deg = 30.0, slice_step_deg = 0.01;

  const auto add_overrides = [&overrides](CLI::App* cmd) {
    cmd->add_option("overrides", overrides, "key=value config overrides (CLI > file > defaults)");
  };

  CLI::App* synth = app.add_subcommand("synth", "Synthesize a measurement and export .hdr/.bin");
  synth->add_option("--config", config_path, "radar + target config file")
      ->required()
      ->check(CLI::ExistingFile);
  add_overrides(synth);
  CLI::Option* synth_sigma = synth->add_option("--sigma", sigma, "noise standard deviation");
  synth->add_option("--snr-db", snr_db, "per-antenna SNR in dB (sets sigma)")
      ->excludes(synth_sigma);
  synth->add_option("--seed", seed, "noise seed");
  synth->add_option("--out", synth_out, "output base path");

  CLI::App* estimate = app.add_subcommand("estimate", "Run an estimator on a synthesized case");
  estimate->add_option("--config", config_path, "radar + target config file")
      ->required()
      ->check(CLI::ExistingFile);
  add_overrides(estimate);
  estimate->add_option("--algo", algo_text, "fft2d | music2d | lse | mle")->required();
  estimate->add_option("-K,--targets", K, "peak count (default: config target count)");
  estimate->add_option("--oversample", est_oversample, "grid factor per bin (default 2048)");
  estimate->add_option("--music-ns", Ns, "MUSIC smoothing rows (default 10)");
  estimate->add_option("--music-ms", Ms, "MUSIC smoothing cols (default 10)");
  CLI::Option* est_sigma = estimate->add_option("--sigma", sigma, "noise standard deviation");
  estimate->add_option("--snr-db", snr_db, "per-antenna SNR in dB (sets sigma)")
      ->excludes(est_sigma);
  estimate->add_option("--seed", seed, "noise seed");
  estimate->add_option("--out", est_out, "estimates CSV");
  estimate->add_option("--spectrum", spectrum.path, "export |spectrum| CSV to this path");
  estimate->add_option("--spectrum-window", spectrum.window, "x0:x1:y0:y1 in bin units");
  estimate->add_option("--spectrum-step", spectrum.step, "grid step, bins (default 1/32)");
  estimate->add_option("--slice", slice_path, "export the LSE angle slice CSV (lse only)");
  estimate->add_option("--slice-r", slice_r, "slice range, m (default: first estimate)");
  estimate->add_option("--slice-lo-deg", slice_lo_deg, "slice start angle (default -30)");
  estimate->add_option("--slice-hi-deg", slice_hi_deg, "slice end angle (default 30)");
  estimate->add_option("--slice-step-deg", slice_step_deg, "slice step (default 0.01)");

  CLI::App* bias = app.add_subcommand("bias", "Closed-form FFT/MUSIC bias at an angle");
  bias->add_option("--theta-deg", theta_deg, "target angle, degrees")->required();
  bias->add_option("--config", config_path, "radar config file (default: built-in)")
      ->check(CLI::ExistingFile);
  add_overrides(bias);

  CLI::App* crb = app.add_subcommand("crb", "Cramer-Rao bounds over an SNR axis");
  crb->add_option("--config", config_path, "radar + target config file")
      ->required()
      ->check(CLI::ExistingFile);
  add_overrides(crb);
  crb->add_option("--snr-db", snr_text, "single value, comma list, or start:step:stop")
      ->required();
  crb->add_option("--out", crb_out, "CSV path");

  CLI::App* sweep = app.add_subcommand("sweep", "Monte-Carlo RMSE vs SNR for the estimators");
  sweep->add_option("--config", config_path, "radar + target config file")
      ->required()
      ->check(CLI::ExistingFile);
  add_overrides(sweep);
  sweep->add_option("--algo", sweep_algos, "estimators to run")->delimiter(',');
  sweep->add_option("--snr-db", snr_text, "single value, comma list, or start:step:stop")
      ->required();
  sweep->add_option("--trials", trials, "Monte-Carlo trials per SNR point (default 300)");
  sweep->add_option("--seed-base", seed_base, "base seed; trial t at point s uses base+s*trials+t");
  sweep->add_option("--oversample", sweep_oversample, "grid factor per bin (default 256)");
  sweep->add_option("--music-ns", Ns, "MUSIC smoothing rows (default 10)");
  sweep->add_option("--music-ms", Ms, "MUSIC smoothing cols (default 10)");
  sweep->add_option("--threads", threads, "worker threads (0: hardware)");
  sweep->add_option("--out-prefix", sweep_prefix, "CSV prefix, one file per estimator");

  CLI::App* pointcloud = app.add_subcommand("pointcloud", "Scatterer map from the parked pose");
  pointcloud->add_option("--scene", scene_path, "parking scene file")
      ->required()
      ->check(CLI::ExistingFile);
  add_overrides(pointcloud);
  pointcloud->add_option("--algo", algo_text, "fft2d | music2d | lse | mle | truth")->required();
  pointcloud->add_option("--seed", seed, "phase/noise seed");
  pointcloud->add_option("--out", cloud_out, "CSV path");

  CLI::App* park = app.add_subcommand("park", "Closed-loop valet parking simulation");
  park->add_option("--scene", scene_path, "parking scene file")
      ->required()
      ->check(CLI::ExistingFile);
  add_overrides(park);
  park->add_option("--algo", algo_text, "fft2d | music2d | lse | mle | truth")->required();
  park->add_option("--seed", park_seed, "simulation seed (default 1)");
  park->add_option("--out", park_out, "trajectory CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*synth)
      return run_synth(load_problem(config_path, overrides), sigma,
                       synth->count("--snr-db") > 0, snr_db, seed, synth_out);
    if (*estimate)
      return run_estimate(load_problem(config_path, overrides), algo_text, K, est_oversample, Ns,
                          Ms, sigma, estimate->count("--snr-db") > 0, snr_db, seed, est_out,
                          spectrum, slice_path, slice_r, slice_lo_deg, slice_hi_deg,
                          slice_step_deg);
    if (*bias) {
      fmcw::RadarConfig radar;
      if (!config_path.empty()) radar = load_radar_only(config_path, overrides);
      return run_bias(radar, theta_deg);
    }
    if (*crb) return run_crb(load_problem(config_path, overrides), snr_text, crb_out);
    if (*sweep)
      return run_sweep(load_problem(config_path, overrides), sweep_algos, snr_text, trials,
                       seed_base, sweep_oversample, Ns, Ms, threads, sweep_prefix);
    if (*pointcloud)
      return run_pointcloud(load_scene_checked(scene_path, overrides), algo_text, seed, cloud_out);
    if (*park)
      return run_park(load_scene_checked(scene_path, overrides), algo_text, park_seed, park_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

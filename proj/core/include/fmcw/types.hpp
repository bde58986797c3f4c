#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace fmcw {

using cd = std::complex<double>;

// Waveform, sampling and virtual-array geometry. Derived quantities are
// recomputed on access so a loaded config can never carry stale values.
struct RadarConfig {
  double f_c = 77e9;         // carrier frequency, Hz
  double B = 4e9;            // sweep bandwidth, Hz
  double sweep_time = 1e-4;  // chirp duration S, s
  int N = 256;               // samples per sweep
  int P = 4;                 // transmit antennas
  int Q = 4;                 // receive antennas
  double d = 0.0;            // antenna spacing, m; 0 selects lambda/2
  double c = 299792458.0;    // propagation speed, m/s

  int M() const { return P * Q; }
  double lambda() const { return c / f_c; }
  double spacing() const { return d > 0.0 ? d : 0.5 * lambda(); }
  double T_s() const { return sweep_time / N; }
  double chirp_rate() const { return B / sweep_time; }  // gamma = B/(N*T_s)
  // Slope of the range phase term: exponent is 2*pi*(2r + m*u)*beta()*n.
  double beta() const { return B / (c * N); }
  double range_bin() const { return c / (2.0 * B); }
  double unambiguous_range() const { return N * range_bin(); }

  // Throws std::invalid_argument when an invariant fails.
  void validate() const;
};

struct Target {
  double a = 1.0;      // reflectivity magnitude, >= 0
  double phi = 0.0;    // reflectivity phase, rad
  double r = 0.0;      // range, m
  double theta = 0.0;  // incidence angle, rad, in (-pi/2, pi/2)

  double u(const RadarConfig& cfg) const { return cfg.spacing() * std::sin(theta); }
  // Lumped phase psi = phi - pi*gamma*tau0^2 + 4*pi*f_c*r/c, tau0 = 2r/c.
  double psi(const RadarConfig& cfg) const;
};

struct MeasurementMatrix {
  Eigen::MatrixXcd data;  // N x M, z[n][m]
  RadarConfig config;
  double sigma = 0.0;                 // noise standard deviation
  std::optional<std::uint64_t> seed;  // absent for noiseless

  int N() const { return static_cast<int>(data.rows()); }
  int M() const { return static_cast<int>(data.cols()); }
};

struct TargetEstimate {
  double a = 0.0;
  double psi = 0.0;
  double r = 0.0;
  double theta = 0.0;
  double power = 0.0;  // peak magnitude of the producing search surface
};

// Shared result carrier. Grid estimators leave the iteration fields at their
// defaults; `resolved` is false when fewer separable peaks than requested
// were found (the estimates then hold however many were found).
struct EstimateResult {
  std::vector<TargetEstimate> targets;
  bool resolved = true;
  bool converged = true;
  int iterations = 0;
  double lambda_final = 0.0;
};

struct SearchWindow {
  double r_lo = 0.0, r_hi = 0.0;          // m
  double theta_lo = 0.0, theta_hi = 0.0;  // rad
};

struct GridSpec {
  int range_oversample = 2048;
  int angle_oversample = 2048;
  std::optional<SearchWindow> search_window;
};

struct BinEstimate {
  double n_p = 0.0;   // fractional range-bin index, [0, N)
  double m_p = 0.0;   // fractional angle-bin index, [0, M); >= M/2 encodes negative angles
  double power = 0.0;
};

}  // namespace fmcw

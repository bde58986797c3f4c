#include "fmcw/lse.hpp"

#include <cmath>
#include <stdexcept>

#include "fmcw/spectral.hpp"

namespace fmcw {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// J on a bin-coordinate patch; x maps to range through r = x c/(2B) and y to
// spacing through u = lambda y / M. The coupling term breaks separability in
// y, so the patch is evaluated one y-column at a time (each column separable
// in x).
Eigen::MatrixXd objective_patch(const MeasurementMatrix& z, const Eigen::VectorXd& xs,
                                const Eigen::VectorXd& ys) {
  const RadarConfig& cfg = z.config;
  const int N = z.N(), M = z.M();
  const double couple = cfg.B / (static_cast<double>(M) * N * cfg.f_c);
  Eigen::MatrixXd out(xs.size(), ys.size());
  Eigen::VectorXcd g(N);
  for (Eigen::Index iy = 0; iy < ys.size(); ++iy) {
    // Bin coordinates follow the FFT lattice convention [0, M); the coupling
    // term is not M-periodic, so y must be unwrapped to the physical branch.
    const double y = std::remainder(ys[iy], static_cast<double>(M));
    for (int n = 0; n < N; ++n) {
      cd acc(0.0, 0.0);
      for (int m = 0; m < M; ++m)
        acc += std::conj(z.data(n, m)) * std::polar(1.0, kTwoPi * y * m * (1.0 / M + couple * n));
      g[n] = acc;
    }
    for (Eigen::Index ix = 0; ix < xs.size(); ++ix) {
      cd s(0.0, 0.0);
      const double step = kTwoPi * xs[ix] / N;
      const cd ratio = std::polar(1.0, step);
      cd phase(1.0, 0.0);
      for (int n = 0; n < N; ++n) {
        s += g[n] * phase;
        phase *= ratio;
      }
      out(ix, iy) = std::abs(s);
    }
  }
  return out;
}

}  // namespace

double lse_objective(const MeasurementMatrix& z, double r, double u) {
  const RadarConfig& cfg = z.config;
  const int N = z.N(), M = z.M();
  const double beta = cfg.beta();
  cd acc(0.0, 0.0);
  for (int m = 0; m < M; ++m) {
    const double col_phase = kTwoPi * (u / cfg.lambda()) * m;
    const double step = kTwoPi * (2.0 * r + m * u) * beta;
    cd inner(0.0, 0.0);
    const cd ratio = std::polar(1.0, step);
    cd phase(1.0, 0.0);
    for (int n = 0; n < N; ++n) {
      inner += std::conj(z.data(n, m)) * phase;
      phase *= ratio;
    }
    acc += inner * std::polar(1.0, col_phase);
  }
  return std::abs(acc);
}

EstimateResult lse_estimate(const MeasurementMatrix& z, const std::vector<TargetEstimate>& init,
                            const GridSpec& grid) {
  const RadarConfig& cfg = z.config;
  const FieldFn field = [&z](const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) {
    return objective_patch(z, xs, ys);
  };
  EstimateResult out;
  out.resolved = !init.empty();
  for (const TargetEstimate& seed : init) {
    const double x0 = range_to_bin(cfg, seed.r);
    if (x0 < 0.0 || x0 >= cfg.N)
      throw std::runtime_error("lse: seed outside the unambiguous range");
    const double y0 = theta_to_bin(cfg, seed.theta);
    // patch_half 4 at the first level spans exactly +-1 native bin.
    const ZoomResult zr = zoom_argmax(field, x0, y0, grid.range_oversample, grid.angle_oversample,
                                      static_cast<double>(z.M()), {}, 2.0, 4);
    TargetEstimate e;
    e.r = bin_to_range(cfg, zr.x);
    e.theta = bin_to_theta(cfg, zr.y);
    e.power = zr.value;
    const auto [a, psi] = matched_amplitude(z, e.r, cfg.spacing() * std::sin(e.theta));
    e.a = a;
    e.psi = psi;
    out.targets.push_back(e);
  }
  return out;
}

double lse_slice_peak(const MeasurementMatrix& z, double r_fixed, double theta_lo, double theta_hi,
                      double resolution) {
  if (!(theta_hi > theta_lo)) throw std::runtime_error("lse slice: empty theta interval");
  if (!(resolution > 0.0)) throw std::runtime_error("lse slice: resolution must be positive");
  const double d = z.config.spacing();
  double lo = theta_lo, hi = theta_hi;
  double best_theta = 0.5 * (lo + hi);
  const int points = 40;
  while (true) {
    const double step = (hi - lo) / points;
    double best = -1.0;
    for (int i = 0; i <= points; ++i) {
      const double theta = lo + i * step;
      const double v = lse_objective(z, r_fixed, d * std::sin(theta));
      if (v > best) {
        best = v;
        best_theta = theta;
      }
    }
    if (step <= resolution) break;
    lo = std::max(theta_lo, best_theta - step);
    hi = std::min(theta_hi, best_theta + step);
  }
  return best_theta;
}

}  // namespace fmcw

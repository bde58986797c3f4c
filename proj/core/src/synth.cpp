#include "fmcw/synth.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace fmcw {
namespace {

void add_target(Eigen::MatrixXcd& z, const RadarConfig& cfg, const Target& t) {
  const int N = cfg.N;
  const int M = cfg.M();
  const double beta = cfg.beta();
  const double u = t.u(cfg);
  const cd front = std::polar(t.a, t.psi(cfg));
  // Column m: front * e^{j 2 pi (u/lambda) m} * e^{j 2 pi (2r + m u) beta n}.
  for (int m = 0; m < M; ++m) {
    const cd col = front * std::polar(1.0, 2.0 * M_PI * (u / cfg.lambda()) * m);
    const double step = 2.0 * M_PI * (2.0 * t.r + m * u) * beta;
    const cd ratio = std::polar(1.0, step);
    cd phase(1.0, 0.0);
    for (int n = 0; n < N; ++n) {
      z(n, m) += col * phase;
      phase *= ratio;
    }
  }
}

}  // namespace

MeasurementMatrix synthesize_target(const RadarConfig& config, const Target& target) {
  return synthesize_noiseless(config, {target});
}

MeasurementMatrix synthesize_noiseless(const RadarConfig& config,
                                       const std::vector<Target>& targets) {
  config.validate();
  for (const Target& t : targets) {
    if (t.r < 0.0) throw std::runtime_error("synthesize: negative range");
    if (t.r >= config.unambiguous_range())
      throw std::runtime_error("synthesize: target beyond the unambiguous range");
  }
  MeasurementMatrix z;
  z.config = config;
  z.sigma = 0.0;
  z.data = Eigen::MatrixXcd::Zero(config.N, config.M());
  for (const Target& t : targets) add_target(z.data, config, t);
  return z;
}

MeasurementMatrix synthesize_measurement(const RadarConfig& config,
                                         const std::vector<Target>& targets, double sigma,
                                         std::uint64_t seed) {
  if (sigma < 0.0) throw std::runtime_error("synthesize: negative sigma");
  MeasurementMatrix z = synthesize_noiseless(config, targets);
  z.sigma = sigma;
  z.seed = seed;
  if (sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> part(0.0, sigma / std::sqrt(2.0));
    for (int m = 0; m < z.M(); ++m)
      for (int n = 0; n < z.N(); ++n) {
        const double re = part(rng);
        const double im = part(rng);
        z.data(n, m) += cd(re, im);
      }
  }
  return z;
}

double sigma_for_snr(const RadarConfig& config, double a, double snr_db) {
  const double snr = std::pow(10.0, snr_db / 10.0);
  return std::sqrt(config.P * a * a / snr);
}

double snr_db_for_sigma(const RadarConfig& config, double a, double sigma) {
  if (!(sigma > 0.0)) throw std::runtime_error("snr undefined for sigma = 0");
  return 10.0 * std::log10(config.P * a * a / (sigma * sigma));
}

}  // namespace fmcw

#include "fmcw/crb.hpp"

#include <cmath>
#include <stdexcept>

#include "fmcw/synth.hpp"

namespace fmcw {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;

void check_inputs(const RadarConfig& config, const Target& target, double sigma) {
  config.validate();
  if (!(sigma > 0.0)) throw std::runtime_error("fisher: sigma must be positive");
  if (!(target.a > 0.0)) throw std::runtime_error("fisher: amplitude must be positive");
}

}  // namespace

FisherInfo fisher_matrix(const RadarConfig& config, const Target& target, double sigma) {
  check_inputs(config, target, sigma);
  const double N = config.N;
  const double M = config.M();
  const double a = target.a;
  const double beta = config.beta();
  const double lambda = config.lambda();
  const double s1n = N * (N - 1.0) / 2.0;
  const double s2n = N * (N - 1.0) * (2.0 * N - 1.0) / 6.0;
  const double s1m = M * (M - 1.0) / 2.0;
  const double s2m = M * (M - 1.0) * (2.0 * M - 1.0) / 6.0;
  const double g = 2.0 / (sigma * sigma);

  FisherInfo out;
  out.sigma = sigma;
  out.config = config;
  out.target = target;
  Eigen::Matrix4d& I = out.matrix;
  I.setZero();
  I(0, 0) = g * M * N;
  I(1, 1) = g * a * a * M * N;
  I(1, 2) = g * 4.0 * M_PI * a * a * beta * M * s1n;
  I(1, 3) = g * kTwoPi * a * a * s1m * (N / lambda + beta * s1n);
  I(2, 2) = g * 16.0 * M_PI * M_PI * a * a * beta * beta * M * s2n;
  I(2, 3) = g * 8.0 * M_PI * M_PI * a * a * beta * s1m * (s1n / lambda + beta * s2n);
  I(3, 3) =
      g * 4.0 * M_PI * M_PI * a * a * s2m * (N / (lambda * lambda) + 2.0 * beta * s1n / lambda + beta * beta * s2n);
  I(2, 1) = I(1, 2);
  I(3, 1) = I(1, 3);
  I(3, 2) = I(2, 3);
  return out;
}

FisherInfo fisher_matrix_direct(const RadarConfig& config, const Target& target, double sigma) {
  check_inputs(config, target, sigma);
  const double a = target.a;
  const double beta = config.beta();
  const double lambda = config.lambda();
  FisherInfo out;
  out.sigma = sigma;
  out.config = config;
  out.target = target;
  Eigen::Matrix4d I = Eigen::Matrix4d::Zero();
  for (int n = 0; n < config.N; ++n)
    for (int m = 0; m < config.M(); ++m) {
      // Phase gradient of the model in [a, psi, r, u]; the amplitude slot
      // carries 1/a because d mu / d a = mu / a.
      const Eigen::Vector4d grad(1.0 / a, 1.0, 2.0 * kTwoPi * beta * n,
                                 kTwoPi * m * (1.0 / lambda + beta * n));
      Eigen::Matrix4d outer = a * a * grad * grad.transpose();
      // Re[conj(d mu/d a) d mu/d psi_like] = 0: the amplitude derivative is
      // in phase quadrature with the others.
      outer.row(0).tail<3>().setZero();
      outer.col(0).tail<3>().setZero();
      I += outer;
    }
  I *= 2.0 / (sigma * sigma);
  out.matrix = I;
  return out;
}

CrbResult crb_range_angle(const FisherInfo& fim, double theta) {
  const double d = fim.config.spacing();
  const double cos_t = std::cos(theta);
  if (std::abs(cos_t) < 1e-12)
    throw std::runtime_error("crb: angle bound undefined at |theta| = pi/2");
  const Eigen::Matrix4d inv = fim.matrix.inverse();
  CrbResult out;
  out.fim = fim;
  out.sigma_r = std::sqrt(inv(2, 2));
  out.sigma_theta = std::sqrt(inv(3, 3)) / (d * cos_t);
  return out;
}

CrbResult crb_for_snr(const RadarConfig& config, const Target& target, double snr_db) {
  const double sigma = sigma_for_snr(config, target.a, snr_db);
  return crb_range_angle(fisher_matrix(config, target, sigma), target.theta);
}

}  // namespace fmcw

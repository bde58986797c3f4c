#include "fmcw/mle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fmcw/series.hpp"
#include "fmcw/spectral.hpp"

namespace fmcw {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Tp[m] = sum_n n^p z[n,m]* e^{j 2 pi (2r + m u) beta n}, p = 0 (,1,2): the
// data correlation and its n-moment companions, one pass over z with phase
// recurrences (column m phase = column m-1 phase times e^{j 2 pi u beta n}).
struct Moments {
  Eigen::VectorXcd t0, t1, t2;
};

Moments data_moments(const MeasurementMatrix& z, double r, double u, bool need_12) {
  const int N = z.N(), M = z.M();
  const double beta = z.config.beta();
  Moments mo;
  mo.t0.setZero(M);
  if (need_12) {
    mo.t1.setZero(M);
    mo.t2.setZero(M);
  }
  Eigen::VectorXcd col(N), q(N);
  for (int n = 0; n < N; ++n) {
    col[n] = std::polar(1.0, kTwoPi * 2.0 * r * beta * n);
    q[n] = std::polar(1.0, kTwoPi * u * beta * n);
  }
  for (int m = 0; m < M; ++m) {
    cd s0(0, 0), s1(0, 0), s2(0, 0);
    for (int n = 0; n < N; ++n) {
      const cd term = std::conj(z.data(n, m)) * col[n];
      s0 += term;
      if (need_12) {
        s1 += static_cast<double>(n) * term;
        s2 += static_cast<double>(n) * static_cast<double>(n) * term;
      }
      col[n] *= q[n];
    }
    mo.t0[m] = s0;
    if (need_12) {
      mo.t1[m] = s1;
      mo.t2[m] = s2;
    }
  }
  return mo;
}

// S (and its n-moment companions V1, V2) with the other targets' current
// contributions removed through the closed-form cross-correlation series.
struct Cancelled {
  Eigen::VectorXcd s, v1, v2;
};

Cancelled cancelled_moments(const MlState& state, const MeasurementMatrix& z, int k,
                            bool need_12) {
  const RadarConfig& cfg = z.config;
  const int M = z.M(), N = z.N();
  const double beta = cfg.beta();
  const double lambda = cfg.lambda();
  const Moments mo = data_moments(z, state.r[k], state.u[k], need_12);
  Cancelled out;
  out.s = mo.t0;
  if (need_12) {
    out.v1 = mo.t1;
    out.v2 = mo.t2;
  }
  for (int l = 0; l < state.K(); ++l) {
    if (l == k) continue;
    const double dr = state.r[k] - state.r[l];
    const double du = state.u[k] - state.u[l];
    for (int m = 0; m < M; ++m) {
      const double chi = kTwoPi * (2.0 * dr + m * du) * beta;
      const PowerSums ps = power_sums(chi, N);
      const cd coef =
          state.a[l] * std::polar(1.0, -(state.psi[l] + kTwoPi * (state.u[l] / lambda) * m));
      out.s[m] -= coef * ps.d0;
      if (need_12) {
        out.v1[m] -= coef * ps.d1;
        out.v2[m] -= coef * ps.d2;
      }
    }
  }
  return out;
}

cd column_phase(const MlState& state, const RadarConfig& cfg, int k, int m) {
  return std::polar(1.0, state.psi[k] + kTwoPi * (state.u[k] / cfg.lambda()) * m);
}

double apply_newton(double f, double f_prime, double cap, bool guard) {
  double step;
  if (f_prime > 0.0 || !guard) {
    step = f / f_prime;
    step = std::clamp(step, -cap, cap);
  } else {
    // Non-concave curvature: fall back to a capped gradient-sign step.
    step = (f > 0.0 ? cap : (f < 0.0 ? -cap : 0.0));
  }
  return step;
}

}  // namespace

cd corr_single(const MeasurementMatrix& z, double r_k, double u_k, int m) {
  const int N = z.N();
  const double beta = z.config.beta();
  const double step = kTwoPi * (2.0 * r_k + m * u_k) * beta;
  cd acc(0, 0);
  const cd ratio = std::polar(1.0, step);
  cd phase(1.0, 0.0);
  for (int n = 0; n < N; ++n) {
    acc += std::conj(z.data(n, m)) * phase;
    phase *= ratio;
  }
  return acc;
}

cd corr_cross(double r_k, double u_k, double r_l, double u_l, int m, const RadarConfig& config) {
  const double chi = kTwoPi * (2.0 * (r_k - r_l) + m * (u_k - u_l)) * config.beta();
  return power_sums(chi, config.N).d0;
}

std::vector<cd> interference_cancelled(const MlState& state, const MeasurementMatrix& z, int k) {
  const Cancelled c = cancelled_moments(state, z, k, false);
  return std::vector<cd>(c.s.data(), c.s.data() + c.s.size());
}

PsiUpdate update_psi(MlState& state, const MeasurementMatrix& z, int k) {
  const RadarConfig& cfg = z.config;
  const Cancelled c = cancelled_moments(state, z, k, false);
  cd g(0, 0);
  for (int m = 0; m < z.M(); ++m)
    g += std::polar(1.0, kTwoPi * (state.u[k] / cfg.lambda()) * m) * c.s[m];
  if (std::abs(g) < 1e-300) return {state.psi[k], true};
  state.psi[k] = -std::arg(g);
  return {state.psi[k], false};
}

void update_amplitudes(MlState& state, const MeasurementMatrix& z) {
  const RadarConfig& cfg = z.config;
  const int K = state.K();
  const int M = z.M(), N = z.N();
  const double lambda = cfg.lambda();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(K, K);
  Eigen::VectorXd y(K);
  for (int k = 0; k < K; ++k) {
    B(k, k) = static_cast<double>(M) * N;
    const Moments mo = data_moments(z, state.r[k], state.u[k], false);
    cd acc(0, 0);
    for (int m = 0; m < M; ++m)
      acc += std::polar(1.0, kTwoPi * (state.u[k] / lambda) * m) * mo.t0[m];
    y[k] = (std::polar(1.0, state.psi[k]) * acc).real();
    for (int l = 0; l < K; ++l) {
      if (l == k) continue;
      cd cross(0, 0);
      for (int m = 0; m < M; ++m) {
        const double du = state.u[k] - state.u[l];
        cross += std::polar(1.0, kTwoPi * (du / lambda) * m) *
                 corr_cross(state.r[k], state.u[k], state.r[l], state.u[l], m, cfg);
      }
      B(k, l) = (std::polar(1.0, state.psi[k] - state.psi[l]) * cross).real();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double s_max = svd.singularValues()(0);
  const double s_min = svd.singularValues()(K - 1);
  if (!(s_min > 0.0) || s_max / s_min > 1e12)
    throw std::runtime_error("amplitude system ill-conditioned: targets nearly coincident");
  Eigen::VectorXd a = svd.solve(y);
  for (int k = 0; k < K; ++k) {
    if (a[k] < 0.0) {
      // Fold the sign into the phase so amplitudes stay non-negative.
      a[k] = -a[k];
      state.psi[k] = std::remainder(state.psi[k] + M_PI, kTwoPi);
    }
    state.a[k] = a[k];
  }
}

MlDerivatives ml_derivatives(const MlState& state, const MeasurementMatrix& z, int k) {
  const RadarConfig& cfg = z.config;
  const int M = z.M();
  const double lambda = cfg.lambda();
  const double beta = cfg.beta();
  const double a_k = state.a[k];
  const Cancelled c = cancelled_moments(state, z, k, true);
  MlDerivatives d{0.0, 0.0, 0.0, 0.0};
  for (int m = 0; m < M; ++m) {
    const cd phi = column_phase(state, cfg, k, m);
    // u-derivatives of S enter through j 2 pi beta m (n-weighting); the
    // explicit phase dependence through 2 pi u m / lambda adds the Im terms.
    const cd s_u1 = cd(0.0, kTwoPi * beta * m) * c.v1[m];
    const cd s_u2 = -std::pow(kTwoPi * beta * m, 2) * c.v2[m];
    const cd s_r1 = cd(0.0, 2.0 * kTwoPi * beta) * c.v1[m];
    const cd s_r2 = -std::pow(2.0 * kTwoPi * beta, 2) * c.v2[m];
    const double cm = kTwoPi * m / lambda;
    d.f_u += 2.0 * a_k * cm * (phi * c.s[m]).imag() - 2.0 * a_k * (phi * s_u1).real();
    d.f_u_prime += 2.0 * a_k * cm * cm * (phi * c.s[m]).real() +
                   4.0 * a_k * cm * (phi * s_u1).imag() - 2.0 * a_k * (phi * s_u2).real();
    d.f_r += -2.0 * a_k * (phi * s_r1).real();
    d.f_r_prime += -2.0 * a_k * (phi * s_r2).real();
  }
  return d;
}

double newton_step_u(MlState& state, const MeasurementMatrix& z, int k, const MlSettings& s) {
  const double cap = s.max_step_u > 0.0 ? s.max_step_u : z.config.lambda() / 8.0;
  const MlDerivatives d = ml_derivatives(state, z, k);
  const double step = apply_newton(d.f_u, d.f_u_prime, cap, s.hessian_guard);
  const double before = state.u[k];
  const double limit = z.config.spacing();
  state.u[k] = std::clamp(before - step, -limit, limit);
  return state.u[k] - before;
}

double newton_step_r(MlState& state, const MeasurementMatrix& z, int k, const MlSettings& s) {
  const double cap = s.max_step_r > 0.0 ? s.max_step_r : z.config.range_bin() / 8.0;
  const MlDerivatives d = ml_derivatives(state, z, k);
  const double step = apply_newton(d.f_r, d.f_r_prime, cap, s.hessian_guard);
  const double before = state.r[k];
  state.r[k] = std::clamp(before - step, 0.0, z.config.unambiguous_range());
  return state.r[k] - before;
}

double likelihood(const MlState& state, const MeasurementMatrix& z) {
  const RadarConfig& cfg = z.config;
  const int K = state.K();
  const int M = z.M(), N = z.N();
  const double lambda = cfg.lambda();
  double L = 0.0;
  for (int k = 0; k < K; ++k) {
    const Moments mo = data_moments(z, state.r[k], state.u[k], false);
    cd acc(0, 0);
    for (int m = 0; m < M; ++m) acc += column_phase(state, cfg, k, m) * mo.t0[m];
    L += -2.0 * state.a[k] * acc.real();
    L += static_cast<double>(M) * N * state.a[k] * state.a[k];
    for (int l = 0; l < K; ++l) {
      if (l == k) continue;
      cd cross(0, 0);
      for (int m = 0; m < M; ++m) {
        const double du = state.u[k] - state.u[l];
        cross += std::polar(1.0, kTwoPi * (du / lambda) * m) *
                 corr_cross(state.r[k], state.u[k], state.r[l], state.u[l], m, cfg);
      }
      L += state.a[k] * state.a[l] * (std::polar(1.0, state.psi[k] - state.psi[l]) * cross).real();
    }
  }
  return L;
}

EstimateResult mle_estimate(const MeasurementMatrix& z, int K, const MlSettings& settings,
                            const std::vector<TargetEstimate>* init) {
  if (K < 1) throw std::runtime_error("mle: K must be >= 1");
  const RadarConfig& cfg = z.config;

  std::vector<TargetEstimate> seeds;
  if (init) {
    seeds = *init;
  } else {
    GridSpec native;
    native.range_oversample = 1;
    native.angle_oversample = 1;
    seeds = fft2d_estimate(z, K, native).targets;
  }
  EstimateResult out;
  out.resolved = static_cast<int>(seeds.size()) == K;
  if (seeds.empty()) throw std::runtime_error("mle: no initialization peaks found");

  MlState state;
  for (const TargetEstimate& s : seeds) {
    state.a.push_back(s.a);
    state.psi.push_back(s.psi);
    state.r.push_back(s.r);
    state.u.push_back(cfg.spacing() * std::sin(s.theta));
  }
  const std::vector<double> seed_r = state.r, seed_u = state.u;
  const auto apply_trust = [&] {
    for (int k = 0; k < state.K(); ++k) {
      if (settings.trust_u > 0.0)
        state.u[k] = std::clamp(state.u[k], seed_u[k] - settings.trust_u,
                                seed_u[k] + settings.trust_u);
      if (settings.trust_r > 0.0)
        state.r[k] = std::clamp(state.r[k], seed_r[k] - settings.trust_r,
                                seed_r[k] + settings.trust_r);
    }
  };

  double prev = likelihood(state, z);
  const double delta = settings.delta_rel * std::abs(prev);
  if (settings.lambda_history) {
    settings.lambda_history->clear();
    settings.lambda_history->push_back(prev);
  }
  out.converged = false;
  int iter = 0;
  while (iter < settings.max_iters) {
    ++iter;
    for (int k = 0; k < state.K(); ++k) update_psi(state, z, k);
    update_amplitudes(state, z);
    for (int k = 0; k < state.K(); ++k) newton_step_u(state, z, k, settings);
    for (int k = 0; k < state.K(); ++k) newton_step_r(state, z, k, settings);
    apply_trust();
    const double now = likelihood(state, z);
    if (settings.lambda_history) settings.lambda_history->push_back(now);
    const bool settled = std::abs(now - prev) < delta;
    prev = now;
    if (settled) {
      out.converged = true;
      break;
    }
  }
  state.iteration = iter;
  state.lambda = prev;

  out.iterations = iter;
  out.lambda_final = prev;
  for (int k = 0; k < state.K(); ++k) {
    TargetEstimate e;
    e.a = state.a[k];
    e.psi = state.psi[k];
    e.r = state.r[k];
    e.theta = std::asin(std::clamp(state.u[k] / cfg.spacing(), -1.0, 1.0));
    e.power = state.a[k] * z.M() * z.N();
    out.targets.push_back(e);
  }
  return out;
}

}  // namespace fmcw

#pragma once

#include "fmcw/types.hpp"

namespace fmcw {

struct MlSettings {
  // Termination: |L(i) - L(i-1)| < delta_rel * |L(0)|. The default is sized so
  // noiseless runs settle below 1e-6 m / 1e-5 deg; it sits well above the
  // ~1e-15 relative floating-point floor of the likelihood evaluation.
  double delta_rel = 1e-12;
  int max_iters = 100;
  double max_step_u = 0.0;  // Newton step clamp; 0 selects lambda/8
  double max_step_r = 0.0;  // 0 selects (c/2B)/8
  bool hessian_guard = true;
  // Trust region half-widths around each seed (0 disables). Dense multi-target
  // scenes need them: a target wandering out of its own basin poisons the
  // cancellation for every other target.
  double trust_u = 0.0;
  double trust_r = 0.0;
  std::vector<double>* lambda_history = nullptr;  // optional per-iteration log
};

struct MlState {
  std::vector<double> a, psi, r, u;
  int iteration = 0;
  double lambda = 0.0;
  int K() const { return static_cast<int>(a.size()); }
};

// R_(k)^(m) = sum_n z[n,m]* e^{j 2 pi (2 r_k + m u_k) (B/(cN)) n}.
cd corr_single(const MeasurementMatrix& z, double r_k, double u_k, int m);

// R_(l,k)^(m) = sum_n e^{j 2 pi (2(r_k - r_l) + m(u_k - u_l)) (B/(cN)) n};
// equals N when the parameter pairs coincide. Closed-form geometric series.
cd corr_cross(double r_k, double u_k, double r_l, double u_l, int m, const RadarConfig& config);

// S_(k)^(m) = R_(k)^(m) - sum_{l != k} a_l e^{-j(psi_l + 2 pi (u_l/lambda) m)} R_(l,k)^(m),
// the correlation with the other targets' current contributions removed.
std::vector<cd> interference_cancelled(const MlState& state, const MeasurementMatrix& z, int k);

// psi_k = -arg( sum_m e^{j 2 pi (u_k/lambda) m} S_(k)^(m) ); zero-magnitude
// argument keeps the previous psi_k and reports degenerate = true.
struct PsiUpdate {
  double psi;
  bool degenerate;
};
PsiUpdate update_psi(MlState& state, const MeasurementMatrix& z, int k);

// Joint amplitude solve B a = y, B(k,k) = MN, B symmetric. Throws when the
// system's condition number exceeds 1e12 (targets nearly coincident).
void update_amplitudes(MlState& state, const MeasurementMatrix& z);

// Jacobian/Hessian of the likelihood in u_k and r_k (Appendix A.3/A.4 forms).
struct MlDerivatives {
  double f_u, f_u_prime, f_r, f_r_prime;
};
MlDerivatives ml_derivatives(const MlState& state, const MeasurementMatrix& z, int k);

// One guarded Newton update of u_k (respectively r_k): step = f/f', clamped
// to the settings cap; non-concave curvature (f' <= 0) falls back to a
// clamped gradient-sign step. Returns the applied step.
double newton_step_u(MlState& state, const MeasurementMatrix& z, int k, const MlSettings& s);
double newton_step_r(MlState& state, const MeasurementMatrix& z, int k, const MlSettings& s);

// Eq. (27) misfit: L = -2 sum_k a_k Re sum_m e^{j(psi_k + 2 pi u_k m / lambda)} R_(k)^(m)
//   + sum_k sum_{l != k} a_k a_l Re[e^{j(psi_k - psi_l)} sum_m e^{j 2 pi (u_k - u_l) m / lambda} R_(l,k)^(m)]
//   + M N sum_k a_k^2.
// Algorithm 1 minimizes it; at the truth on noiseless K=1 data L = -M N a^2.
double likelihood(const MlState& state, const MeasurementMatrix& z);

// Algorithm 1: native N x M grid initialization (unless `init` supplies
// seeds), then per iteration psi (all k), joint amplitudes, Newton u (all k),
// Newton r (all k), until |L(i) - L(i-1)| < delta or max_iters.
EstimateResult mle_estimate(const MeasurementMatrix& z, int K, const MlSettings& settings,
                            const std::vector<TargetEstimate>* init = nullptr);

}  // namespace fmcw

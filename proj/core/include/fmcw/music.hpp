#pragma once

#include "fmcw/types.hpp"

namespace fmcw {

// 2D-MUSIC with forward-only spatial smoothing: the covariance of vectorized
// Ns x Ms sliding blocks of z is eigen-decomposed and the pseudospectrum
//   P(x,y) = 1 / (Ns Ms - ||Es^H a(x,y)||^2)
// is searched, with steering a[(i,j)] = e^{j 2 pi (x i / N + y j / M)} -- the
// coupling term is deliberately absent, which is what biases the estimates.
// Returns the K largest pseudospectrum peaks converted to (r, theta).
// Errors: (N-Ns+1)(M-Ms+1) < K+1 (rank-deficient covariance) or K >= Ns*Ms.
EstimateResult music2d_estimate(const MeasurementMatrix& z, int K, int Ns, int Ms,
                                const GridSpec& grid);

std::vector<BinEstimate> music2d_peaks(const MeasurementMatrix& z, int K, int Ns, int Ms,
                                       const GridSpec& grid);

// Pseudospectrum on the outer product of the bin-index vectors (plot export).
Eigen::MatrixXd music2d_spectrum(const MeasurementMatrix& z, int K, int Ns, int Ms,
                                 const Eigen::VectorXd& xs, const Eigen::VectorXd& ys);

}  // namespace fmcw

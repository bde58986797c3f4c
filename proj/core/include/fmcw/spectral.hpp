#pragma once

#include <functional>
#include <utility>

#include "fmcw/types.hpp"

namespace fmcw {

// S(x,y) = sum_n sum_m z[n,m] e^{-j 2 pi x n / N} e^{-j 2 pi y m / M}.
cd dtft_value(const MeasurementMatrix& z, double x, double y);

// |S| on the outer product of the index vectors (separable evaluation).
Eigen::MatrixXd dtft_patch(const MeasurementMatrix& z, const Eigen::VectorXd& xs,
                           const Eigen::VectorXd& ys);

// Native (no padding) 2D DFT magnitudes, N x M.
Eigen::MatrixXd fft2d_native(const MeasurementMatrix& z);

// Generic hierarchical argmax refinement on the exact oversampled lattice:
// starting near (x0, y0) in native-bin units, searches +-patch_half points of
// a field at lattice factors 4, 32, 256, ... up to (fx, fy). `wrap_y` > 0
// treats the y axis modulo wrap_y. Equivalent to the argmax of a fully
// zero-padded spectrum for an isolated peak, without the O(N M fx fy) cost.
struct ZoomResult {
  double x = 0.0, y = 0.0, value = 0.0;
};
using FieldFn =
    std::function<Eigen::MatrixXd(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys)>;
ZoomResult zoom_argmax(const FieldFn& field, double x0, double y0, int fx, int fy,
                       double wrap_y, const std::vector<std::pair<double, double>>& exclude = {},
                       double exclude_radius = 2.0, int patch_half = 10);

// K strongest local maxima of the zero-padded |2D-FFT|, converted through
// r = x c/(2B), theta = asin(2 y / M) with y unwrapped from [0, M) to signed
// values. Peaks are isolated with a +-2 native-bin exclusion zone. When fewer
// than K separable peaks exist the result carries `resolved = false`.
EstimateResult fft2d_estimate(const MeasurementMatrix& z, int K, const GridSpec& grid);

// Same peak search reported in bin units (n_p, m_p).
std::vector<BinEstimate> fft2d_peaks(const MeasurementMatrix& z, int K, const GridSpec& grid);

// Eq. (21)/(22): r_bias = ((M-1) lambda / 8) sin(theta),
// theta_bias = asin((1 + B/(2 f_c)) sin(theta)) - theta.
std::pair<double, double> bias_prediction(const RadarConfig& config, double theta);

// Matched-filter amplitude/phase at (r, u): a e^{j psi} recovered from the
// correlations, exact for an isolated target at its true parameters.
std::pair<double, double> matched_amplitude(const MeasurementMatrix& z, double r, double u);

// Bin/physical conversions shared by the estimators.
double bin_to_range(const RadarConfig& cfg, double n_p);
double bin_to_theta(const RadarConfig& cfg, double m_p);  // wraps m_p >= M/2 negative
double range_to_bin(const RadarConfig& cfg, double r);
double theta_to_bin(const RadarConfig& cfg, double theta);  // in [0, M)

}  // namespace fmcw

#pragma once

#include "fmcw/types.hpp"

namespace fmcw {

// Single-target matched objective with the coupling term retained:
//   J(r, u) = | sum_{n,m} z[n,m]* e^{j 2 pi (u/lambda) m} e^{j 2 pi (2r + m u) (B/(cN)) n} |.
double lse_objective(const MeasurementMatrix& z, double r, double u);

// Per-target localized refinement of J around the provided seeds (from
// fft2d_estimate): +-1 native bin window searched on the hierarchical lattice
// at the grid's oversampling factors. Interference between targets is not
// cancelled. Errors: seed outside the measurement's unambiguous range.
EstimateResult lse_estimate(const MeasurementMatrix& z, const std::vector<TargetEstimate>& init,
                            const GridSpec& grid);

// J(r_fixed, u(theta)) profile over theta, for slice plots; returns theta of
// the maximum inside [theta_lo, theta_hi] refined to `resolution` rad.
double lse_slice_peak(const MeasurementMatrix& z, double r_fixed, double theta_lo,
                      double theta_hi, double resolution = 1e-7);

}  // namespace fmcw

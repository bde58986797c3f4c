#pragma once

#include "fmcw/types.hpp"

namespace fmcw {

// 4x4 Fisher information for the single-target parameter vector
// omega = [a, psi, r, u]; entry (0,0) = 2MN/sigma^2 and the rest of the
// a-row/column vanish, so the bound decouples into a and the 3x3 block.
struct FisherInfo {
  Eigen::Matrix4d matrix;
  double sigma = 0.0;
  RadarConfig config;
  Target target;
};

struct CrbResult {
  double sigma_r = 0.0;      // m
  double sigma_theta = 0.0;  // rad
  FisherInfo fim;
};

// Closed-form entries (elementary index sums, O(1)).
FisherInfo fisher_matrix(const RadarConfig& config, const Target& target, double sigma);

// Reference implementation: direct O(NM) double sum over the mu/nu partial
// derivatives. Kept as the oracle the closed form is tested against.
FisherInfo fisher_matrix_direct(const RadarConfig& config, const Target& target, double sigma);

// sigma_r = sqrt([I^-1]_{r,r}), sigma_theta = sqrt([I^-1]_{u,u}) / (d cos(theta)).
CrbResult crb_range_angle(const FisherInfo& fim, double theta);

CrbResult crb_for_snr(const RadarConfig& config, const Target& target, double snr_db);

}  // namespace fmcw

#pragma once

#include <cstdint>
#include <vector>

#include "fmcw/types.hpp"

namespace fmcw {

// Deramped single-target matrix per the approximated model:
// z[n,m] = a * e^{j psi} * e^{j 2 pi (u/lambda) m} * e^{j 2 pi (2r + m u) (B/(cN)) n}.
// Rejects targets beyond the unambiguous range 2Br/c < N.
MeasurementMatrix synthesize_target(const RadarConfig& config, const Target& target);

// Sum of per-target syntheses plus i.i.d. circular complex Gaussian noise of
// variance sigma^2 (real and imaginary parts each N(0, sigma^2/2)). Noise is
// drawn entry by entry, n fastest within each column m, from one stream
// seeded with `seed`, so trials are reproducible.
MeasurementMatrix synthesize_measurement(const RadarConfig& config,
                                         const std::vector<Target>& targets, double sigma,
                                         std::uint64_t seed);
MeasurementMatrix synthesize_noiseless(const RadarConfig& config,
                                       const std::vector<Target>& targets);

// Paper SNR convention: SNR = P a^2 / sigma^2.
double sigma_for_snr(const RadarConfig& config, double a, double snr_db);
double snr_db_for_sigma(const RadarConfig& config, double a, double sigma);

}  // namespace fmcw

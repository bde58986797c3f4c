#pragma once

#include <string>

#include "fmcw/types.hpp"

namespace fmcw {

// Measurement export is a two-file pair sharing a base path:
//   <base>.hdr  key=value text: config fields, sigma, seed (if any), N, M
//   <base>.bin  N*M complex samples as little-endian float64 (re, im) pairs,
//               row-major (m fastest within each row n)
void export_measurement(const MeasurementMatrix& z, const std::string& base_path);
MeasurementMatrix import_measurement(const std::string& base_path);

// Default output directory: $FMCW_OUTPUT_DIR when set, else ".".
std::string default_output_dir();
// Joins dir and name unless name is already absolute.
std::string output_path(const std::string& dir, const std::string& name);

// CSV emitters. All files get a header row.
void write_estimates_csv(const std::string& path, const std::string& algo,
                         const std::vector<TargetEstimate>& estimates);
void write_spectrum_csv(const std::string& path, const Eigen::VectorXd& xs,
                        const Eigen::VectorXd& ys, const Eigen::MatrixXd& magnitudes);

}  // namespace fmcw

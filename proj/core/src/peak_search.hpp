#pragma once

#include "fmcw/spectral.hpp"

namespace fmcw {
namespace detail {

// Shared K-peak search: local maxima of the native map (y circular), greedy
// pick by magnitude with a +-2 native-bin separation, then hierarchical zoom
// of `field` to the grid's lattice with the other picks excluded. Fewer than
// K picks means the scene was not resolved at native granularity.
std::vector<BinEstimate> lattice_peak_search(const Eigen::MatrixXd& native, const FieldFn& field,
                                             int K, const GridSpec& grid, const RadarConfig& cfg);

}  // namespace detail
}  // namespace fmcw

#include "fmcw/spectral.hpp"

#include "peak_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fmcw {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;

Eigen::MatrixXcd axis_exponentials(const Eigen::VectorXd& xs, int length, int denom) {
  Eigen::MatrixXcd E(length, xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    const double step = -kTwoPi * xs[i] / denom;
    for (int n = 0; n < length; ++n) E(n, i) = std::polar(1.0, step * n);
  }
  return E;
}

double wrapped_delta(double a, double b, double wrap) {
  double diff = a - b;
  if (wrap > 0.0) {
    diff = std::fmod(diff, wrap);
    if (diff > 0.5 * wrap) diff -= wrap;
    if (diff < -0.5 * wrap) diff += wrap;
  }
  return diff;
}

bool excluded_point(double x, double y, const std::vector<std::pair<double, double>>& exclude,
                    double radius, double wrap_y) {
  for (const auto& [ex, ey] : exclude) {
    if (std::abs(x - ex) <= radius && std::abs(wrapped_delta(y, ey, wrap_y)) <= radius)
      return true;
  }
  return false;
}

}  // namespace

cd dtft_value(const MeasurementMatrix& z, double x, double y) {
  const int N = z.N(), M = z.M();
  Eigen::VectorXcd ex(N), ey(M);
  for (int n = 0; n < N; ++n) ex[n] = std::polar(1.0, -kTwoPi * x * n / N);
  for (int m = 0; m < M; ++m) ey[m] = std::polar(1.0, -kTwoPi * y * m / M);
  return (ex.transpose() * z.data * ey)(0, 0);
}

Eigen::MatrixXd dtft_patch(const MeasurementMatrix& z, const Eigen::VectorXd& xs,
                           const Eigen::VectorXd& ys) {
  const Eigen::MatrixXcd Ex = axis_exponentials(xs, z.N(), z.N());
  const Eigen::MatrixXcd Ey = axis_exponentials(ys, z.M(), z.M());
  return (Ex.transpose() * z.data * Ey).cwiseAbs();
}

Eigen::MatrixXd fft2d_native(const MeasurementMatrix& z) {
  const int N = z.N(), M = z.M();
  Eigen::VectorXd xs(N), ys(M);
  for (int i = 0; i < N; ++i) xs[i] = i;
  for (int j = 0; j < M; ++j) ys[j] = j;
  return dtft_patch(z, xs, ys);
}

ZoomResult zoom_argmax(const FieldFn& field, double x0, double y0, int fx, int fy, double wrap_y,
                       const std::vector<std::pair<double, double>>& exclude,
                       double exclude_radius, int patch_half) {
  if (fx < 1 || fy < 1) throw std::runtime_error("zoom: oversampling factors must be >= 1");
  double cx = x0, cy = y0;
  double value = 0.0;
  int level = 4;
  bool done = false;
  while (!done) {
    const int lx = std::min(level, fx);
    const int ly = std::min(level, fy);
    done = lx >= fx && ly >= fy;
    // Snap the center onto this level's lattice so every evaluated point, and
    // in particular the final argmax, is an exact global-lattice point.
    cx = std::round(cx * lx) / lx;
    cy = std::round(cy * ly) / ly;
    const int count = 2 * patch_half + 1;
    Eigen::VectorXd xs(count), ys(count);
    for (int k = -patch_half; k <= patch_half; ++k) {
      xs[k + patch_half] = cx + static_cast<double>(k) / lx;
      double y = cy + static_cast<double>(k) / ly;
      if (wrap_y > 0.0) {
        y = std::fmod(y, wrap_y);
        if (y < 0.0) y += wrap_y;
      }
      ys[k + patch_half] = y;
    }
    const Eigen::MatrixXd patch = field(xs, ys);
    if (patch.rows() != count || patch.cols() != count)
      throw std::runtime_error("zoom: field returned a patch of the wrong shape");
    double best = -std::numeric_limits<double>::infinity();
    int bi = -1, bj = -1;
    for (int i = 0; i < count; ++i)
      for (int j = 0; j < count; ++j) {
        if (excluded_point(xs[i], ys[j], exclude, exclude_radius, wrap_y)) continue;
        if (patch(i, j) > best) {
          best = patch(i, j);
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) throw std::runtime_error("zoom: search patch fully excluded");
    cx = xs[bi];
    cy = cy + static_cast<double>(bj - patch_half) / ly;  // unwrapped center
    value = best;
    level *= 8;
  }
  if (wrap_y > 0.0) {
    cy = std::fmod(cy, wrap_y);
    if (cy < 0.0) cy += wrap_y;
  }
  return ZoomResult{cx, cy, value};
}

namespace detail {

std::vector<BinEstimate> lattice_peak_search(const Eigen::MatrixXd& native, const FieldFn& field,
                                             int K, const GridSpec& grid, const RadarConfig& cfg) {
  if (K < 1) throw std::runtime_error("peak search: K must be >= 1");
  const int N = static_cast<int>(native.rows());
  const int M = static_cast<int>(native.cols());

  // Optional window, tested on native cell indices (y as a signed bin).
  double x_lo = 0.0, x_hi = N, ys_lo = -0.5 * M, ys_hi = 0.5 * M;
  if (grid.search_window) {
    const SearchWindow& w = *grid.search_window;
    x_lo = range_to_bin(cfg, w.r_lo);
    x_hi = range_to_bin(cfg, w.r_hi);
    ys_lo = M * cfg.spacing() * std::sin(w.theta_lo) / cfg.lambda();
    ys_hi = M * cfg.spacing() * std::sin(w.theta_hi) / cfg.lambda();
  }
  auto in_window = [&](int i, int j) {
    const double yjs = j < (M + 1) / 2 ? j : j - M;
    return i >= x_lo - 0.5 && i <= x_hi + 0.5 && yjs >= ys_lo - 0.5 && yjs <= ys_hi + 0.5;
  };

  struct Cell {
    int i, j;
    double mag;
  };
  std::vector<Cell> maxima;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < M; ++j) {
      if (!in_window(i, j)) continue;
      const double v = native(i, j);
      bool is_max = v > 0.0;
      for (int di = -1; di <= 1 && is_max; ++di) {
        const int ii = i + di;
        if (ii < 0 || ii >= N) continue;
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const int jj = (j + dj + M) % M;
          if (native(ii, jj) > v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) maxima.push_back({i, j, v});
    }
  std::sort(maxima.begin(), maxima.end(),
            [](const Cell& a, const Cell& b) { return a.mag > b.mag; });

  std::vector<Cell> picked;
  for (const Cell& c : maxima) {
    bool clear = true;
    for (const Cell& p : picked) {
      if (std::abs(c.i - p.i) <= 2.0 && std::abs(wrapped_delta(c.j, p.j, M)) <= 2.0) {
        clear = false;
        break;
      }
    }
    if (clear) picked.push_back(c);
    if (static_cast<int>(picked.size()) == K) break;
  }

  std::vector<BinEstimate> peaks;
  for (size_t k = 0; k < picked.size(); ++k) {
    std::vector<std::pair<double, double>> exclude;
    for (size_t l = 0; l < picked.size(); ++l)
      if (l != k) exclude.emplace_back(picked[l].i, picked[l].j);
    const ZoomResult zr =
        zoom_argmax(field, picked[k].i, picked[k].j, grid.range_oversample, grid.angle_oversample,
                    static_cast<double>(M), exclude);
    peaks.push_back({zr.x, zr.y, zr.value});
  }
  return peaks;
}

}  // namespace detail

std::vector<BinEstimate> fft2d_peaks(const MeasurementMatrix& z, int K, const GridSpec& grid) {
  const FieldFn field = [&z](const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) {
    return dtft_patch(z, xs, ys);
  };
  return detail::lattice_peak_search(fft2d_native(z), field, K, grid, z.config);
}

EstimateResult fft2d_estimate(const MeasurementMatrix& z, int K, const GridSpec& grid) {
  const std::vector<BinEstimate> peaks = fft2d_peaks(z, K, grid);
  EstimateResult out;
  out.resolved = static_cast<int>(peaks.size()) == K;
  for (const BinEstimate& p : peaks) {
    TargetEstimate e;
    e.r = bin_to_range(z.config, p.n_p);
    e.theta = bin_to_theta(z.config, p.m_p);
    e.power = p.power;
    const auto [a, psi] = matched_amplitude(z, e.r, z.config.spacing() * std::sin(e.theta));
    e.a = a;
    e.psi = psi;
    out.targets.push_back(e);
  }
  return out;
}

std::pair<double, double> bias_prediction(const RadarConfig& config, double theta) {
  const int M = config.M();
  const double s = std::sin(theta);
  const double r_bias = (M - 1) * config.lambda() / 8.0 * s;
  const double arg = (1.0 + config.B / (2.0 * config.f_c)) * s;
  if (std::abs(arg) > 1.0)
    throw std::runtime_error("bias prediction undefined: |(1 + B/(2 f_c)) sin(theta)| > 1");
  const double theta_bias = std::asin(arg) - theta;
  return {r_bias, theta_bias};
}

std::pair<double, double> matched_amplitude(const MeasurementMatrix& z, double r, double u) {
  const RadarConfig& cfg = z.config;
  const int N = z.N(), M = z.M();
  const double beta = cfg.beta();
  cd acc(0.0, 0.0);
  for (int m = 0; m < M; ++m) {
    const double col_phase = kTwoPi * (u / cfg.lambda()) * m;
    const double step = kTwoPi * (2.0 * r + m * u) * beta;
    cd inner(0.0, 0.0);
    for (int n = 0; n < N; ++n)
      inner += z.data(n, m) * std::polar(1.0, -(col_phase + step * n));
    acc += inner;
  }
  acc /= static_cast<double>(N) * M;
  return {std::abs(acc), std::arg(acc)};
}

double bin_to_range(const RadarConfig& cfg, double n_p) {
  return n_p * cfg.c / (2.0 * cfg.B);
}

double bin_to_theta(const RadarConfig& cfg, double m_p) {
  const int M = cfg.M();
  double y = std::fmod(m_p, static_cast<double>(M));
  if (y < 0.0) y += M;
  if (y >= 0.5 * M) y -= M;
  double s = y * cfg.lambda() / (M * cfg.spacing());
  s = std::clamp(s, -1.0, 1.0);
  return std::asin(s);
}

double range_to_bin(const RadarConfig& cfg, double r) { return 2.0 * cfg.B * r / cfg.c; }

double theta_to_bin(const RadarConfig& cfg, double theta) {
  double y = cfg.M() * cfg.spacing() * std::sin(theta) / cfg.lambda();
  const double M = cfg.M();
  y = std::fmod(y, M);
  if (y < 0.0) y += M;
  return y;
}

}  // namespace fmcw

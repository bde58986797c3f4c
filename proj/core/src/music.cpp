#include "fmcw/music.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fmcw/spectral.hpp"
#include "peak_search.hpp"

namespace fmcw {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Signal-subspace basis from forward-only spatial smoothing: covariance of
// the vectorized Ns x Ms sliding blocks (row-major, the Ms axis fastest).
Eigen::MatrixXcd signal_subspace(const MeasurementMatrix& z, int K, int Ns, int Ms) {
  const int N = z.N(), M = z.M();
  if (Ns < 1 || Ms < 1 || Ns > N || Ms > M)
    throw std::runtime_error("music: smoothing block does not fit the measurement");
  if (K >= Ns * Ms) throw std::runtime_error("music: K must be smaller than Ns*Ms");
  const int blocks = (N - Ns + 1) * (M - Ms + 1);
  if (blocks < K + 1)
    throw std::runtime_error("music: too few smoothing blocks for a rank-K signal subspace");
  const int D = Ns * Ms;
  Eigen::MatrixXcd V(D, blocks);
  int col = 0;
  for (int p = 0; p <= N - Ns; ++p)
    for (int q = 0; q <= M - Ms; ++q, ++col)
      for (int i = 0; i < Ns; ++i)
        for (int j = 0; j < Ms; ++j) V(i * Ms + j, col) = z.data(p + i, q + j);
  const Eigen::MatrixXcd R = V * V.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(R);
  if (eig.info() != Eigen::Success) throw std::runtime_error("music: eigendecomposition failed");
  return eig.eigenvectors().rightCols(K);  // ascending order: largest K last
}

// P(x,y) = 1 / (Ns Ms - ||Es^H a(x,y)||^2) on the patch, evaluated separably:
// a = ax kron ay, so Es^H a reduces to ax^T Bk ay per subspace column.
Eigen::MatrixXd pseudospectrum_patch(const Eigen::MatrixXcd& Es, int N, int M, int Ns, int Ms,
                                     const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) {
  const int K = static_cast<int>(Es.cols());
  const Eigen::Index nx = xs.size(), ny = ys.size();
  Eigen::MatrixXcd Ax(Ns, nx), Ay(Ms, ny);
  for (Eigen::Index ix = 0; ix < nx; ++ix)
    for (int i = 0; i < Ns; ++i) Ax(i, ix) = std::polar(1.0, kTwoPi * xs[ix] * i / N);
  for (Eigen::Index iy = 0; iy < ny; ++iy)
    for (int j = 0; j < Ms; ++j) Ay(j, iy) = std::polar(1.0, kTwoPi * ys[iy] * j / M);
  Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(nx, ny);
  Eigen::MatrixXcd Bk(Ns, Ms);
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < Ns; ++i)
      for (int j = 0; j < Ms; ++j) Bk(i, j) = std::conj(Es(i * Ms + j, k));
    proj += (Ax.transpose() * Bk * Ay).cwiseAbs2();
  }
  const double total = static_cast<double>(Ns) * Ms;
  return (total - proj.array()).cwiseInverse().matrix();
}

}  // namespace

std::vector<BinEstimate> music2d_peaks(const MeasurementMatrix& z, int K, int Ns, int Ms,
                                       const GridSpec& grid) {
  const int N = z.N(), M = z.M();
  const Eigen::MatrixXcd Es = signal_subspace(z, K, Ns, Ms);
  const FieldFn field = [&Es, N, M, Ns, Ms](const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) {
    return pseudospectrum_patch(Es, N, M, Ns, Ms, xs, ys);
  };
  Eigen::VectorXd all_x(N), all_y(M);
  for (int i = 0; i < N; ++i) all_x[i] = i;
  for (int j = 0; j < M; ++j) all_y[j] = j;
  const Eigen::MatrixXd native = pseudospectrum_patch(Es, N, M, Ns, Ms, all_x, all_y);
  return detail::lattice_peak_search(native, field, K, grid, z.config);
}

Eigen::MatrixXd music2d_spectrum(const MeasurementMatrix& z, int K, int Ns, int Ms,
                                 const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) {
  const Eigen::MatrixXcd Es = signal_subspace(z, K, Ns, Ms);
  return pseudospectrum_patch(Es, z.N(), z.M(), Ns, Ms, xs, ys);
}

EstimateResult music2d_estimate(const MeasurementMatrix& z, int K, int Ns, int Ms,
                                const GridSpec& grid) {
  const std::vector<BinEstimate> peaks = music2d_peaks(z, K, Ns, Ms, grid);
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

}  // namespace fmcw

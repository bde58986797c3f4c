#include "fmcw/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "fmcw/config_file.hpp"

namespace fmcw {
namespace {

// Files are written in little-endian float64; this code targets hosts that
// already are (asserted at read/write time via a probe value).
bool host_little_endian() {
  const std::uint16_t probe = 0x0102;
  unsigned char bytes[2];
  std::memcpy(bytes, &probe, 2);
  return bytes[0] == 0x02;
}

void require_le() {
  if (!host_little_endian())
    throw std::runtime_error("measurement io requires a little-endian host");
}

}  // namespace

void export_measurement(const MeasurementMatrix& z, const std::string& base_path) {
  require_le();
  {
    std::ofstream hdr(base_path + ".hdr");
    if (!hdr) throw std::runtime_error("cannot write " + base_path + ".hdr");
    hdr << std::setprecision(17);
    hdr << "f_c = " << z.config.f_c << "\n";
    hdr << "B = " << z.config.B << "\n";
    hdr << "sweep_time = " << z.config.sweep_time << "\n";
    hdr << "N = " << z.config.N << "\n";
    hdr << "P = " << z.config.P << "\n";
    hdr << "Q = " << z.config.Q << "\n";
    hdr << "d = " << z.config.d << "\n";
    hdr << "c = " << z.config.c << "\n";
    hdr << "sigma = " << z.sigma << "\n";
    if (z.seed) hdr << "seed = " << *z.seed << "\n";
    hdr << "rows = " << z.N() << "\n";
    hdr << "cols = " << z.M() << "\n";
    if (!hdr) throw std::runtime_error("write failed: " + base_path + ".hdr");
  }
  std::ofstream bin(base_path + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot write " + base_path + ".bin");
  for (int n = 0; n < z.N(); ++n)
    for (int m = 0; m < z.M(); ++m) {
      const double pair[2] = {z.data(n, m).real(), z.data(n, m).imag()};
      bin.write(reinterpret_cast<const char*>(pair), sizeof(pair));
    }
  if (!bin) throw std::runtime_error("write failed: " + base_path + ".bin");
}

MeasurementMatrix import_measurement(const std::string& base_path) {
  require_le();
  KeyValueFile kv = KeyValueFile::parse_file(base_path + ".hdr");
  MeasurementMatrix z;
  z.config = load_radar_config(kv);
  z.sigma = kv.get_double("sigma", 0.0);
  if (kv.has("seed")) z.seed = static_cast<std::uint64_t>(kv.get_int("seed"));
  const int rows = static_cast<int>(kv.get_int("rows"));
  const int cols = static_cast<int>(kv.get_int("cols"));
  kv.finish();
  if (rows != z.config.N || cols != z.config.M())
    throw std::runtime_error(base_path + ".hdr: rows/cols disagree with the config");
  std::ifstream bin(base_path + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + base_path + ".bin");
  z.data.resize(rows, cols);
  for (int n = 0; n < rows; ++n)
    for (int m = 0; m < cols; ++m) {
      double pair[2];
      bin.read(reinterpret_cast<char*>(pair), sizeof(pair));
      if (!bin) throw std::runtime_error(base_path + ".bin: truncated");
      z.data(n, m) = cd(pair[0], pair[1]);
    }
  char extra;
  if (bin.read(&extra, 1))
    throw std::runtime_error(base_path + ".bin: trailing bytes beyond rows*cols samples");
  return z;
}

std::string default_output_dir() {
  const char* env = std::getenv("FMCW_OUTPUT_DIR");
  if (env && *env) {
    std::filesystem::create_directories(env);
    return env;
  }
  return ".";
}

std::string output_path(const std::string& dir, const std::string& name) {
  if (!name.empty() && name.front() == '/') return name;
  if (dir.empty() || dir == ".") return name;
  if (dir.back() == '/') return dir + name;
  return dir + "/" + name;
}

void write_estimates_csv(const std::string& path, const std::string& algo,
                         const std::vector<TargetEstimate>& estimates) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(12);
  out << "algo,k,r_m,theta_deg,power\n";
  for (size_t k = 0; k < estimates.size(); ++k) {
    const TargetEstimate& e = estimates[k];
    out << algo << ',' << k << ',' << e.r << ',' << e.theta * 180.0 / M_PI << ',' << e.power
        << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_spectrum_csv(const std::string& path, const Eigen::VectorXd& xs,
                        const Eigen::VectorXd& ys, const Eigen::MatrixXd& magnitudes) {
  if (magnitudes.rows() != xs.size() || magnitudes.cols() != ys.size())
    throw std::runtime_error("spectrum csv: size mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(12);
  out << "x_bin,y_bin,magnitude\n";
  for (Eigen::Index i = 0; i < xs.size(); ++i)
    for (Eigen::Index j = 0; j < ys.size(); ++j)
      out << xs[i] << ',' << ys[j] << ',' << magnitudes(i, j) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace fmcw

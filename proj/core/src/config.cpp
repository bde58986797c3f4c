#include <cmath>
#include <stdexcept>

#include "fmcw/types.hpp"

namespace fmcw {

void RadarConfig::validate() const {
  if (!(f_c > 0.0)) throw std::invalid_argument("radar config: f_c must be positive");
  if (!(B > 0.0)) throw std::invalid_argument("radar config: B must be positive");
  if (!(sweep_time > 0.0)) throw std::invalid_argument("radar config: sweep_time must be positive");
  if (N < 2) throw std::invalid_argument("radar config: N must be at least 2");
  if (P < 1 || Q < 1) throw std::invalid_argument("radar config: P and Q must be at least 1");
  if (d < 0.0) throw std::invalid_argument("radar config: d must be non-negative");
  if (!(c > 0.0)) throw std::invalid_argument("radar config: c must be positive");
  if (spacing() > lambda())
    throw std::invalid_argument("radar config: antenna spacing exceeds one wavelength");
}

double Target::psi(const RadarConfig& cfg) const {
  const double tau0 = 2.0 * r / cfg.c;
  const double pi = M_PI;
  return phi - pi * cfg.chirp_rate() * tau0 * tau0 + 4.0 * pi * cfg.f_c * r / cfg.c;
}

}  // namespace fmcw

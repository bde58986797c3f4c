#pragma once

#include <cmath>
#include <complex>

namespace fmcw {

// Power sums of a geometric phase sequence,
//   d_p = sum_{k=0}^{n-1} k^p e^{j phase k},  p = 0, 1, 2.
// Closed forms follow from applying w d/dw to the geometric series at
// w = e^{j phase}. Near w = 1 the closed forms cancel catastrophically
// (denominators (1-w)^3), so a direct sum takes over below a threshold that
// keeps the closed-form relative error under ~1e-12 for d0 and ~1e-9 for d2.
struct PowerSums {
  std::complex<double> d0, d1, d2;
};

inline PowerSums power_sums(double phase, int n) {
  using cd = std::complex<double>;
  const cd one(1.0, 0.0);
  const cd w = std::polar(1.0, phase);
  if (std::abs(one - w) < 1e-3) {
    PowerSums s{cd(0, 0), cd(0, 0), cd(0, 0)};
    for (int k = 0; k < n; ++k) {
      const cd wk = std::polar(1.0, phase * k);
      s.d0 += wk;
      s.d1 += double(k) * wk;
      s.d2 += double(k) * double(k) * wk;
    }
    return s;
  }
  const double dn = double(n);
  const cd a = one - w;
  const cd wn = std::polar(1.0, phase * n);
  const cd wn_m1 = std::polar(1.0, phase * (n - 1));
  const cd wn_p1 = std::polar(1.0, phase * (n + 1));
  PowerSums s;
  s.d0 = (one - wn) / a;
  s.d1 = (w - dn * wn + (dn - 1.0) * wn_p1) / (a * a);
  s.d2 = w *
         (one + w - dn * dn * wn_m1 + (2.0 * dn * dn - 2.0 * dn - 1.0) * wn -
          (dn - 1.0) * (dn - 1.0) * wn_p1) /
         (a * a * a);
  return s;
}

}  // namespace fmcw

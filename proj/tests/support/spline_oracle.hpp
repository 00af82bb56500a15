#ifndef QAKD_TEST_SPLINE_ORACLE_HPP
#define QAKD_TEST_SPLINE_ORACLE_HPP

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_interp.h>

namespace qakd::test {

/// Resampling through GSL: natural cubic spline (or piecewise linear) on
/// nodes 0..n-1, evaluated at j*(n-1)/(m-1).
inline std::vector<double> gsl_resample(const std::vector<double>& y, std::size_t m, bool cubic) {
  const std::size_t n = y.size();
  if (n == 1) return std::vector<double>(m, y[0]);
  if (m == 1) return {y[0]};
  const gsl_interp_type* type = (cubic && n >= 3) ? gsl_interp_cspline : gsl_interp_linear;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i);
  gsl_interp* interp = gsl_interp_alloc(type, n);
  gsl_interp_accel* acc = gsl_interp_accel_alloc();
  if (gsl_interp_init(interp, x.data(), y.data(), n) != GSL_SUCCESS) {
    gsl_interp_free(interp);
    gsl_interp_accel_free(acc);
    throw std::runtime_error("gsl_interp_init failed");
  }
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    double t = static_cast<double>(j) * static_cast<double>(n - 1) / static_cast<double>(m - 1);
    t = std::clamp(t, 0.0, static_cast<double>(n - 1));
    out[j] = gsl_interp_eval(interp, x.data(), y.data(), t, acc);
  }
  gsl_interp_free(interp);
  gsl_interp_accel_free(acc);
  return out;
}

}  // namespace qakd::test

#endif  // QAKD_TEST_SPLINE_ORACLE_HPP

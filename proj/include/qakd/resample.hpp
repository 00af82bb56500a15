#ifndef QAKD_RESAMPLE_HPP
#define QAKD_RESAMPLE_HPP

#include <cmath>
#include <string>

#include "qakd/errors.hpp"
#include "qakd/types.hpp"

namespace qakd {

enum class InterpolationMethod { linear, cubic };

namespace detail {

template <typename Derived>
void check_finite(const Eigen::MatrixBase<Derived>& v, const char* what) {
  for (Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(static_cast<double>(v(i))))
      throw ContractViolation(std::string(what) + ": non-finite value at position " + std::to_string(i));
}

/// Second derivatives of the natural cubic spline through (i, v[i]), i = 0..n-1,
/// unit spacing, zero curvature at both ends. Thomas algorithm on the
/// (1, 4, 1) system for the n-2 interior unknowns.
template <typename Scalar>
Vector<Scalar> natural_spline_curvature(const Vector<Scalar>& v) {
  const Index n = v.size();
  Vector<Scalar> curvature = Vector<Scalar>::Zero(n);
  if (n < 3) return curvature;
  const Index interior = n - 2;
  Vector<Scalar> diag(interior);
  Vector<Scalar> rhs(interior);
  for (Index k = 0; k < interior; ++k) {
    const Index i = k + 1;
    rhs(k) = Scalar(6) * (v(i + 1) - Scalar(2) * v(i) + v(i - 1));
    diag(k) = Scalar(4);
  }
  for (Index k = 1; k < interior; ++k) {
    const Scalar w = Scalar(1) / diag(k - 1);
    diag(k) -= w;
    rhs(k) -= w * rhs(k - 1);
  }
  curvature(interior) = rhs(interior - 1) / diag(interior - 1);
  for (Index k = interior - 2; k >= 0; --k) curvature(k + 1) = (rhs(k) - curvature(k + 2)) / diag(k);
  return curvature;
}

}  // namespace detail

/// Resamples `v` onto `target_len` uniformly spaced parameters spanning the
/// same interval: output j sits at source parameter j * (n - 1) / (target_len - 1).
/// Equal lengths return `v` unchanged; a single source sample is extended as a
/// constant; cubic on two samples is linear. Parameters that land exactly on a
/// source index reproduce that sample bit for bit.
template <typename Derived>
Vector<typename Derived::Scalar> resample(const Eigen::MatrixBase<Derived>& v, Index target_len,
                                          InterpolationMethod method) {
  using Scalar = typename Derived::Scalar;
  if (target_len <= 0) throw ArgumentError("resample: target length must be positive");
  if (v.size() == 0) throw ArgumentError("resample: empty input vector");
  detail::check_finite(v, "resample");

  const Index n = v.size();
  Vector<Scalar> source = v;
  if (target_len == n) return source;
  if (n == 1) return Vector<Scalar>::Constant(target_len, source(0));

  Vector<Scalar> curvature;
  const bool cubic = method == InterpolationMethod::cubic && n >= 3;
  if (cubic) curvature = detail::natural_spline_curvature<Scalar>(source);

  Vector<Scalar> out(target_len);
  // Parameter j*(n-1)/(target_len-1) split exactly into cell index and remainder.
  const long long den = target_len > 1 ? static_cast<long long>(target_len - 1) : 1;
  for (Index j = 0; j < target_len; ++j) {
    const long long num = static_cast<long long>(j) * static_cast<long long>(n - 1);
    const auto cell = static_cast<Index>(num / den);
    const long long rem = num % den;
    if (target_len == 1 || rem == 0) {
      out(j) = source(cell);
      continue;
    }
    const Scalar f = Scalar(rem) / Scalar(den);
    const Scalar g = Scalar(1) - f;
    Scalar value = g * source(cell) + f * source(cell + 1);
    if (cubic) value += ((g * g * g - g) * curvature(cell) + (f * f * f - f) * curvature(cell + 1)) / Scalar(6);
    out(j) = value;
  }
  return out;
}

}  // namespace qakd

#endif  // QAKD_RESAMPLE_HPP

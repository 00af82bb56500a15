#ifndef QAKD_DISTILL_LOSS_HPP
#define QAKD_DISTILL_LOSS_HPP

#include <cmath>

#include "qakd/errors.hpp"
#include "qakd/resample.hpp"
#include "qakd/types.hpp"

namespace qakd {

/// log softmax(v / T), max-shifted.
template <typename Derived>
Vector<typename Derived::Scalar> log_softmax(const Eigen::MatrixBase<Derived>& v,
                                             typename Derived::Scalar temperature = 1) {
  using Scalar = typename Derived::Scalar;
  if (!(temperature > Scalar(0))) throw ArgumentError("temperature must be positive");
  if (v.size() == 0) throw ArgumentError("softmax of an empty vector");
  detail::check_finite(v, "softmax");
  const Vector<Scalar> scaled = v / temperature;
  const Vector<Scalar> shifted = scaled.array() - scaled.maxCoeff();
  const Scalar log_norm = std::log(shifted.array().exp().sum());
  return shifted.array() - log_norm;
}

/// softmax(v / T); sums to one and is unchanged by adding a constant to v.
template <typename Derived>
Vector<typename Derived::Scalar> tempered_softmax(const Eigen::MatrixBase<Derived>& v,
                                                  typename Derived::Scalar temperature) {
  using Scalar = typename Derived::Scalar;
  if (!(temperature > Scalar(0))) throw ArgumentError("temperature must be positive");
  if (v.size() == 0) throw ArgumentError("softmax of an empty vector");
  detail::check_finite(v, "softmax");
  const Vector<Scalar> scaled = v / temperature;
  const Vector<Scalar> e = (scaled.array() - scaled.maxCoeff()).exp();
  return e / e.sum();
}

struct DistillConfig {
  double rho = 0.7;          ///< weight of the soft term; (1 - rho) weighs the hard term
  double temperature = 10.0;
  double mse_weight = 1.0;
  bool use_interpolation = false;
  InterpolationMethod method = InterpolationMethod::cubic;
  /// When set (and interpolation is on) the soft term compares the resampled
  /// student against the full-length teacher instead of the aligned teacher.
  bool soft_on_interpolated = false;

  void validate() const;
};

struct LossBreakdown {
  double hard = 0;
  double soft = 0;
  double mse = 0;
  double total = 0;
};

/// Cross entropy of softmax(start), softmax(end) against the gold endpoints.
double hard_loss(const SpanLogits& student, const GoldSpan& gold);

/// KL(p || q) with p, q the log-softmax distributions given as log-probabilities.
double kl_divergence(const LogitVector& log_p, const LogitVector& log_q);

/// T^2 * [KL(p_start || q_start) + KL(p_end || q_end)],
/// p = softmax(student / T), q = softmax(teacher / T).
double soft_loss(const SpanLogits& student, const SpanLogits& teacher, double temperature);

double mse(const LogitVector& a, const LogitVector& b);

/// (1 - rho) * hard + rho * soft, plus mse_weight * [MSE(start) + MSE(end)]
/// between the student resampled to the teacher length and the full teacher
/// when interpolation is enabled.
LossBreakdown combined_loss(const SpanLogits& student, const SpanLogits& teacher_aligned,
                            const SpanLogits& teacher_full, const GoldSpan& gold, const DistillConfig& cfg);

}  // namespace qakd

#endif  // QAKD_DISTILL_LOSS_HPP

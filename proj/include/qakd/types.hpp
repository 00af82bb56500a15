#ifndef QAKD_TYPES_HPP
#define QAKD_TYPES_HPP

#include <Eigen/Dense>

namespace qakd {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

/// Pre-softmax scores, one per context token position.
using LogitVector = Vector<double>;

/// Paired start/end logits over one context.
template <typename Scalar>
struct BasicSpanLogits {
  Vector<Scalar> start;
  Vector<Scalar> end;

  Index size() const { return start.size(); }
};

using SpanLogits = BasicSpanLogits<double>;

/// Gold answer span as inclusive token indices.
struct GoldSpan {
  Index start = 0;
  Index end = 0;
};

}  // namespace qakd

#endif  // QAKD_TYPES_HPP

#include "qakd/distill_loss.hpp"

#include <string>

namespace qakd {
namespace {

void check_span(const SpanLogits& logits, const char* what) {
  if (logits.start.size() != logits.end.size())
    throw ContractViolation(std::string(what) + ": start and end logits differ in length");
  if (logits.start.size() == 0) throw ContractViolation(std::string(what) + ": empty logits");
}

}  // namespace

void DistillConfig::validate() const {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ArgumentError("rho must lie in [0, 1]");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) throw ArgumentError("temperature must be positive");
  if (!(mse_weight >= 0.0) || !std::isfinite(mse_weight)) throw ArgumentError("mse weight must be non-negative");
}

double hard_loss(const SpanLogits& student, const GoldSpan& gold) {
  check_span(student, "hard_loss");
  const Index n = student.start.size();
  if (gold.start < 0 || gold.end < gold.start || gold.end >= n)
    throw ArgumentError("gold span [" + std::to_string(gold.start) + ", " + std::to_string(gold.end) +
                        "] outside context of length " + std::to_string(n));
  return -log_softmax(student.start)(gold.start) - log_softmax(student.end)(gold.end);
}

double kl_divergence(const LogitVector& log_p, const LogitVector& log_q) {
  if (log_p.size() != log_q.size()) throw ContractViolation("KL divergence of vectors with different lengths");
  double kl = 0.0;
  for (Index i = 0; i < log_p.size(); ++i) {
    const double p = std::exp(log_p(i));
    if (p > 0.0) kl += p * (log_p(i) - log_q(i));
  }
  return kl > 0.0 ? kl : 0.0;
}

double soft_loss(const SpanLogits& student, const SpanLogits& teacher, double temperature) {
  check_span(student, "soft_loss");
  check_span(teacher, "soft_loss");
  if (student.size() != teacher.size())
    throw ContractViolation("soft_loss: student length " + std::to_string(student.size()) +
                            " differs from teacher length " + std::to_string(teacher.size()) +
                            "; align or resample first");
  const double kl_start = kl_divergence(log_softmax(student.start, temperature), log_softmax(teacher.start, temperature));
  const double kl_end = kl_divergence(log_softmax(student.end, temperature), log_softmax(teacher.end, temperature));
  return temperature * temperature * (kl_start + kl_end);
}

double mse(const LogitVector& a, const LogitVector& b) {
  if (a.size() != b.size())
    throw ContractViolation("mse: lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()) +
                            " differ");
  if (a.size() == 0) throw ContractViolation("mse of empty vectors");
  return (a - b).squaredNorm() / static_cast<double>(a.size());
}

LossBreakdown combined_loss(const SpanLogits& student, const SpanLogits& teacher_aligned,
                            const SpanLogits& teacher_full, const GoldSpan& gold, const DistillConfig& cfg) {
  cfg.validate();
  LossBreakdown out;
  out.hard = hard_loss(student, gold);

  SpanLogits interpolated;
  if (cfg.use_interpolation) {
    check_span(teacher_full, "combined_loss");
    interpolated.start = resample(student.start, teacher_full.size(), cfg.method);
    interpolated.end = resample(student.end, teacher_full.size(), cfg.method);
    out.mse = cfg.mse_weight * (mse(interpolated.start, teacher_full.start) + mse(interpolated.end, teacher_full.end));
  }

  if (cfg.use_interpolation && cfg.soft_on_interpolated)
    out.soft = soft_loss(interpolated, teacher_full, cfg.temperature);
  else
    out.soft = soft_loss(student, teacher_aligned, cfg.temperature);

  out.total = (1.0 - cfg.rho) * out.hard + cfg.rho * out.soft + out.mse;
  return out;
}

}  // namespace qakd

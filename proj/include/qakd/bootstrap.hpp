#ifndef QAKD_BOOTSTRAP_HPP
#define QAKD_BOOTSTRAP_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qakd/types.hpp"

namespace qakd {

struct BootstrapResult {
  double p_value = 1.0;
  bool reject = false;  ///< p_value < alpha
  std::uint64_t resamples = 0;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::size_t sample_size = 0;
  double observed_mean = 0.0;
};

/// ceil(fraction * n), treating products within 1e-9 of an integer as that integer.
std::size_t fraction_count(double fraction, std::size_t n);

/// Seeded uniform sample of fraction_count(fraction, |ids|) ids without
/// replacement, returned in input order.
std::vector<std::string> sample_eval_subset(std::span<const std::string> ids, double fraction, std::uint64_t seed);

/// One-sided paired bootstrap of H0: mean delta <= 0. Draws `resamples` sets of
/// |delta| indices with replacement (uniform_index on one Rng(seed) stream, set
/// after set); the p-value is the share of sets whose sum is <= 0.
BootstrapResult paired_bootstrap(const Eigen::Ref<const Vector<double>>& delta, std::uint64_t resamples,
                                 std::uint64_t seed, double alpha = 0.05);

}  // namespace qakd

#endif  // QAKD_BOOTSTRAP_HPP

#include "qakd/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qakd/errors.hpp"
#include "qakd/rng.hpp"

namespace qakd {

std::size_t fraction_count(double fraction, std::size_t n) {
  const double product = fraction * static_cast<double>(n);
  const double nearest = std::round(product);
  const double count = std::abs(product - nearest) <= 1e-9 ? nearest : std::ceil(product);
  return std::min(n, static_cast<std::size_t>(std::max(0.0, count)));
}

std::vector<std::string> sample_eval_subset(std::span<const std::string> ids, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ArgumentError("subset fraction must lie in (0, 1]");
  const std::size_t n = ids.size();
  const std::size_t take = fraction_count(fraction, n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  shuffle(order, rng);
  order.resize(take);
  std::sort(order.begin(), order.end());

  std::vector<std::string> out;
  out.reserve(take);
  for (std::size_t i : order) out.push_back(ids[i]);
  return out;
}

BootstrapResult paired_bootstrap(const Eigen::Ref<const Vector<double>>& delta, std::uint64_t resamples,
                                 std::uint64_t seed, double alpha) {
  if (delta.size() == 0) throw ArgumentError("paired bootstrap needs at least one score difference");
  if (resamples == 0) throw ArgumentError("paired bootstrap needs at least one resample");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ArgumentError("alpha must lie in [0, 1]");
  if (!delta.allFinite()) throw ArgumentError("score differences must be finite");

  const auto k = static_cast<std::uint64_t>(delta.size());
  Rng rng(seed);
  std::uint64_t not_better = 0;
  for (std::uint64_t b = 0; b < resamples; ++b) {
    double sum = 0.0;
    for (std::uint64_t i = 0; i < k; ++i) sum += delta(static_cast<Index>(uniform_index(rng, k)));
    if (sum <= 0.0) ++not_better;
  }

  BootstrapResult result;
  result.p_value = static_cast<double>(not_better) / static_cast<double>(resamples);
  result.reject = result.p_value < alpha;
  result.resamples = resamples;
  result.alpha = alpha;
  result.seed = seed;
  result.sample_size = static_cast<std::size_t>(k);
  result.observed_mean = delta.mean();
  return result;
}

}  // namespace qakd

#ifndef QAKD_KMEANS_HPP
#define QAKD_KMEANS_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "qakd/errors.hpp"
#include "qakd/rng.hpp"
#include "qakd/types.hpp"

namespace qakd {

template <typename Scalar>
struct KMeansResult {
  std::vector<Index> assignments;        ///< cluster of each point (row)
  Matrix<Scalar> centroids;              ///< k x d
  std::vector<Scalar> objective_history; ///< sum of squared distances after each assignment step
  int iterations = 0;
  bool converged = false;
};

namespace detail {

/// Nearest centroid by squared Euclidean distance; ties go to the lower index.
template <typename Points, typename Centroids>
std::pair<Index, typename Points::Scalar> nearest_centroid(const Points& points, Index row,
                                                           const Centroids& centroids) {
  using Scalar = typename Points::Scalar;
  Index best = 0;
  Scalar best_d = std::numeric_limits<Scalar>::infinity();
  for (Index c = 0; c < centroids.rows(); ++c) {
    const Scalar d = (points.row(row) - centroids.row(c)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return {best, best_d};
}

}  // namespace detail

/// k-means++ seeding: the first centre uniformly at random, each further centre
/// drawn with probability proportional to its squared distance to the nearest
/// centre chosen so far (uniformly if every distance is zero).
template <typename Derived>
Matrix<typename Derived::Scalar> kmeans_plus_plus_init(const Eigen::MatrixBase<Derived>& points, Index k,
                                                       std::uint64_t seed) {
  using Scalar = typename Derived::Scalar;
  const Index n = points.rows();
  if (k < 1) throw ArgumentError("k-means needs k >= 1");
  if (n < k) throw ArgumentError("k-means needs at least k points");

  Rng rng(seed);
  Matrix<Scalar> centroids(k, points.cols());
  centroids.row(0) = points.row(static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(n))));
  Vector<Scalar> dist(n);
  for (Index i = 0; i < n; ++i) dist(i) = (points.row(i) - centroids.row(0)).squaredNorm();

  for (Index c = 1; c < k; ++c) {
    const Scalar total = dist.sum();
    Index pick = n - 1;
    if (total > Scalar(0)) {
      const Scalar target = static_cast<Scalar>(uniform_unit(rng)) * total;
      Scalar acc = 0;
      for (Index i = 0; i < n; ++i) {
        if (dist(i) <= Scalar(0)) continue;
        pick = i;
        acc += dist(i);
        if (target < acc) break;
      }
    } else {
      pick = static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    }
    centroids.row(c) = points.row(pick);
    for (Index i = 0; i < n; ++i) dist(i) = std::min(dist(i), (points.row(i) - centroids.row(c)).squaredNorm());
  }
  return centroids;
}

/// Lloyd iterations from the given centres. Stops when no centre moves by
/// `tol` or more (Euclidean) or after `max_iter` updates, then reassigns every
/// point to its nearest final centre. Empty clusters keep their centre.
template <typename Derived, typename InitDerived>
KMeansResult<typename Derived::Scalar> lloyd(const Eigen::MatrixBase<Derived>& points,
                                             const Eigen::MatrixBase<InitDerived>& initial, int max_iter,
                                             typename Derived::Scalar tol) {
  using Scalar = typename Derived::Scalar;
  const Index n = points.rows();
  const Index k = initial.rows();
  if (k < 1) throw ArgumentError("k-means needs k >= 1");
  if (n < k) throw ArgumentError("k-means needs at least k points");
  if (initial.cols() != points.cols()) throw ArgumentError("initial centroids have the wrong dimension");

  KMeansResult<Scalar> result;
  result.centroids = initial;
  result.assignments.assign(static_cast<std::size_t>(n), 0);

  auto assign = [&] {
    Scalar objective = 0;
    for (Index i = 0; i < n; ++i) {
      const auto [c, d] = detail::nearest_centroid(points, i, result.centroids);
      result.assignments[static_cast<std::size_t>(i)] = c;
      objective += d;
    }
    result.objective_history.push_back(objective);
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    assign();
    Matrix<Scalar> sums = Matrix<Scalar>::Zero(k, points.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      const Index c = result.assignments[static_cast<std::size_t>(i)];
      sums.row(c) += points.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    Scalar max_shift = 0;
    for (Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) continue;
      const Vector<Scalar> updated = sums.row(c).transpose() / static_cast<Scalar>(counts[static_cast<std::size_t>(c)]);
      max_shift = std::max(max_shift, (updated.transpose() - result.centroids.row(c)).norm());
      result.centroids.row(c) = updated.transpose();
    }
    result.iterations = iter + 1;
    if (max_shift < tol) {
      result.converged = true;
      break;
    }
  }
  assign();
  return result;
}

template <typename Derived>
KMeansResult<typename Derived::Scalar> kmeans(const Eigen::MatrixBase<Derived>& points, Index k, std::uint64_t seed,
                                              int max_iter = 300, typename Derived::Scalar tol = 1e-9) {
  return lloyd(points, kmeans_plus_plus_init(points, k, seed), max_iter, tol);
}

}  // namespace qakd

#endif  // QAKD_KMEANS_HPP

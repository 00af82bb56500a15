#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "qakd/errors.hpp"
#include "qakd/resample.hpp"
#include "qakd/rng.hpp"
#include "spline_oracle.hpp"

using namespace qakd;

namespace {

Vector<double> vec(std::initializer_list<double> v) {
  Vector<double> out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Vector<double> random_vector(Rng& rng, Index n) {
  Vector<double> v(n);
  for (Index i = 0; i < n; ++i) v(i) = 20.0 * uniform_unit(rng) - 10.0;
  return v;
}

std::vector<double> as_std(const Vector<double>& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

TEST_CASE("linear data, two samples to three") {
  const auto out = resample(vec({0, 2}), 3, InterpolationMethod::linear);
  REQUIRE(out.size() == 3);
  CHECK(out(0) == 0.0);
  CHECK(out(1) == 1.0);
  CHECK(out(2) == 2.0);
}

TEST_CASE("a single sample extends as a constant") {
  for (auto m : {InterpolationMethod::linear, InterpolationMethod::cubic}) {
    const auto out = resample(vec({7}), 4, m);
    CHECK(out == Vector<double>::Constant(4, 7.0));
  }
}

TEST_CASE("natural spline through [0, 1, 0, 1] at half steps") {
  // Frozen from scipy.interpolate.CubicSpline(bc_type="natural").
  const double expected[] = {0.0, 0.75, 1.0, 0.5, 0.0, 0.25, 1.0};
  const auto out = resample(vec({0, 1, 0, 1}), 7, InterpolationMethod::cubic);
  const auto gsl = test::gsl_resample({0, 1, 0, 1}, 7, true);
  for (Index j = 0; j < 7; ++j) {
    CHECK(std::abs(out(j) - expected[j]) <= 1e-9);
    CHECK(std::abs(gsl[static_cast<std::size_t>(j)] - expected[j]) <= 1e-9);
  }
}

TEST_CASE("equal lengths return the input bit for bit") {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto v = random_vector(rng, 1 + static_cast<Index>(uniform_index(rng, 40)));
    for (auto m : {InterpolationMethod::linear, InterpolationMethod::cubic}) {
      const auto out = resample(v, v.size(), m);
      REQUIRE(out.size() == v.size());
      CHECK(std::memcmp(out.data(), v.data(), sizeof(double) * static_cast<std::size_t>(v.size())) == 0);
    }
  }
}

TEST_CASE("target parameters on a node copy the node exactly") {
  Rng rng(6);
  const auto v = random_vector(rng, 6);
  for (auto m : {InterpolationMethod::linear, InterpolationMethod::cubic}) {
    const auto out = resample(v, 11, m);  // parameters 0, 0.5, 1, ...
    for (Index i = 0; i < 6; ++i) CHECK(out(2 * i) == v(i));
    const auto third = resample(v, 16, m);  // parameters 0, 1/3, 2/3, 1, ...
    for (Index i = 0; i < 6; ++i) CHECK(third(3 * i) == v(i));
  }
}

TEST_CASE("both methods reproduce linear data") {
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    const Index n = 2 + static_cast<Index>(uniform_index(rng, 30));
    const Index target = 1 + static_cast<Index>(uniform_index(rng, 60));
    const double a = 10 * uniform_unit(rng) - 5, b = 10 * uniform_unit(rng) - 5;
    Vector<double> v(n);
    for (Index i = 0; i < n; ++i) v(i) = a * static_cast<double>(i) + b;
    for (auto m : {InterpolationMethod::linear, InterpolationMethod::cubic}) {
      const auto out = resample(v, target, m);
      for (Index j = 0; j < target; ++j) {
        const double param = target == 1 ? 0.0 : static_cast<double>(j) * static_cast<double>(n - 1) /
                                                       static_cast<double>(target - 1);
        CHECK(std::abs(out(j) - (a * param + b)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("agrees with GSL on random data, up- and down-sampling") {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    const Index n = 1 + static_cast<Index>(uniform_index(rng, 40));
    const Index target = 1 + static_cast<Index>(uniform_index(rng, 80));
    const auto v = random_vector(rng, n);
    for (auto m : {InterpolationMethod::linear, InterpolationMethod::cubic}) {
      const auto out = resample(v, target, m);
      const auto ref = test::gsl_resample(as_std(v), static_cast<std::size_t>(target), m == InterpolationMethod::cubic);
      REQUIRE(out.size() == target);
      for (Index j = 0; j < target; ++j) CHECK(std::abs(out(j) - ref[static_cast<std::size_t>(j)]) <= 1e-9);
      CHECK(out.allFinite());
    }
  }
}

TEST_CASE("degenerate orders") {
  // Two samples under cubic fall back to linear.
  const auto two = resample(vec({1, 3}), 5, InterpolationMethod::cubic);
  CHECK(two == resample(vec({1, 3}), 5, InterpolationMethod::linear));
  // Three samples already give a well-defined natural spline.
  const auto three = resample(vec({0, 4, 1}), 9, InterpolationMethod::cubic);
  const auto ref = test::gsl_resample({0, 4, 1}, 9, true);
  for (Index j = 0; j < 9; ++j) CHECK(std::abs(three(j) - ref[static_cast<std::size_t>(j)]) <= 1e-12);
  // One output sample takes the first input.
  CHECK(resample(vec({3, 9, 1}), 1, InterpolationMethod::cubic)(0) == 3.0);
}

TEST_CASE("endpoints are preserved") {
  Rng rng(9);
  const auto v = random_vector(rng, 13);
  for (auto m : {InterpolationMethod::linear, InterpolationMethod::cubic}) {
    const auto out = resample(v, 29, m);
    CHECK(out(0) == v(0));
    CHECK(out(28) == v(12));
  }
}

TEST_CASE("argument and contract errors") {
  CHECK_THROWS_AS(resample(vec({1, 2}), 0, InterpolationMethod::linear), ArgumentError);
  CHECK_THROWS_AS(resample(Vector<double>(), 3, InterpolationMethod::linear), ArgumentError);
  CHECK_THROWS_AS(resample(vec({1, std::numeric_limits<double>::quiet_NaN()}), 3, InterpolationMethod::cubic),
                  ContractViolation);
  CHECK_THROWS_AS(resample(vec({1, std::numeric_limits<double>::infinity()}), 2, InterpolationMethod::cubic),
                  ContractViolation);
}

TEST_CASE("single precision instantiation") {
  Eigen::VectorXf v(3);
  v << 0.f, 1.f, 2.f;
  const Eigen::VectorXf out = resample(v, 5, InterpolationMethod::cubic);
  CHECK(out(1) == doctest::Approx(0.5f));
  CHECK(out(4) == 2.f);
}

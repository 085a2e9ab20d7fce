#include <cmath>
#include <doctest.h>

#include "heat/geometry.hpp"
#include "heat/rng.hpp"
#include "test_util.hpp"

using namespace heat;
namespace geo = heat::geometry;
using Eigen::VectorXd;
using heat::testing::random_point;
using heat::testing::random_tangent;

namespace {
VectorXd vec3(double a, double b, double c) {
  VectorXd v(3);
  v << a, b, c;
  return v;
}
const double kSqrt2 = std::sqrt(2.0);
}  // namespace

TEST_CASE("minkowski_inner") {
  CHECK(geo::minkowski_inner(vec3(1, 0, 0), vec3(1, 0, 0)) == -1.0);
  CHECK(geo::minkowski_inner(vec3(kSqrt2, 1, 0), vec3(kSqrt2, 0, 1)) ==
        doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(geo::minkowski_inner(vec3(0, 1, 0), vec3(0, 1, 0)) == 1.0);
  VectorXd short_vec(2);
  short_vec << 1, 0;
  CHECK_THROWS_AS(geo::minkowski_inner(vec3(1, 0, 0), short_vec),
                  std::invalid_argument);
}

TEST_CASE("distance") {
  VectorXd x = vec3(1, 0, 0);
  CHECK(geo::distance(x, x) == 0.0);
  VectorXd y = vec3(std::cosh(1.0), std::sinh(1.0), 0);
  CHECK(geo::distance(x, y) == doctest::Approx(1.0).epsilon(1e-12));
  // acosh(2) evaluated independently
  CHECK(geo::distance(vec3(kSqrt2, 1, 0), vec3(kSqrt2, 0, 1)) ==
        doctest::Approx(1.3169578969248166).epsilon(1e-12));
}

TEST_CASE("distance symmetry and identity over random pairs") {
  Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    VectorXd x = random_point(rng, 4, 2.0);
    VectorXd y = random_point(rng, 4, 2.0);
    CHECK(geo::distance(x, y) == geo::distance(y, x));
    // rounding of <x,x> passes through acosh as sqrt(2*eps), so the
    // self-distance of a stored point is ~1e-7, not 0
    CHECK(geo::distance(x, x) <= 1e-6);
  }
}

TEST_CASE("triangle inequality") {
  Rng rng(43);
  for (int i = 0; i < 1000; ++i) {
    VectorXd x = random_point(rng, 3, 2.0);
    VectorXd y = random_point(rng, 3, 2.0);
    VectorXd z = random_point(rng, 3, 2.0);
    CHECK(geo::distance(x, z) <=
          geo::distance(x, y) + geo::distance(y, z) + 1e-9);
  }
}

TEST_CASE("project_to_tangent") {
  VectorXd x = vec3(1, 0, 0);
  VectorXd g = vec3(5, 2, 3);
  VectorXd t = geo::project_to_tangent(x, g);
  CHECK(t(0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(t(1) == 2.0);
  CHECK(t(2) == 3.0);

  // idempotence and orthogonality over random trials
  Rng rng(44);
  for (int i = 0; i < 1000; ++i) {
    VectorXd p = random_point(rng, 4, 1.5);
    VectorXd raw(5);
    for (int k = 0; k < 5; ++k) raw(k) = rng.uniform(-2, 2);
    VectorXd once = geo::project_to_tangent(p, raw);
    VectorXd twice = geo::project_to_tangent(p, once);
    CHECK(std::abs(geo::minkowski_inner(p, once)) <= 1e-8);
    CHECK((twice - once).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("exp_map") {
  VectorXd x = vec3(1, 0, 0);
  VectorXd out = geo::exp_map(x, vec3(0, 1, 0));
  CHECK(out(0) == doctest::Approx(1.5430806348152437).epsilon(1e-14));
  CHECK(out(1) == doctest::Approx(1.1752011936438014).epsilon(1e-14));
  CHECK(out(2) == 0.0);

  // zero direction returns the base exactly
  VectorXd same = geo::exp_map(x, vec3(0, 0, 0));
  CHECK(same == x);

  // first-order behavior for a tiny step
  VectorXd tiny = geo::exp_map(x, vec3(0, 1e-6, 0));
  CHECK(std::abs(tiny(0) - 1.0) <= 1e-11);
  CHECK(std::abs(tiny(1) - 1e-6) <= 1e-11);
}

TEST_CASE("exp_map preserves constraint and geodesic length") {
  Rng rng(45);
  for (int i = 0; i < 1000; ++i) {
    VectorXd x = random_point(rng, 5, 1.5);
    // constraint residual at optimizer-scale steps (the SGD loop clips at
    // kMaxStepNorm); coordinates after a norm-10 step are ~1e4, where an
    // absolute residual of 1e-9 is below double rounding
    VectorXd v1 = random_tangent(rng, x, 2.0);
    double norm = geo::tangent_norm(v1);
    if (norm > geo::kMaxStepNorm) v1 *= geo::kMaxStepNorm / norm;
    VectorXd y1 = geo::exp_map(x, v1);
    CHECK(std::abs(geo::minkowski_inner(y1, y1) + 1.0) <= 1e-9);
    CHECK(std::abs(geo::distance(x, y1) - geo::tangent_norm(v1)) <= 1e-6);

    // geodesic length holds out to tangent norm 10
    VectorXd v10 = random_tangent(rng, x, 2.0);
    norm = geo::tangent_norm(v10);
    if (norm > 1e-12) v10 *= 10.0 * (0.1 + 0.9 * (i % 10) / 10.0) / norm;
    VectorXd y10 = geo::exp_map(x, v10);
    CHECK(std::abs(geo::distance(x, y10) - geo::tangent_norm(v10)) <= 1e-6);
  }
}

TEST_CASE("reproject") {
  VectorXd fixed = geo::reproject(vec3(0.9, 1, 0));
  CHECK(fixed(0) == doctest::Approx(kSqrt2).epsilon(1e-15));
  CHECK(fixed(1) == 1.0);

  VectorXd valid = vec3(kSqrt2, 1, 0);
  CHECK((geo::reproject(valid) - valid).cwiseAbs().maxCoeff() <= 1e-15);

  VectorXd origin = geo::reproject(vec3(5, 0, 0));
  CHECK(origin == vec3(1, 0, 0));

  CHECK_THROWS_AS(
      geo::reproject(vec3(1, std::numeric_limits<double>::quiet_NaN(), 0)),
      std::domain_error);
}

TEST_CASE("poincare and klein projections") {
  VectorXd origin = vec3(1, 0, 0);
  CHECK(geo::to_poincare(origin).cwiseAbs().maxCoeff() == 0.0);
  CHECK(geo::to_klein(origin).cwiseAbs().maxCoeff() == 0.0);

  VectorXd x = vec3(std::cosh(1.0), std::sinh(1.0), 0);
  CHECK(geo::to_klein(x)(0) ==
        doctest::Approx(0.7615941559557649).epsilon(1e-14));  // tanh 1
  CHECK(geo::to_poincare(x)(0) ==
        doctest::Approx(0.46211715726000974).epsilon(1e-14));  // tanh 1/2
}

TEST_CASE("projection round-trips") {
  Rng rng(46);
  for (int i = 0; i < 1000; ++i) {
    VectorXd x = random_point(rng, 4, 3.0);
    CHECK(geo::to_poincare(x).norm() < 1.0);
    CHECK(geo::to_klein(x).norm() < 1.0);
    VectorXd via_p = geo::from_poincare(geo::to_poincare(x));
    VectorXd via_k = geo::from_klein(geo::to_klein(x));
    CHECK((via_p - x).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((via_k - x).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

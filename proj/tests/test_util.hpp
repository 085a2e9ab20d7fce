#pragma once

#include <Eigen/Dense>

#include "heat/geometry.hpp"
#include "heat/rng.hpp"

namespace heat::testing {

// Random hyperboloid point with spatial coordinates uniform in
// [-scale, scale].
inline Eigen::VectorXd random_point(Rng& rng, int dim, double scale = 1.0) {
  Eigen::VectorXd x(dim + 1);
  x(0) = 0.0;
  for (int k = 1; k <= dim; ++k) x(k) = rng.uniform(-scale, scale);
  return geometry::reproject(x);
}

// Random tangent vector at x with entries of roughly the given scale.
inline Eigen::VectorXd random_tangent(Rng& rng, const Eigen::VectorXd& x,
                                      double scale = 1.0) {
  Eigen::VectorXd g(x.size());
  for (int k = 0; k < x.size(); ++k) g(k) = rng.uniform(-scale, scale);
  return geometry::project_to_tangent(x, g);
}

}  // namespace heat::testing

#pragma once

#include <Eigen/Dense>

namespace heat::geometry {

// Hyperboloid-model primitives. Points live in (n+1)-dimensional Minkowski
// space: coordinate 0 is the time component, coordinates 1..n are spatial.
// A valid hyperboloid point x satisfies <x,x> = -1 with x0 >= 1.

using Vec = Eigen::VectorXd;
using VecRef = Eigen::Ref<const Eigen::VectorXd>;

// Largest tangent-step Minkowski norm applied during optimization; longer
// steps are rescaled to this before the exponential map so cosh/sinh stay
// in range.
inline constexpr double kMaxStepNorm = 1.0;

// <x,y> = -x0*y0 + sum_k xk*yk
double minkowski_inner(VecRef x, VecRef y);

// Geodesic distance arccosh(-<x,y>); the argument is clamped to >= 1.
double distance(VecRef x, VecRef y);

// Minkowski norm sqrt(<v,v>) of a tangent vector (clamped at 0).
double tangent_norm(VecRef v);

// Orthogonal projection of an ambient vector onto the tangent space at x:
// g + <x,g>*x.
Vec project_to_tangent(VecRef x, VecRef g);

// Exp_x(v) = cosh(|v|)*x + sinh(|v|)*v/|v|, reprojected onto the
// hyperboloid. |v| < 1e-12 returns x unchanged.
Vec exp_map(VecRef x, VecRef v);

// Recompute the time coordinate from the spatial part:
// x0 = sqrt(1 + |x_spatial|^2). Throws on non-finite input.
Vec reproject(VecRef x);

// Stereographic projection to the Poincare ball: p = x_spatial / (1 + x0).
Vec to_poincare(VecRef x);

// Orthographic projection to the Klein ball: k = x_spatial / x0.
Vec to_klein(VecRef x);

// Inverse projections (lifts) back onto the hyperboloid.
Vec from_poincare(VecRef p);
Vec from_klein(VecRef k);

}  // namespace heat::geometry

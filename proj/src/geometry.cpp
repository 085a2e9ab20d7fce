#include "heat/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace heat::geometry {

double minkowski_inner(VecRef x, VecRef y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("minkowski_inner: size mismatch");
  }
  return -x(0) * y(0) + x.tail(x.size() - 1).dot(y.tail(y.size() - 1));
}

double distance(VecRef x, VecRef y) {
  double z = -minkowski_inner(x, y);
  if (z < 1.0) z = 1.0;  // drift guard: arccosh undefined below 1
  return std::acosh(z);
}

double tangent_norm(VecRef v) {
  double sq = minkowski_inner(v, v);
  return sq > 0.0 ? std::sqrt(sq) : 0.0;
}

Vec project_to_tangent(VecRef x, VecRef g) {
  return g + minkowski_inner(x, g) * x;
}

Vec exp_map(VecRef x, VecRef v) {
  double norm = tangent_norm(v);
  if (norm < 1e-12) return x;
  Vec out = std::cosh(norm) * x + (std::sinh(norm) / norm) * v;
  return reproject(out);
}

Vec reproject(VecRef x) {
  if (!x.allFinite()) {
    throw std::domain_error("reproject: non-finite coordinates");
  }
  Vec out = x;
  out(0) = std::sqrt(1.0 + out.tail(out.size() - 1).squaredNorm());
  return out;
}

Vec to_poincare(VecRef x) { return x.tail(x.size() - 1) / (1.0 + x(0)); }

Vec to_klein(VecRef x) { return x.tail(x.size() - 1) / x(0); }

Vec from_poincare(VecRef p) {
  double sq = p.squaredNorm();
  Vec out(p.size() + 1);
  out(0) = (1.0 + sq) / (1.0 - sq);
  out.tail(p.size()) = 2.0 * p / (1.0 - sq);
  return out;
}

Vec from_klein(VecRef k) {
  double t = 1.0 / std::sqrt(1.0 - k.squaredNorm());
  Vec out(k.size() + 1);
  out(0) = t;
  out.tail(k.size()) = t * k;
  return out;
}

}  // namespace heat::geometry

#include "minksum/random_bodies.hpp"

#include <cmath>
#include <numbers>

namespace mink {

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

Eigen::Quaterniond random_quaternion(Rng& rng) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  const double u3 = uniform01(rng);
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  Eigen::Quaterniond q(b * std::cos(two_pi * u3), a * std::sin(two_pi * u2),
                       a * std::cos(two_pi * u2), b * std::sin(two_pi * u3));
  q.normalize();
  return q;
}

Superquadric random_superquadric(int dim, Rng& rng, const RandomBodyOptions& opts) {
  const auto axis = [&] { return uniform(rng, opts.axis_min, opts.axis_max); };
  const auto eps = [&] { return uniform(rng, opts.eps_min, opts.eps_max); };
  if (dim == 2) {
    const double a = axis();
    const double b = axis();
    return Superquadric::planar(a, b, eps());
  }
  if (dim != 3) throw DomainError("random_superquadric: dimension must be 2 or 3");
  const double a = axis();
  const double b = axis();
  const double c = axis();
  const double e1 = eps();
  const double e2 = eps();
  return Superquadric::spatial(a, b, c, e1, e2);
}

Mat shear_matrix(int dim, double s) {
  Mat S = Mat::Identity(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) S(i, j) = s;
  }
  return S;
}

BodyInstance random_body(int dim, Rng& rng, const RandomBodyOptions& opts) {
  Superquadric shape = random_superquadric(dim, rng, opts);
  Mat M = Mat::Identity(dim, dim);
  if (opts.transform) {
    if (dim == 2) {
      const double alpha = uniform(rng, -std::numbers::pi, std::numbers::pi);
      M = rotation2d(alpha) * shear_matrix(2, uniform(rng, -opts.shear_max, opts.shear_max));
    } else {
      const Mat R = random_quaternion(rng).toRotationMatrix();
      Mat S = Mat::Identity(3, 3);
      S(0, 1) = uniform(rng, -opts.shear_max, opts.shear_max);
      S(0, 2) = uniform(rng, -opts.shear_max, opts.shear_max);
      S(1, 2) = uniform(rng, -opts.shear_max, opts.shear_max);
      M = R * S;
    }
  }
  Vec center(dim);
  for (int i = 0; i < dim; ++i) center(i) = uniform(rng, -opts.center_range, opts.center_range);
  return BodyInstance(std::move(shape), std::move(M), std::move(center));
}

}  // namespace mink

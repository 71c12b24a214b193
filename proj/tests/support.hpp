#pragma once

// Shared fixtures and brute-force oracles for the tests.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "minksum/baselines.hpp"
#include "minksum/random_bodies.hpp"

namespace testing {

using namespace mink;

inline Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline Mat diag(std::initializer_list<double> v) { return Mat(vec(v).asDiagonal()); }

inline BodyInstance unit_circle(const Vec& center) {
  return BodyInstance(Superquadric::planar(1, 1, 1), Mat::Identity(2, 2), center);
}

inline BodyInstance unit_sphere(const Vec& center) {
  return BodyInstance(Superquadric::spatial(1, 1, 1, 1, 1), Mat::Identity(3, 3), center);
}

inline Vec random_unit(int dim, Rng& rng) {
  Vec u(dim);
  do {
    for (int i = 0; i < dim; ++i) u(i) = uniform(rng, -1, 1);
  } while (u.norm() < 0.1 || u.norm() > 1.0);
  return u.normalized();
}

/// Random SPD matrix R·diag(s)·Rᵀ with s in [lo, hi].
inline Mat random_spd(int dim, Rng& rng, double lo = 0.5, double hi = 2.0) {
  Mat R = dim == 2 ? rotation2d(uniform(rng, -3.14, 3.14)) : Mat(random_quaternion(rng).toRotationMatrix());
  Vec s(dim);
  for (int i = 0; i < dim; ++i) s(i) = uniform(rng, lo, hi);
  return R * s.asDiagonal() * R.transpose();
}

inline GridSpec grid_of(int dim, int n) { return dim == 2 ? GridSpec::planar(n) : GridSpec::spatial(n, n); }

/// Largest distance between neighbouring samples on a parameter grid (2D: consecutive;
/// 3D: adjacent tensor-grid cells including diagonals, wrap-around in ω).
inline double max_spacing(const BodyInstance& body, int n_eta_or_theta, int n_omega = 0) {
  double h = 0.0;
  if (body.dim() == 2) {
    const auto grid = make_grid(GridSpec::planar(n_eta_or_theta));
    const auto pts = sample_surface(body, grid);
    for (std::size_t k = 0; k < pts.size(); ++k) h = std::max(h, (pts[k] - pts[(k + 1) % pts.size()]).norm());
    return h;
  }
  const double pi = 3.14159265358979323846;
  const auto at = [&](int i, int j) {
    const double eta = -pi / 2 + pi * i / (n_eta_or_theta - 1);
    const double omega = -pi + 2 * pi * j / n_omega;
    return body.to_world(surface_point(body.shape(), SphericalParam::spatial(eta, omega)));
  };
  for (int i = 0; i + 1 < n_eta_or_theta; ++i) {
    for (int j = 0; j < n_omega; ++j) {
      const Vec p = at(i, j);
      h = std::max({h, (p - at(i + 1, j)).norm(), (p - at(i, (j + 1) % n_omega)).norm(),
                    (p - at(i + 1, (j + 1) % n_omega)).norm(), (at(i + 1, j) - at(i, (j + 1) % n_omega)).norm()});
    }
  }
  return h;
}

/// Minimum pairwise distance between two sample sets.
inline double brute_force_distance(const std::vector<Vec>& s1, const std::vector<Vec>& s2) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& p : s1) {
    for (const Vec& q : s2) best = std::min(best, (p - q).squaredNorm());
  }
  return std::sqrt(best);
}

/// Overlap by membership: any sampled boundary point of one body strictly inside the other.
inline bool sampled_overlap(const BodyInstance& b1, const std::vector<Vec>& s1, const BodyInstance& b2,
                            const std::vector<Vec>& s2) {
  for (const Vec& p : s1) {
    if (implicit_value(b2.shape(), b2.to_body(p)) < 1.0) return true;
  }
  for (const Vec& p : s2) {
    if (implicit_value(b1.shape(), b1.to_body(p)) < 1.0) return true;
  }
  return false;
}

}  // namespace testing

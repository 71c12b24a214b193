#pragma once

// Closed-form Minkowski sum boundaries of two smooth strictly convex bodies.
//
// Contact mode computes ∂[B1 ⊕ (−B2)]: every point is a position of B2's
// center at which B2 touches B1 from outside.  Sum mode computes ∂[B1 ⊕ B2].
// Both are parameterized by the sphere parameter φ of body 1; the body-1
// gradient m1 = g1(u(φ)) selects the contact, and the body-2 point with the
// anti-parallel gradient is recovered through Φ(m1) = ‖m2‖.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "minksum/geom_core.hpp"

namespace mink {

enum class SumMode { contact, sum };

const char* to_string(SumMode mode);
SumMode sum_mode_from_string(const std::string& name);

struct MinkSumQuery {
  BodyInstance body1;
  BodyInstance body2;
  SumMode mode = SumMode::contact;
};

/// Φ(m1): norm of body-2's gradient at the point whose outward normal is
/// anti-parallel to m1.  Throws DomainError for zero m1.
double phi_magnitude(const Superquadric& body2, const Vec& m1);

/// Canonical-pose sum point for body-1 parameter φ (no linear maps, no centers).
Vec sum_point_gradient(const Superquadric& body1, const Superquadric& body2, SphericalParam phi1,
                       SumMode mode = SumMode::contact);

/// Normal-parameterized sum of two ellipsoids given as SPD matrices:
/// A1²n/‖A1n‖ + A2²n/‖A2n‖.  Contact and sum modes coincide.
Vec sum_point_normal(const Mat& A1, const Mat& A2, const Vec& n1);

/// Gradient-parameterized sum of two ellipsoids: ½A1²m1 + A2²m1/‖A2m1‖.
Vec ellipsoid_sum_point_gradient(const Mat& A1, const Mat& A2, const Vec& m1);

/// Sum point for linearly transformed bodies, relative to body1's center,
/// driven by the canonical body-1 gradient m1.
Vec sum_point_transformed_gradient(const MinkSumQuery& query, const Vec& m1);

/// Same as above with m1 = g1(u(φ1)).
Vec sum_point_transformed(const MinkSumQuery& query, SphericalParam phi1);

/// Variant driven by the world-frame body-1 gradient m1' = M1^{-T} m1.
/// Returns the same point as sum_point_transformed_gradient(query, M1^T m1').
Vec sum_point_world_gradient(const MinkSumQuery& query, const Vec& m1_world);

/// Uniform θ grid for 2D; (η, ω) tensor grid for 3D with each pole once.
struct GridSpec {
  int dim = 2;
  int n_theta = 1000;  // 2D
  int n_eta = 100;     // 3D, including both poles
  int n_omega = 100;   // 3D

  static GridSpec planar(int n) { return {2, n, 0, 0}; }
  static GridSpec spatial(int n_eta, int n_omega) { return {3, 0, n_eta, n_omega}; }
  std::size_t size() const;
};

std::vector<SphericalParam> make_grid(const GridSpec& spec);

struct BoundaryCloud {
  MinkSumQuery query;
  std::vector<Vec> points;  // world frame: body1 center + sum point
  std::vector<SphericalParam> params;

  int dim() const { return query.body1.dim(); }
  SumMode mode() const { return query.mode; }
  std::size_t size() const { return points.size(); }
};

/// A cloud point that could not be evaluated; carries its grid index and φ.
class CloudError : public std::runtime_error {
 public:
  CloudError(std::size_t index, SphericalParam phi, const std::string& what);
  std::size_t index() const { return index_; }
  SphericalParam phi() const { return phi_; }

 private:
  std::size_t index_;
  SphericalParam phi_;
};

/// One boundary point per φ, ordered as `grid`.  Evaluated in parallel with
/// OpenMP; output is bit-identical to serial::boundary_cloud.
BoundaryCloud boundary_cloud(const MinkSumQuery& query, std::span<const SphericalParam> grid);

namespace serial {
/// Single-threaded reference for boundary_cloud.
BoundaryCloud boundary_cloud(const MinkSumQuery& query, std::span<const SphericalParam> grid);
}  // namespace serial

}  // namespace mink

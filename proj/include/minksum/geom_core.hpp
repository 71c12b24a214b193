#pragma once

// Superquadric bodies and the single-body maps between boundary points,
// unit-sphere parameters and un-normalized gradients.
//
// Conventions used throughout:
//   2D  x(θ)    = (a·spow(cos θ, ε), b·spow(sin θ, ε))
//   3D  x(η, ω) = (a·spow(cos η, ε1)·spow(cos ω, ε2),
//                  b·spow(cos η, ε1)·spow(sin ω, ε2),
//                  c·spow(sin η, ε1))
// with η measured from the equator.  Every fractional power of a quantity
// that may be negative goes through spow, so all quadrants/octants share
// one formula.

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "minksum/errors.hpp"

namespace mink {

/// Vectors and matrices of runtime dimension 2 or 3, stored inline.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;

/// sign(x)·|x|^p.  Throws DomainError for p <= 0.
double spow(double x, double p);

/// cos/sin that are exact (0, ±1) at integer multiples of π/2.
struct SinCos {
  double s;
  double c;
};
SinCos sincos_exact(double angle);

/// Planar rotation by `angle`, exact at quarter turns.
Mat rotation2d(double angle);

/// Sphere parameter: θ in 2D (stored as omega, eta = 0); (η, ω) in 3D.
struct SphericalParam {
  double eta = 0.0;
  double omega = 0.0;

  static SphericalParam planar(double theta) { return {0.0, theta}; }
  static SphericalParam spatial(double eta, double omega) { return {eta, omega}; }
  double theta() const { return omega; }

  bool operator==(const SphericalParam&) const = default;
};

/// Wraps into θ ∈ [−π, π] (2D) or η ∈ [−π/2, π/2], ω ∈ [−π, π] (3D),
/// keeping u_from_phi unchanged.
SphericalParam wrap(int dim, SphericalParam phi);

/// Convex superquadric in canonical pose.  Exponents live in the open
/// interval (0, 2); exponent 1 is an ellipse/ellipsoid.
class Superquadric {
 public:
  static Superquadric planar(double a, double b, double eps);
  static Superquadric spatial(double a, double b, double c, double eps1, double eps2);
  /// Ellipse/ellipsoid with the given semi-axes (exponents 1).
  static Superquadric ellipsoid(const Vec& semi_axes);

  int dim() const { return static_cast<int>(semi_axes_.size()); }
  const Vec& semi_axes() const { return semi_axes_; }
  double semi_axis(int i) const { return semi_axes_(i); }
  /// ε in 2D; ε1 (the η exponent) in 3D.
  double eps1() const { return eps_[0]; }
  /// ε2 (the ω exponent) in 3D; equals ε1 in 2D.
  double eps2() const { return eps_[1]; }
  bool is_ellipsoid() const { return eps_[0] == 1.0 && eps_[1] == 1.0; }
  /// Largest semi-axis.
  double scale() const { return semi_axes_.maxCoeff(); }

 private:
  Superquadric(Vec semi_axes, double eps1, double eps2);

  Vec semi_axes_;
  std::array<double, 2> eps_;
};

/// Superquadric placed in the world by x_world = M·x + center.
class BodyInstance {
 public:
  explicit BodyInstance(Superquadric shape);
  BodyInstance(Superquadric shape, Mat map, Vec center);

  const Superquadric& shape() const { return shape_; }
  int dim() const { return shape_.dim(); }
  const Mat& map() const { return map_; }
  const Mat& map_inverse() const { return map_inv_; }
  /// M^{-T}: carries canonical-frame gradients to the world frame.
  Mat gradient_map() const { return map_inv_.transpose(); }
  const Vec& center() const { return center_; }

  Vec to_world(const Vec& x_body) const { return map_ * x_body + center_; }
  Vec to_body(const Vec& x_world) const { return map_inv_ * (x_world - center_); }

 private:
  Superquadric shape_;
  Mat map_;
  Mat map_inv_;
  Vec center_;
};

/// Unit vector for a sphere parameter.
Vec u_from_phi(int dim, SphericalParam phi);

/// Spherical angles of a nonzero direction (inverse of u_from_phi).
SphericalParam phi_from_direction(const Vec& direction);

/// Ψ(x): 1 on the boundary, < 1 inside, > 1 outside.
double implicit_value(const Superquadric& body, const Vec& x);

/// ∇Ψ at an arbitrary body-frame point.
Vec implicit_gradient(const Superquadric& body, const Vec& x);

/// Boundary point x(φ).
Vec surface_point(const Superquadric& body, SphericalParam phi);

/// g(u): the un-normalized gradient at the boundary point parameterized by u.
/// Positively homogeneous: g(k·u) = k^{2−ε1}·g(u).
Vec gradient_from_u(const Superquadric& body, const Vec& u);

/// Inverse gradient map: the boundary point whose gradient is m.  `m` must be
/// realizable; a 3D gradient with γ(m3) < −1e-9 raises InconsistentGradient.
Vec point_from_gradient(const Superquadric& body, const Vec& m);

/// g⁻¹(m), un-normalized: g(g⁻¹(m)) = m for every nonzero m.
Vec g_inverse_direction(const Superquadric& body, const Vec& m);

/// Normal-parameterized ellipsoid boundary A²n/‖An‖ for SPD A.
Vec ellipsoid_normal_point(const Mat& A, const Vec& n);

/// True if A is symmetric and positive definite.
bool is_spd(const Mat& A, double tol = 1e-12);

/// Enclosed volume of a 3D superquadric.
double volume(const Superquadric& body);

/// Euler Beta function via log-gamma.
double beta_function(double x, double y);

// Geometric primitives approximated by superquadrics.
Superquadric make_cube(double length, double width, double height);
Superquadric make_cylinder(double semi_a, double semi_b, double height);
BodyInstance make_parallelepiped(double length, double width, double height, const Mat& shear,
                                 const Vec& center);

}  // namespace mink

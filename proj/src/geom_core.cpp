#include "minksum/geom_core.hpp"

#include <algorithm>
#include <numbers>
#include <string>

namespace mink {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

// Slack on γ(m3) before it is treated as an inconsistent gradient.
constexpr double kGammaTol = 1e-9;

void require_dim(const Superquadric& body, const Vec& v, const char* what) {
  if (v.size() != body.dim()) {
    throw DomainError(std::string(what) + ": dimension " + std::to_string(v.size()) +
                      " does not match body dimension " + std::to_string(body.dim()));
  }
}

}  // namespace

double spow(double x, double p) {
  if (!(p > 0.0)) {
    throw DomainError("spow: exponent must be positive, got " + std::to_string(p));
  }
  if (x == 0.0) return 0.0;
  const double mag = std::pow(std::abs(x), p);
  return x < 0.0 ? -mag : mag;
}

SinCos sincos_exact(double angle) {
  const double k = std::nearbyint(angle / kHalfPi);
  const double r = angle - k * kHalfPi;
  const double s = std::sin(r);
  const double c = std::cos(r);
  // k mod 4 in {0,1,2,3}
  const long q = ((static_cast<long>(k) % 4) + 4) % 4;
  switch (q) {
    case 0: return {s, c};
    case 1: return {c, -s};
    case 2: return {-s, -c};
    default: return {-c, s};
  }
}

Mat rotation2d(double angle) {
  const auto [s, c] = sincos_exact(angle);
  Mat R(2, 2);
  R << c, -s, s, c;
  return R;
}

SphericalParam wrap(int dim, SphericalParam phi) {
  const double two_pi = 2.0 * kPi;
  if (dim == 2) {
    return SphericalParam::planar(std::remainder(phi.omega, two_pi));
  }
  double eta = std::remainder(phi.eta, two_pi);
  double omega = phi.omega;
  if (eta > kHalfPi) {
    eta = kPi - eta;
    omega += kPi;
  } else if (eta < -kHalfPi) {
    eta = -kPi - eta;
    omega += kPi;
  }
  return SphericalParam::spatial(eta, std::remainder(omega, two_pi));
}

// ---------------------------------------------------------------------------
// Superquadric / BodyInstance

Superquadric::Superquadric(Vec semi_axes, double eps1, double eps2)
    : semi_axes_(std::move(semi_axes)), eps_{eps1, eps2} {
  for (int i = 0; i < semi_axes_.size(); ++i) {
    if (!(semi_axes_(i) > 0.0) || !std::isfinite(semi_axes_(i))) {
      throw DomainError("superquadric: semi-axis " + std::to_string(i) +
                        " must be positive and finite");
    }
  }
  for (double e : eps_) {
    if (!(e > 0.0 && e < 2.0)) {
      throw DomainError("superquadric: exponent " + std::to_string(e) +
                        " outside the convex range (0, 2)");
    }
  }
}

Superquadric Superquadric::planar(double a, double b, double eps) {
  Vec axes(2);
  axes << a, b;
  return Superquadric(axes, eps, eps);
}

Superquadric Superquadric::spatial(double a, double b, double c, double eps1, double eps2) {
  Vec axes(3);
  axes << a, b, c;
  return Superquadric(axes, eps1, eps2);
}

Superquadric Superquadric::ellipsoid(const Vec& semi_axes) {
  if (semi_axes.size() != 2 && semi_axes.size() != 3) {
    throw DomainError("ellipsoid: only 2D and 3D are supported");
  }
  return Superquadric(semi_axes, 1.0, 1.0);
}

BodyInstance::BodyInstance(Superquadric shape)
    : BodyInstance(shape, Mat::Identity(shape.dim(), shape.dim()), Vec::Zero(shape.dim())) {}

BodyInstance::BodyInstance(Superquadric shape, Mat map, Vec center)
    : shape_(std::move(shape)), map_(std::move(map)), center_(std::move(center)) {
  const int d = shape_.dim();
  if (map_.rows() != d || map_.cols() != d) {
    throw DomainError("body: linear map must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  if (center_.size() != d) {
    throw DomainError("body: center must have " + std::to_string(d) + " components");
  }
  if (!map_.allFinite() || !center_.allFinite()) {
    throw DomainError("body: non-finite map or center");
  }
  const double scale = map_.cwiseAbs().maxCoeff();
  if (!(std::abs(map_.determinant()) > 1e-12 * std::pow(scale, d))) {
    throw DomainError("body: linear map is singular");
  }
  map_inv_ = map_.inverse();
}

// ---------------------------------------------------------------------------
// Single-body maps

Vec u_from_phi(int dim, SphericalParam phi) {
  Vec u(dim);
  if (dim == 2) {
    const auto [s, c] = sincos_exact(phi.theta());
    u << c, s;
    return u;
  }
  if (dim != 3) throw DomainError("u_from_phi: dimension must be 2 or 3");
  const auto [se, ce] = sincos_exact(phi.eta);
  const auto [so, co] = sincos_exact(phi.omega);
  u << ce * co, ce * so, se;
  return u;
}

SphericalParam phi_from_direction(const Vec& direction) {
  if (direction.size() == 2) {
    return SphericalParam::planar(std::atan2(direction(1), direction(0)));
  }
  if (direction.size() != 3) throw DomainError("phi_from_direction: dimension must be 2 or 3");
  const double rxy = std::hypot(direction(0), direction(1));
  const double omega = rxy > 0.0 ? std::atan2(direction(1), direction(0)) : 0.0;
  return SphericalParam::spatial(std::atan2(direction(2), rxy), omega);
}

double implicit_value(const Superquadric& body, const Vec& x) {
  require_dim(body, x, "implicit_value");
  const Vec& s = body.semi_axes();
  if (body.dim() == 2) {
    const double p = 2.0 / body.eps1();
    return std::pow(std::abs(x(0) / s(0)), p) + std::pow(std::abs(x(1) / s(1)), p);
  }
  const double e1 = body.eps1();
  const double e2 = body.eps2();
  const double psi =
      std::pow(std::abs(x(0) / s(0)), 2.0 / e2) + std::pow(std::abs(x(1) / s(1)), 2.0 / e2);
  return std::pow(psi, e2 / e1) + std::pow(std::abs(x(2) / s(2)), 2.0 / e1);
}

Vec implicit_gradient(const Superquadric& body, const Vec& x) {
  require_dim(body, x, "implicit_gradient");
  const Vec& s = body.semi_axes();
  Vec m(body.dim());
  if (body.dim() == 2) {
    const double e = body.eps1();
    for (int j = 0; j < 2; ++j) m(j) = 2.0 / (e * s(j)) * spow(x(j) / s(j), 2.0 / e - 1.0);
    return m;
  }
  const double e1 = body.eps1();
  const double e2 = body.eps2();
  const double psi =
      std::pow(std::abs(x(0) / s(0)), 2.0 / e2) + std::pow(std::abs(x(1) / s(1)), 2.0 / e2);
  const double lateral = psi > 0.0 ? std::pow(psi, e2 / e1 - 1.0) : 0.0;
  for (int j = 0; j < 2; ++j) {
    m(j) = 2.0 / (e1 * s(j)) * lateral * spow(x(j) / s(j), 2.0 / e2 - 1.0);
  }
  m(2) = 2.0 / (e1 * s(2)) * spow(x(2) / s(2), 2.0 / e1 - 1.0);
  return m;
}

Vec surface_point(const Superquadric& body, SphericalParam phi) {
  const Vec& s = body.semi_axes();
  Vec x(body.dim());
  if (body.dim() == 2) {
    const auto [sn, cs] = sincos_exact(phi.theta());
    x << s(0) * spow(cs, body.eps1()), s(1) * spow(sn, body.eps1());
    return x;
  }
  const auto [se, ce] = sincos_exact(phi.eta);
  const auto [so, co] = sincos_exact(phi.omega);
  const double ring = spow(ce, body.eps1());
  x << s(0) * ring * spow(co, body.eps2()), s(1) * ring * spow(so, body.eps2()),
      s(2) * spow(se, body.eps1());
  return x;
}

Vec gradient_from_u(const Superquadric& body, const Vec& u) {
  require_dim(body, u, "gradient_from_u");
  const Vec& s = body.semi_axes();
  Vec m(body.dim());
  if (body.dim() == 2) {
    const double e = body.eps1();
    for (int j = 0; j < 2; ++j) m(j) = 2.0 / (s(j) * e) * spow(u(j), 2.0 - e);
    return m;
  }
  const double e1 = body.eps1();
  const double e2 = body.eps2();
  const double r2 = u(0) * u(0) + u(1) * u(1);
  const double ring = r2 > 0.0 ? std::pow(r2, (e2 - e1) / 2.0) : 0.0;
  for (int j = 0; j < 2; ++j) m(j) = 2.0 / (s(j) * e1) * spow(u(j), 2.0 - e2) * ring;
  m(2) = 2.0 / (s(2) * e1) * spow(u(2), 2.0 - e1);
  return m;
}

Vec point_from_gradient(const Superquadric& body, const Vec& m) {
  require_dim(body, m, "point_from_gradient");
  const Vec& s = body.semi_axes();
  Vec x(body.dim());
  if (body.dim() == 2) {
    const double e = body.eps1();
    for (int j = 0; j < 2; ++j) x(j) = s(j) * spow(s(j) * e * m(j) / 2.0, e / (2.0 - e));
    return x;
  }
  const double e1 = body.eps1();
  const double e2 = body.eps2();
  const double t3 = s(2) * e1 * m(2) / 2.0;
  double gamma = 1.0 - std::pow(std::abs(t3), 2.0 / (2.0 - e1));
  if (gamma < -kGammaTol) {
    throw InconsistentGradient("point_from_gradient: gradient is not realizable (gamma = " +
                               std::to_string(gamma) + ")");
  }
  gamma = std::max(gamma, 0.0);
  const double ring_exp = (e1 - e2) / (2.0 - e2);
  for (int j = 0; j < 2; ++j) {
    const double base = spow(s(j) * e1 * m(j) / 2.0, e2 / (2.0 - e2));
    x(j) = base == 0.0 ? 0.0 : s(j) * base * std::pow(gamma, ring_exp);
  }
  x(2) = s(2) * spow(t3, e1 / (2.0 - e1));
  return x;
}

Vec g_inverse_direction(const Superquadric& body, const Vec& m) {
  require_dim(body, m, "g_inverse_direction");
  if (m.isZero(0.0)) throw DomainError("g_inverse_direction: zero gradient");
  const Vec& s = body.semi_axes();
  Vec v(body.dim());
  if (body.dim() == 2) {
    const double e = body.eps1();
    for (int j = 0; j < 2; ++j) v(j) = spow(s(j) * e * m(j) / 2.0, 1.0 / (2.0 - e));
    return v;
  }
  const double e1 = body.eps1();
  const double e2 = body.eps2();
  const double p0 = s(0) * e1 * m(0) / 2.0;
  const double p1 = s(1) * e1 * m(1) / 2.0;
  const double rho =
      std::pow(std::abs(p0), 2.0 / (2.0 - e2)) + std::pow(std::abs(p1), 2.0 / (2.0 - e2));
  const double ring = rho > 0.0 ? std::pow(rho, (e1 - e2) / (4.0 - 2.0 * e1)) : 0.0;
  v(0) = spow(p0, 1.0 / (2.0 - e2)) * ring;
  v(1) = spow(p1, 1.0 / (2.0 - e2)) * ring;
  v(2) = spow(s(2) * e1 * m(2) / 2.0, 1.0 / (2.0 - e1));
  return v;
}

bool is_spd(const Mat& A, double tol) {
  if (A.rows() != A.cols() || A.rows() == 0) return false;
  const double scale = A.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !A.allFinite()) return false;
  if (!A.isApprox(A.transpose(), tol)) return false;
  Eigen::SelfAdjointEigenSolver<Mat> eig(A, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() > tol * scale;
}

Vec ellipsoid_normal_point(const Mat& A, const Vec& n) {
  if (!is_spd(A)) throw DomainError("ellipsoid_normal_point: matrix is not SPD");
  if (n.size() != A.rows()) throw DomainError("ellipsoid_normal_point: dimension mismatch");
  const Vec An = A * n;
  return A * An / An.norm();
}

double beta_function(double x, double y) {
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

double volume(const Superquadric& body) {
  if (body.dim() != 3) throw DomainError("volume: 3D body required");
  const Vec& s = body.semi_axes();
  const double e1 = body.eps1();
  const double e2 = body.eps2();
  return 2.0 * s(0) * s(1) * s(2) * e1 * e2 * beta_function(e1 / 2.0 + 1.0, e1) *
         beta_function(e2 / 2.0, e2 / 2.0);
}

Superquadric make_cube(double length, double width, double height) {
  return Superquadric::spatial(length / 2.0, width / 2.0, height / 2.0, 0.1, 0.1);
}

Superquadric make_cylinder(double semi_a, double semi_b, double height) {
  return Superquadric::spatial(semi_a, semi_b, height / 2.0, 0.1, 1.0);
}

BodyInstance make_parallelepiped(double length, double width, double height, const Mat& shear,
                                 const Vec& center) {
  return BodyInstance(make_cube(length, width, height), shear, center);
}

}  // namespace mink

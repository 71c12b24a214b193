#include "minksum/minkowski.hpp"

#include <numbers>
#include <string>

namespace mink {

namespace {

constexpr double kPi = std::numbers::pi;

void check_query(const MinkSumQuery& query) {
  if (query.body1.dim() != query.body2.dim()) {
    throw DomainError("minkowski: bodies have different dimensions");
  }
}

// Body-2 gradient paired with the (canonical body-2 frame) direction m.
// Contact mode: anti-parallel to m; sum mode: parallel.
Vec paired_gradient(const Superquadric& body2, const Vec& m, SumMode mode) {
  const double scale = phi_magnitude(body2, m) / m.norm();
  return mode == SumMode::contact ? Vec(-scale * m) : Vec(scale * m);
}

Vec combine(const Vec& p1, const Vec& p2, SumMode mode) {
  return mode == SumMode::contact ? Vec(p1 - p2) : Vec(p1 + p2);
}

template <bool Parallel>
BoundaryCloud run_cloud(const MinkSumQuery& query, std::span<const SphericalParam> grid) {
  check_query(query);
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  BoundaryCloud cloud{query, std::vector<Vec>(grid.size()),
                      std::vector<SphericalParam>(grid.begin(), grid.end())};
  std::vector<std::string> errors(grid.size());
  std::vector<char> failed(grid.size(), 0);
  const Vec& c1 = query.body1.center();

#pragma omp parallel for schedule(static) if (Parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      Vec p = c1 + sum_point_transformed(query, grid[i]);
      if (!p.allFinite()) throw DomainError("non-finite boundary point");
      cloud.points[i] = std::move(p);
    } catch (const std::exception& e) {
      failed[i] = 1;
      errors[i] = e.what();
    }
  }

  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (failed[i]) throw CloudError(static_cast<std::size_t>(i), grid[i], errors[i]);
  }
  return cloud;
}

}  // namespace

const char* to_string(SumMode mode) { return mode == SumMode::contact ? "contact" : "sum"; }

SumMode sum_mode_from_string(const std::string& name) {
  if (name == "contact") return SumMode::contact;
  if (name == "sum") return SumMode::sum;
  throw DomainError("unknown mode '" + name + "' (expected contact or sum)");
}

double phi_magnitude(const Superquadric& body2, const Vec& m1) {
  if (m1.isZero(0.0)) throw DomainError("phi_magnitude: zero gradient");
  const Vec v = g_inverse_direction(body2, Vec(-m1));
  return gradient_from_u(body2, v / v.norm()).norm();
}

Vec sum_point_gradient(const Superquadric& body1, const Superquadric& body2, SphericalParam phi1,
                       SumMode mode) {
  if (body1.dim() != body2.dim()) {
    throw DomainError("sum_point_gradient: bodies have different dimensions");
  }
  const Vec m1 = gradient_from_u(body1, u_from_phi(body1.dim(), phi1));
  return combine(point_from_gradient(body1, m1),
                 point_from_gradient(body2, paired_gradient(body2, m1, mode)), mode);
}

Vec sum_point_normal(const Mat& A1, const Mat& A2, const Vec& n1) {
  if (!is_spd(A1) || !is_spd(A2)) throw DomainError("sum_point_normal: matrices must be SPD");
  return ellipsoid_normal_point(A1, n1) + ellipsoid_normal_point(A2, n1);
}

Vec ellipsoid_sum_point_gradient(const Mat& A1, const Mat& A2, const Vec& m1) {
  if (!is_spd(A1) || !is_spd(A2)) {
    throw DomainError("ellipsoid_sum_point_gradient: matrices must be SPD");
  }
  return 0.5 * A1 * A1 * m1 + A2 * A2 * m1 / (A2 * m1).norm();
}

Vec sum_point_transformed_gradient(const MinkSumQuery& query, const Vec& m1) {
  check_query(query);
  const BodyInstance& b1 = query.body1;
  const BodyInstance& b2 = query.body2;
  // M2^T M1^{-T} m1: body-1 gradient expressed in body 2's canonical frame.
  const Vec m1_in_2 = b2.map().transpose() * (b1.gradient_map() * m1);
  const Vec x1 = b1.map() * point_from_gradient(b1.shape(), m1);
  const Vec x2 =
      b2.map() * point_from_gradient(b2.shape(), paired_gradient(b2.shape(), m1_in_2, query.mode));
  return combine(x1, x2, query.mode);
}

Vec sum_point_transformed(const MinkSumQuery& query, SphericalParam phi1) {
  const Superquadric& s1 = query.body1.shape();
  return sum_point_transformed_gradient(query, gradient_from_u(s1, u_from_phi(s1.dim(), phi1)));
}

Vec sum_point_world_gradient(const MinkSumQuery& query, const Vec& m1_world) {
  check_query(query);
  const BodyInstance& b1 = query.body1;
  const BodyInstance& b2 = query.body2;
  const Vec m1_in_2 = b2.map().transpose() * m1_world;
  const Vec x1 = b1.map() * point_from_gradient(b1.shape(), b1.map().transpose() * m1_world);
  const Vec x2 =
      b2.map() * point_from_gradient(b2.shape(), paired_gradient(b2.shape(), m1_in_2, query.mode));
  return combine(x1, x2, query.mode);
}

std::size_t GridSpec::size() const {
  if (dim == 2) return static_cast<std::size_t>(n_theta);
  return static_cast<std::size_t>(n_eta - 2) * static_cast<std::size_t>(n_omega) + 2;
}

std::vector<SphericalParam> make_grid(const GridSpec& spec) {
  std::vector<SphericalParam> grid;
  if (spec.dim == 2) {
    if (spec.n_theta < 1) throw DomainError("grid: need at least one θ sample");
    grid.reserve(spec.size());
    for (int k = 0; k < spec.n_theta; ++k) {
      grid.push_back(SphericalParam::planar(-kPi + 2.0 * kPi * k / spec.n_theta));
    }
    return grid;
  }
  if (spec.dim != 3) throw DomainError("grid: dimension must be 2 or 3");
  if (spec.n_eta < 2 || spec.n_omega < 1) {
    throw DomainError("grid: 3D grid needs n_eta >= 2 and n_omega >= 1");
  }
  grid.reserve(spec.size());
  for (int i = 0; i < spec.n_eta; ++i) {
    const double eta =
        i == spec.n_eta - 1 ? kPi / 2.0 : -kPi / 2.0 + kPi * i / (spec.n_eta - 1);
    if (i == 0 || i == spec.n_eta - 1) {
      grid.push_back(SphericalParam::spatial(eta, 0.0));
      continue;
    }
    for (int j = 0; j < spec.n_omega; ++j) {
      grid.push_back(SphericalParam::spatial(eta, -kPi + 2.0 * kPi * j / spec.n_omega));
    }
  }
  return grid;
}

CloudError::CloudError(std::size_t index, SphericalParam phi, const std::string& what)
    : std::runtime_error("boundary point " + std::to_string(index) + " (eta=" +
                         std::to_string(phi.eta) + ", omega=" + std::to_string(phi.omega) +
                         "): " + what),
      index_(index),
      phi_(phi) {}

BoundaryCloud boundary_cloud(const MinkSumQuery& query, std::span<const SphericalParam> grid) {
  return run_cloud<true>(query, grid);
}

namespace serial {
BoundaryCloud boundary_cloud(const MinkSumQuery& query, std::span<const SphericalParam> grid) {
  return run_cloud<false>(query, grid);
}
}  // namespace serial

}  // namespace mink

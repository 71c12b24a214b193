#include "minksum/collision.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace mink {

namespace {

constexpr double kPi = std::numbers::pi;

// A solve counts as found only below this residual norm.
constexpr double kAcceptResidual = 1e-8;

Eigen::VectorXd cross(const Vec& a, const Vec& b) {
  if (a.size() == 2) {
    Eigen::VectorXd r(1);
    r(0) = a(0) * b(1) - a(1) * b(0);
    return r;
  }
  const Eigen::Vector3d c = Eigen::Vector3d(a(0), a(1), a(2)).cross(Eigen::Vector3d(b(0), b(1), b(2)));
  return Eigen::VectorXd(c);
}

Vec world_gradient(const BodyInstance& body, SphericalParam phi) {
  const Superquadric& s = body.shape();
  return body.gradient_map() * gradient_from_u(s, u_from_phi(s.dim(), phi));
}

// Parameter whose world-frame outward normal points along `direction`.
SphericalParam phi_for_normal(const BodyInstance& body, const Vec& direction) {
  const Vec canonical = body.map().transpose() * direction;
  return phi_from_direction(g_inverse_direction(body.shape(), canonical));
}

SphericalParam antipode(int dim, SphericalParam phi) {
  if (dim == 2) return wrap(2, SphericalParam::planar(phi.theta() + kPi));
  return wrap(3, SphericalParam::spatial(-phi.eta, phi.omega + kPi));
}

// Evenly spread fallback seeds: 4 in 2D, 8 in 3D.
std::vector<SphericalParam> spread_seeds(int dim) {
  std::vector<SphericalParam> seeds;
  const double quarter = kPi / 4.0;
  if (dim == 2) {
    for (int k : {1, 3, 5, 7}) seeds.push_back(SphericalParam::planar(-kPi + k * quarter));
    return seeds;
  }
  for (double eta : {-quarter, quarter}) {
    for (int k : {1, 3, 5, 7}) seeds.push_back(SphericalParam::spatial(eta, -kPi + k * quarter));
  }
  return seeds;
}

// Grid sample minimizing `score`, a seed for when the fixed seeds fail. Poles are skipped.
template <typename Score>
SphericalParam best_grid_seed(int dim, Score score) {
  SphericalParam best = dim == 2 ? SphericalParam::planar(0.0) : SphericalParam::spatial(0.0, 0.0);
  double best_score = std::numeric_limits<double>::infinity();
  const auto consider = [&](SphericalParam phi) {
    const double v = score(phi);
    if (v < best_score) {
      best_score = v;
      best = phi;
    }
  };
  if (dim == 2) {
    constexpr int n = 72;
    for (int k = 0; k < n; ++k) consider(SphericalParam::planar(-kPi + 2.0 * kPi * (k + 0.5) / n));
    return best;
  }
  constexpr int n_eta = 16, n_omega = 32;
  for (int i = 0; i < n_eta; ++i) {
    const double eta = -kPi / 2 + kPi * (i + 0.5) / n_eta;
    for (int k = 0; k < n_omega; ++k) consider(SphericalParam::spatial(eta, -kPi + 2.0 * kPi * (k + 0.5) / n_omega));
  }
  return best;
}

// 1 - cos of the angle between a and b, or 3 when either is zero.
double misalignment(const Vec& a, const Vec& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 3.0;
  return 1.0 - a.dot(b) / (na * nb);
}

WrapFn angle_wrapper(int dim, int n_params) {
  return [dim, n_params](Eigen::VectorXd& v) {
    for (int p = 0; p < n_params; ++p) {
      const int w = dim == 2 ? 1 : 2;
      Eigen::VectorXd block = v.segment(p * w, w);
      v.segment(p * w, w) = params_to_vector(dim, wrap(dim, vector_to_params(dim, block)));
    }
  };
}

MinkSumQuery contact_query(const BodyInstance& b1, const BodyInstance& b2) {
  return MinkSumQuery{b1, b2, SumMode::contact};
}

struct Attempt {
  bool found = false;
  SolveResult best;
};

// Runs LM from each seed in turn until `accept` holds for a solution.
template <typename Accept>
Attempt solve_seeds(const ResidualFn& fn, const std::vector<Eigen::VectorXd>& seeds,
                    const SolverConfig& cfg, const WrapFn& wrap_fn, Accept accept) {
  Attempt out;
  bool have_best = false;
  for (const Eigen::VectorXd& seed : seeds) {
    SolveResult r = levenberg_marquardt(fn, seed, cfg, wrap_fn);
    if (r.residual_norm <= kAcceptResidual && accept(r.x)) {
      out.found = true;
      out.best = std::move(r);
      return out;
    }
    if (!have_best || r.residual_norm < out.best.residual_norm) {
      out.best = std::move(r);
      have_best = true;
    }
  }
  return out;
}

struct SurfaceSolve {
  bool found = false;
  SolveResult solve;
  SphericalParam phi;
};

// Surface point of a body, reached through its gradient at φ.
Vec body_point(const BodyInstance& body, SphericalParam phi) {
  const Superquadric& s = body.shape();
  return body.to_world(point_from_gradient(s, gradient_from_u(s, u_from_phi(s.dim(), phi))));
}

// How LM variables map to φ1: directly, or through the world normal they encode. Each route
// compresses different features (flat patches in one, sharp vertices in the other).
enum class Route { surface, normal };

SphericalParam route_phi(const BodyInstance& body, Route route, SphericalParam v) {
  if (route == Route::surface) return v;
  return phi_for_normal(body, u_from_phi(body.dim(), v));
}

SurfaceSolve route_solve(const MinkSumQuery& query, Route route, const std::vector<SphericalParam>& hints,
                         const SolverConfig& cfg, const std::function<Eigen::VectorXd(SphericalParam)>& residual,
                         const std::function<double(SphericalParam)>& score,
                         const std::function<bool(SphericalParam)>& accept) {
  const int dim = query.body1.dim();
  const auto phi_of = [&](const Eigen::VectorXd& v) {
    return route_phi(query.body1, route, vector_to_params(dim, v));
  };
  // Default initialization and its antipode, the evenly spread seeds, then (only if those all
  // fail) the best sample of a coarse grid.
  std::vector<Eigen::VectorXd> seeds;
  for (const SphericalParam& h : hints) seeds.push_back(params_to_vector(dim, h));
  for (const SphericalParam& s : spread_seeds(dim)) seeds.push_back(params_to_vector(dim, s));
  const ResidualFn fn = [&](const Eigen::VectorXd& v) { return residual(phi_of(v)); };
  const auto accept_v = [&](const Eigen::VectorXd& v) { return accept(phi_of(v)); };
  Attempt a = solve_seeds(fn, seeds, cfg, angle_wrapper(dim, 1), accept_v);
  if (!a.found) {
    const SphericalParam grid =
        best_grid_seed(dim, [&](SphericalParam v) { return score(route_phi(query.body1, route, v)); });
    Attempt g = solve_seeds(fn, {params_to_vector(dim, grid)}, cfg, angle_wrapper(dim, 1), accept_v);
    if (g.found || g.best.residual_norm < a.best.residual_norm) a = std::move(g);
  }
  SurfaceSolve out;
  out.found = a.found;
  out.phi = wrap(dim, phi_of(a.best.x));
  out.solve = std::move(a.best);
  return out;
}

// Hints in route variables for a target world normal n of body1.
std::vector<SphericalParam> route_hints(const BodyInstance& body, Route route, const Vec& n,
                                        std::vector<SphericalParam> extra_phi) {
  const int dim = body.dim();
  std::vector<SphericalParam> hints;
  if (route == Route::surface) {
    const SphericalParam init = phi_for_normal(body, n);
    hints = {init, antipode(dim, init)};
    for (const SphericalParam& p : extra_phi) hints.push_back(p);
  } else {
    const SphericalParam init = phi_from_direction(n);
    hints = {init, antipode(dim, init)};
    for (const SphericalParam& p : extra_phi) hints.push_back(phi_from_direction(world_gradient(body, p)));
  }
  return hints;
}

// φ1 with x(φ1) on the ray from the origin through c2 − c1.
SurfaceSolve ray_solve(const MinkSumQuery& query, Route route, const SolverConfig& cfg) {
  const Vec d = query.body2.center() - query.body1.center();
  return route_solve(
      query, route, route_hints(query.body1, route, d, {}), cfg,
      [&](SphericalParam phi) { return residual_mink_ray(query, phi); },
      [&](SphericalParam phi) { return misalignment(sum_point_transformed(query, phi), d); },
      [&](SphericalParam phi) { return sum_point_transformed(query, phi).dot(d) > 0.0; });
}

// φ1 whose outward normal points from x(φ1) to c2 − c1.
SurfaceSolve normal_solve(const MinkSumQuery& query, Route route, SphericalParam hint, const SolverConfig& cfg) {
  const BodyInstance& b1 = query.body1;
  const Vec d = query.body2.center() - b1.center();
  return route_solve(
      query, route, route_hints(b1, route, d, {hint}), cfg,
      [&](SphericalParam phi) { return residual_mink_normal(query, phi); },
      [&](SphericalParam phi) {
        return misalignment(world_gradient(b1, phi), Vec(d - sum_point_transformed(query, phi)));
      },
      [&](SphericalParam phi) { return world_gradient(b1, phi).dot(d - sum_point_transformed(query, phi)) > 0.0; });
}

// Support point of a body for world normal n, relative to its center. Stays in vector form so
// components near zero keep full relative precision.
Vec support_offset(const BodyInstance& body, const Vec& n) {
  const Superquadric& s = body.shape();
  const Vec u = g_inverse_direction(s, Vec(body.map().transpose() * n)).normalized();
  return body.map() * point_from_gradient(s, gradient_from_u(s, u));
}

// Point of the contact set B1 ⊕ (−B2) (relative to c1 − c2) with outward normal n.
Vec contact_set_point(const BodyInstance& b1, const BodyInstance& b2, const Vec& n) {
  return support_offset(b1, n) - support_offset(b2, Vec(-n));
}

// Support function of the contact set.
double contact_set_support(const BodyInstance& b1, const BodyInstance& b2, const Vec& n) {
  return support_offset(b1, n).dot(n) - support_offset(b2, Vec(-n)).dot(n);
}

// Orthonormal basis (columns) of the complement of unit v.
Mat tangent_basis(const Vec& v) {
  const Eigen::Index dim = v.size();
  Mat full = Mat::Identity(dim, dim);
  full.col(0) = v;
  Eigen::HouseholderQR<Mat> qr(full);
  const Mat q = qr.householderQ();
  return q.rightCols(dim - 1);
}

struct Smooth {
  double value;
  Eigen::VectorXd grad;
};

// BFGS with Armijo backtracking; stops when `done` holds at the iterate.
template <typename F, typename Done>
SolveResult bfgs(F f, Eigen::VectorXd x, int max_iters, Done done,
                 const std::function<double(const Eigen::VectorXd&)>& residual) {
  const Eigen::Index n = x.size();
  Smooth cur = f(x);
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  SolveResult r;
  r.accepted_residuals.push_back(residual(x));
  bool scaled = false;
  for (; r.iterations < max_iters && !done(x); ++r.iterations) {
    Eigen::VectorXd p = -h * cur.grad;
    if (cur.grad.dot(p) >= 0.0) {
      h.setIdentity();
      p = -cur.grad;
    }
    double t = 1.0;
    Smooth next = f(x + p);
    for (int k = 0; k < 60 && !(next.value <= cur.value + 1e-4 * t * cur.grad.dot(p)); ++k) {
      t *= 0.5;
      next = f(x + t * p);
    }
    const Eigen::VectorXd step = t * p;
    if (!(next.value <= cur.value)) break;
    const Eigen::VectorXd dg = next.grad - cur.grad;
    const double sy = step.dot(dg);
    if (sy > 0.0) {
      if (!scaled) {
        h *= sy / dg.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd left = Eigen::MatrixXd::Identity(n, n) - rho * step * dg.transpose();
      h = left * h * left.transpose() + rho * step * step.transpose();
    }
    x += step;
    cur = next;
    r.accepted_residuals.push_back(residual(x));
  }
  r.x = x;
  r.residual_norm = residual(x);
  r.converged = done(x);
  return r;
}

// Relative gap between the certified bounds that ends a fallback solve.
constexpr double kBoundGap = 1e-13;

// Offsets around a chart point used to collect support points near the optimum.
std::vector<Eigen::VectorXd> ring_offsets(int dim, double radius) {
  std::vector<Eigen::VectorXd> out;
  if (dim == 2) {
    for (double sign : {1.0, -1.0}) out.push_back(Eigen::VectorXd::Constant(1, sign * radius));
    return out;
  }
  for (int k = 0; k < 6; ++k) {
    const double angle = kPi * k / 3.0;
    out.push_back((Eigen::VectorXd(2) << radius * std::cos(angle), radius * std::sin(angle)).finished());
  }
  return out;
}

// Simplices (segments in 2D, triangles in 3D) over a center point and one ring: fans plus,
// in 3D, the two alternating triangles.
std::vector<std::vector<int>> ring_simplices(int dim) {
  if (dim == 2) return {{0, 1}, {0, 2}, {1, 2}};
  std::vector<std::vector<int>> out;
  for (int k = 0; k < 6; ++k) out.push_back({0, 1 + k, 1 + (k + 1) % 6});
  out.push_back({1, 3, 5});
  out.push_back({2, 4, 6});
  return out;
}

constexpr double kRingRadii[] = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12};

// Largest t with t·dir inside the simplex, or -1 when the ray misses it.
double ray_hit(const Vec& dir, const std::vector<Vec>& p) {
  const Eigen::Index dim = dir.size();
  Mat a(dim, dim);
  a.col(0) = dir;
  for (std::size_t k = 1; k < p.size(); ++k) a.col(static_cast<Eigen::Index>(k)) = p[0] - p[k];
  // t·dir = p0 + Σ w_k (p_k − p0)  ⇔  t·dir + Σ w_k (p0 − p_k) = p0.
  const Eigen::FullPivLU<Mat> lu(a);
  if (!lu.isInvertible()) return -1.0;
  const Vec sol = lu.solve(p[0]);
  double total = 0.0;
  for (Eigen::Index k = 1; k < dim; ++k) {
    if (sol(k) < 0.0) return -1.0;
    total += sol(k);
  }
  return total <= 1.0 ? sol(0) : -1.0;
}

// Barycentric weights of the closest point to q on the segment or triangle p.
std::vector<double> closest_on_simplex(const Vec& q, const std::vector<Vec>& p) {
  const auto on_segment = [&](std::size_t i, std::size_t j) {
    const Vec ab = p[j] - p[i];
    const double len2 = ab.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((q - p[i]).dot(ab) / len2, 0.0, 1.0) : 0.0;
    std::vector<double> w(p.size(), 0.0);
    w[i] = 1.0 - t;
    w[j] = t;
    return w;
  };
  if (p.size() == 2) return on_segment(0, 1);
  const auto point = [&](const std::vector<double>& w) {
    Vec x = Vec::Zero(q.size());
    for (std::size_t k = 0; k < p.size(); ++k) x += w[k] * p[k];
    return x;
  };
  Mat e(q.size(), 2);
  e.col(0) = p[1] - p[0];
  e.col(1) = p[2] - p[0];
  const Eigen::Vector2d w = (e.transpose() * e).ldlt().solve(e.transpose() * Vec(q - p[0]));
  if (w.allFinite() && w(0) >= 0.0 && w(1) >= 0.0 && w.sum() <= 1.0) return {1.0 - w.sum(), w(0), w(1)};
  std::vector<double> best = on_segment(0, 1);
  for (const auto& c : {on_segment(1, 2), on_segment(0, 2)}) {
    if ((q - point(c)).squaredNorm() < (q - point(best)).squaredNorm()) best = c;
  }
  return best;
}

// Fallback solve over the support function of the contact set, ended by certified bounds.
struct BoundSolve {
  SolveResult solve;
  Vec n;
  double lower = 0.0;
  double upper = 0.0;
};

// Drives BFGS on `f` in the chart `normal_of`; `bounds` returns (lower, upper) at a chart point.
template <typename F, typename Normal, typename Bounds>
BoundSolve bound_solve(F f, Normal normal_of, Bounds bounds, int dim, int max_iters) {
  const auto gap = [&](const Eigen::VectorXd& a) {
    const auto [lo, hi] = bounds(a);
    return (hi - lo) / std::max(std::abs(lo), 1.0);
  };
  const auto done = [&](const Eigen::VectorXd& a) { return gap(a) <= kBoundGap; };
  BoundSolve out;
  out.solve = bfgs(f, Eigen::VectorXd::Zero(dim - 1), max_iters, done, gap);
  out.n = normal_of(out.solve.x);
  std::tie(out.lower, out.upper) = bounds(out.solve.x);
  return out;
}

// Gauge of the contact set at d, λ = max ⟨n, d⟩ / h(n), minimized as h over ⟨y, d⟩ = 1 (a
// convex problem whose gradient is the support point). Lower bound from the current normal;
// upper bound from support-point simplices the ray crosses.
BoundSolve gauge_solve(const BodyInstance& b1, const BodyInstance& b2, const Vec& d, const SolverConfig& cfg) {
  const int dim = b1.dim();
  const SphericalParam seed = best_grid_seed(dim, [&](SphericalParam phi) {
    const Vec n = u_from_phi(dim, phi);
    const double nd = n.dot(d);
    return nd > 0.0 ? contact_set_support(b1, b2, n) / nd : std::numeric_limits<double>::infinity();
  });
  const Vec n0 = u_from_phi(dim, seed);
  const Vec y0 = n0 / n0.dot(d);
  const Mat e = tangent_basis(d.normalized());
  const auto y_of = [&](const Eigen::VectorXd& a) { return Vec(y0 + e * a); };
  const auto normal_of = [&](const Eigen::VectorXd& a) { return Vec(y_of(a).normalized()); };
  const auto f = [&](const Eigen::VectorXd& a) {
    const Vec y = y_of(a);
    const Vec x = contact_set_point(b1, b2, y.normalized());
    return Smooth{x.dot(y), e.transpose() * x};
  };
  const Vec dir = d.normalized();
  const auto bounds = [&](const Eigen::VectorXd& a) {
    const Vec y = y_of(a);
    // On the plane 1/h(y) = ⟨ŷ, d⟩ / h(ŷ).
    const double lower = 1.0 / (contact_set_support(b1, b2, y.normalized()) * y.norm());
    double t_best = -1.0;
    std::vector<Vec> pts{contact_set_point(b1, b2, y.normalized())};
    for (double r : kRingRadii) {
      pts.resize(1);
      for (const Eigen::VectorXd& off : ring_offsets(dim, r * std::max(1.0, a.norm()))) {
        pts.push_back(contact_set_point(b1, b2, y_of(a + off).normalized()));
      }
      for (const std::vector<int>& simplex : ring_simplices(dim)) {
        std::vector<Vec> p;
        for (int k : simplex) p.push_back(pts[static_cast<std::size_t>(k)]);
        t_best = std::max(t_best, ray_hit(dir, p));
      }
    }
    const double upper = t_best > 0.0 ? d.norm() / t_best : std::numeric_limits<double>::infinity();
    return std::pair{lower, upper};
  };
  return bound_solve(f, normal_of, bounds, dim, cfg.max_iters);
}

// Convex combination of contact-set support points: normals and weights.
struct SupportCombo {
  std::vector<Vec> normals;
  std::vector<double> weights;
};

// Distance from d to the contact set: lower bound max ⟨n, d⟩ − h(n) over a tangent chart at
// the best grid normal, upper bound from the closest point of nearby support-point simplices
// (recorded in `combo` for the last evaluated chart point).
BoundSolve distance_solve(const BodyInstance& b1, const BodyInstance& b2, const Vec& d, const SolverConfig& cfg,
                          SupportCombo& combo) {
  const int dim = b1.dim();
  const Vec n0 = u_from_phi(dim, best_grid_seed(dim, [&](SphericalParam phi) {
                              const Vec n = u_from_phi(dim, phi);
                              return contact_set_support(b1, b2, n) - n.dot(d);
                            }));
  const Mat e = tangent_basis(n0);
  const auto normal_of = [&](const Eigen::VectorXd& a) { return Vec(Vec(n0 + e * a).normalized()); };
  const auto f = [&](const Eigen::VectorXd& a) {
    const Vec y = n0 + e * a;
    const Vec n = y.normalized();
    const Vec x = contact_set_point(b1, b2, n);
    const Vec ascent = (Mat::Identity(dim, dim) - n * n.transpose()) * Vec(d - x) / y.norm();
    return Smooth{x.dot(n) - n.dot(d), -(e.transpose() * ascent)};
  };
  const auto bounds = [&](const Eigen::VectorXd& a) {
    const Vec n = normal_of(a);
    const double lower = n.dot(d) - contact_set_support(b1, b2, n);
    std::vector<Vec> normals{n};
    std::vector<Vec> pts{contact_set_point(b1, b2, n)};
    combo = {{n}, {1.0}};
    double upper = (d - pts[0]).norm();
    for (double r : kRingRadii) {
      normals.resize(1);
      pts.resize(1);
      for (const Eigen::VectorXd& off : ring_offsets(dim, r)) {
        normals.push_back(normal_of(a + off));
        pts.push_back(contact_set_point(b1, b2, normals.back()));
      }
      for (const std::vector<int>& simplex : ring_simplices(dim)) {
        std::vector<Vec> p, m;
        for (int k : simplex) {
          p.push_back(pts[static_cast<std::size_t>(k)]);
          m.push_back(normals[static_cast<std::size_t>(k)]);
        }
        const std::vector<double> w = closest_on_simplex(d, p);
        Vec x = Vec::Zero(dim);
        for (std::size_t k = 0; k < p.size(); ++k) x += w[k] * p[k];
        if ((d - x).norm() < upper) {
          upper = (d - x).norm();
          combo = {m, w};
        }
      }
    }
    return std::pair{lower, upper};
  };
  return bound_solve(f, normal_of, bounds, dim, cfg.max_iters);
}

// Ordered fallbacks: (swap bodies, route).
constexpr std::pair<bool, Route> kStrategies[] = {
    {false, Route::surface}, {true, Route::surface}, {false, Route::normal}, {true, Route::normal}};

}  // namespace

const char* to_string(Method method) {
  switch (method) {
    case Method::ray: return "ray";
    case Method::normal: return "normal";
    default: return "common";
  }
}

const char* to_string(ContactStatus status) {
  switch (status) {
    case ContactStatus::separated: return "separated";
    case ContactStatus::touching: return "touching";
    case ContactStatus::penetrating: return "penetrating";
    default: return "inconclusive";
  }
}

Method method_from_string(const std::string& name) {
  if (name == "ray") return Method::ray;
  if (name == "normal") return Method::normal;
  if (name == "common") return Method::common;
  throw DomainError("unknown method '" + name + "' (expected ray, normal or common)");
}

Eigen::VectorXd params_to_vector(int dim, SphericalParam phi) {
  if (dim == 2) return Eigen::VectorXd::Constant(1, phi.theta());
  Eigen::VectorXd v(2);
  v << phi.eta, phi.omega;
  return v;
}

SphericalParam vector_to_params(int dim, const Eigen::VectorXd& v) {
  if (dim == 2) return SphericalParam::planar(v(0));
  return SphericalParam::spatial(v(0), v(1));
}

Eigen::VectorXd residual_common_normal(const BodyInstance& body1, const BodyInstance& body2,
                                       SphericalParam phi1, SphericalParam phi2) {
  const Vec x1 = body1.to_world(surface_point(body1.shape(), phi1));
  const Vec x2 = body2.to_world(surface_point(body2.shape(), phi2));
  Vec n1 = world_gradient(body1, phi1);
  Vec n2 = world_gradient(body2, phi2);
  n1.normalize();
  n2.normalize();
  const Eigen::VectorXd a = cross(n1, n2);
  const Eigen::VectorXd b = cross(n1, Vec(x2 - x1));
  Eigen::VectorXd r(a.size() + b.size());
  r << a, b;
  return r;
}

Eigen::VectorXd residual_mink_ray(const MinkSumQuery& query, SphericalParam phi1) {
  const Vec d = query.body2.center() - query.body1.center();
  if (d.isZero(0.0)) throw DegenerateQuery("ray residual: coincident centers");
  return cross(sum_point_transformed(query, phi1), d);
}

Eigen::VectorXd residual_mink_normal(const MinkSumQuery& query, SphericalParam phi1) {
  const Vec d = query.body2.center() - query.body1.center();
  if (d.isZero(0.0)) throw DegenerateQuery("normal residual: coincident centers");
  const Vec x = sum_point_transformed(query, phi1);
  return cross(world_gradient(query.body1, phi1), Vec(d - x));
}

ProximityResult proximity_query(const BodyInstance& body1, const BodyInstance& body2,
                                Method method, const SolverConfig& cfg) {
  if (body1.dim() != body2.dim()) throw DomainError("proximity_query: dimension mismatch");
  const int dim = body1.dim();
  const MinkSumQuery query = contact_query(body1, body2);
  const Vec d = body2.center() - body1.center();
  const Vec& c1 = body1.center();

  ProximityResult res;
  res.method = method;
  if (d.isZero(0.0)) {
    res.status = ContactStatus::penetrating;
    res.witness1 = c1;
    res.witness2 = body2.center();
    return res;
  }

  // Contact status from the center ray. A near-flat patch on body2 is tiny in φ1, so the swapped
  // query (whose contact set is the negation) is tried when the φ1 solve fails.
  const MinkSumQuery swapped = contact_query(body2, body1);
  SurfaceSolve ray;
  Vec x_ray;
  for (const auto& [swap, route] : kStrategies) {
    ray = ray_solve(swap ? swapped : query, route, cfg);
    if (!ray.found) continue;
    if (swap) {
      x_ray = -sum_point_transformed(swapped, ray.phi);
      res.phi1 = phi_for_normal(body1, Vec(-world_gradient(body2, ray.phi)));
    } else {
      x_ray = sum_point_transformed(query, ray.phi);
      res.phi1 = ray.phi;
    }
    break;
  }
  res.solver = ray.solve;
  if (ray.found) {
    res.ray_ratio = d.norm() / x_ray.norm();
  } else {
    const BoundSolve g = gauge_solve(body1, body2, d, cfg);
    res.solver = g.solve;
    if (!g.solve.converged) {
      res.status = ContactStatus::inconclusive;
      return res;
    }
    res.ray_ratio = 0.5 * (g.lower + g.upper);
    x_ray = d / res.ray_ratio;
    res.phi1 = phi_for_normal(body1, g.n);
  }
  if (res.ray_ratio > 1.0 + kTouchTol) {
    res.status = ContactStatus::separated;
  } else if (std::abs(res.ray_ratio - 1.0) <= kTouchTol) {
    res.status = ContactStatus::touching;
  } else {
    res.status = ContactStatus::penetrating;
  }

  if (res.status == ContactStatus::touching) {
    res.distance = 0.0;
    res.witness1 = body_point(body1, res.phi1);
    res.witness2 = res.witness1;
    return res;
  }
  if (res.status == ContactStatus::penetrating || method == Method::ray) {
    res.witness1 = c1 + x_ray;
    res.witness2 = body2.center();
    return res;
  }

  if (method == Method::normal) {
    const SphericalParam phi2 = phi_for_normal(body2, Vec(-world_gradient(body1, res.phi1)));
    SurfaceSolve a;
    for (const auto& [swap, route] : kStrategies) {
      a = swap ? normal_solve(swapped, route, phi2, cfg) : normal_solve(query, route, res.phi1, cfg);
      if (!a.found) continue;
      if (swap) {
        // Gap from the swapped surface to −d; body2 is the base body there.
        const Vec gap = -d - sum_point_transformed(swapped, a.phi);
        res.phi1 = phi_for_normal(body1, Vec(-world_gradient(body2, a.phi)));
        res.distance = gap.norm();
        res.witness2 = body_point(body2, a.phi);
        res.witness1 = res.witness2 + gap;
      } else {
        const Vec gap = d - sum_point_transformed(query, a.phi);
        res.phi1 = a.phi;
        res.distance = gap.norm();
        res.witness1 = body_point(body1, a.phi);
        res.witness2 = res.witness1 + gap;
      }
      break;
    }
    res.solver = a.solve;
    if (!a.found) {
      SupportCombo combo;
      const BoundSolve g = distance_solve(body1, body2, d, cfg, combo);
      res.solver = g.solve;
      if (!g.solve.converged) {
        res.status = ContactStatus::inconclusive;
        return res;
      }
      // Witnesses combine each body's support points with the weights of the bounding simplex,
      // so their separation is exactly the certified upper bound.
      res.phi1 = phi_for_normal(body1, g.n);
      res.witness1 = body1.center();
      res.witness2 = body2.center();
      for (std::size_t k = 0; k < combo.normals.size(); ++k) {
        res.witness1 += combo.weights[k] * support_offset(body1, combo.normals[k]);
        res.witness2 += combo.weights[k] * support_offset(body2, Vec(-combo.normals[k]));
      }
      res.distance = (res.witness2 - res.witness1).norm();
    }
    return res;
  }

  // Common normal over (φ1, φ2).
  const int w = dim == 2 ? 1 : 2;
  const ResidualFn fn = [&](const Eigen::VectorXd& v) {
    return residual_common_normal(body1, body2, vector_to_params(dim, v.head(w)),
                                  vector_to_params(dim, v.tail(w)));
  };
  const auto seed_pair = [&](SphericalParam phi1) {
    const Vec n1 = world_gradient(body1, phi1);
    Eigen::VectorXd v(2 * w);
    v << params_to_vector(dim, phi1), params_to_vector(dim, phi_for_normal(body2, Vec(-n1)));
    return v;
  };
  const SphericalParam grid = best_grid_seed(dim, [&](SphericalParam phi) {
    return misalignment(world_gradient(body1, phi), Vec(d - sum_point_transformed(query, phi)));
  });
  std::vector<Eigen::VectorXd> seeds{seed_pair(grid), seed_pair(res.phi1), seed_pair(phi_for_normal(body1, d))};
  for (const SphericalParam& s : spread_seeds(dim)) seeds.push_back(seed_pair(s));
  const Attempt a = solve_seeds(fn, seeds, cfg, angle_wrapper(dim, 2), [&](const Eigen::VectorXd& v) {
    const SphericalParam p1 = vector_to_params(dim, v.head(w));
    const SphericalParam p2 = vector_to_params(dim, v.tail(w));
    const Vec n1 = world_gradient(body1, p1);
    const Vec n2 = world_gradient(body2, p2);
    const Vec x1 = body1.to_world(surface_point(body1.shape(), p1));
    const Vec x2 = body2.to_world(surface_point(body2.shape(), p2));
    return n1.dot(n2) < 0.0 && n1.dot(x2 - x1) > 0.0;
  });
  res.solver = a.best;
  res.phi1 = wrap(dim, vector_to_params(dim, a.best.x.head(w)));
  if (!a.found) {
    res.status = ContactStatus::inconclusive;
    return res;
  }
  res.witness1 = body1.to_world(surface_point(body1.shape(), res.phi1));
  res.witness2 = body2.to_world(
      surface_point(body2.shape(), wrap(dim, vector_to_params(dim, a.best.x.tail(w)))));
  res.distance = (res.witness2 - res.witness1).norm();
  return res;
}

}  // namespace mink

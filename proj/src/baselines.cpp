#include "minksum/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mink {

namespace {

constexpr double kCollinearTol = 1e-12;

// Drops vertices whose neighbours are collinear with them.
void drop_collinear(std::vector<Point2>& v) {
  bool changed = true;
  while (changed && v.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < v.size() && v.size() >= 3; ++i) {
      const std::size_t n = v.size();
      const Point2& prev = v[(i + n - 1) % n];
      const Point2& next = v[(i + 1) % n];
      if (std::abs(cross2(prev, v[i], next)) <= kCollinearTol ||
          (v[i] - prev).norm() <= kCollinearTol) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
}

// Index of the lowest (then leftmost) vertex.
std::size_t bottom_vertex(const std::vector<Point2>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i].y() < v[best].y() || (v[i].y() == v[best].y() && v[i].x() < v[best].x())) best = i;
  }
  return best;
}

Vec unit_normal_world(const BodyInstance& body, SphericalParam phi) {
  const Superquadric& s = body.shape();
  const Vec m = body.gradient_map() * gradient_from_u(s, u_from_phi(s.dim(), phi));
  return m / m.norm();
}

}  // namespace

double cross2(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

bool is_strictly_convex(const Polygon2D& poly, double tol) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(cross2(v[i], v[(i + 1) % n], v[(i + 2) % n]) > tol)) return false;
  }
  return true;
}

std::vector<Vec> definition_sum_samples(std::span<const Vec> cloud1, std::span<const Vec> cloud2,
                                        SumMode mode) {
  std::vector<Vec> out;
  out.reserve(cloud1.size() * cloud2.size());
  for (const Vec& x : cloud1) {
    for (const Vec& y : cloud2) {
      out.push_back(mode == SumMode::contact ? Vec(x - y) : Vec(x + y));
    }
  }
  return out;
}

Polygon2D hull2d(std::span<const Point2> points) {
  std::vector<Point2> p(points.begin(), points.end());
  std::sort(p.begin(), p.end(), [](const Point2& a, const Point2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) throw DegenerateHull("hull2d: fewer than 3 distinct points");

  std::vector<Point2> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross2(h[k - 2], h[k - 1], p[i]) <= kCollinearTol) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(h[k - 2], h[k - 1], p[i]) <= kCollinearTol) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);  // last point repeats the first
  if (h.size() < 3) throw DegenerateHull("hull2d: input points are collinear");
  return Polygon2D{std::move(h)};
}

Polygon2D hull2d(std::span<const Vec> points) {
  std::vector<Point2> p;
  p.reserve(points.size());
  for (const Vec& v : points) {
    if (v.size() != 2) throw DomainError("hull2d: 2D points required");
    p.emplace_back(v(0), v(1));
  }
  return hull2d(std::span<const Point2>(p));
}

Polygon2D edge_sort_sum2d(const Polygon2D& P, const Polygon2D& Q) {
  if (P.size() == 0 || Q.size() == 0) throw DomainError("edge_sort_sum2d: empty polygon");
  for (const Polygon2D* poly : {&P, &Q}) {
    if (poly->size() >= 3 && !is_strictly_convex(*poly)) {
      throw DomainError("edge_sort_sum2d: polygon is not strictly convex and CCW");
    }
    if (poly->size() == 2) throw DomainError("edge_sort_sum2d: two-vertex polygon");
  }
  if (Q.size() == 1 || P.size() == 1) {
    const Polygon2D& poly = P.size() == 1 ? Q : P;
    const Point2 shift = P.size() == 1 ? P.vertices[0] : Q.vertices[0];
    Polygon2D out;
    for (const Point2& v : poly.vertices) out.vertices.push_back(v + shift);
    return out;
  }

  const auto& a = P.vertices;
  const auto& b = Q.vertices;
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t i0 = bottom_vertex(a);
  const std::size_t j0 = bottom_vertex(b);

  Polygon2D out;
  out.vertices.reserve(n + m);
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n || j < m) {
    out.vertices.push_back(a[(i0 + i) % n] + b[(j0 + j) % m]);
    const Point2 ea = a[(i0 + i + 1) % n] - a[(i0 + i) % n];
    const Point2 eb = b[(j0 + j + 1) % m] - b[(j0 + j) % m];
    const double turn = ea.x() * eb.y() - ea.y() * eb.x();
    if (j == m || (i < n && turn > 0.0)) {
      ++i;
    } else if (i == n || turn < 0.0) {
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  drop_collinear(out.vertices);
  return out;
}

std::vector<Vec> sample_surface(const BodyInstance& body, std::span<const SphericalParam> grid) {
  std::vector<Vec> out;
  out.reserve(grid.size());
  for (const SphericalParam& phi : grid) out.push_back(body.to_world(surface_point(body.shape(), phi)));
  return out;
}

double support_check(const BoundaryCloud& cloud, std::span<const Vec> samples1,
                     std::span<const Vec> samples2) {
  const MinkSumQuery& q = cloud.query;
  const Vec& c2 = q.body2.center();
  const double sign2 = q.mode == SumMode::contact ? -1.0 : 1.0;
  const auto n = static_cast<std::ptrdiff_t>(cloud.size());
  double worst = -std::numeric_limits<double>::infinity();

#pragma omp parallel for schedule(static) reduction(max : worst)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const Vec dir = unit_normal_world(q.body1, cloud.params[k]);
    // max over pairs of ⟨n, a_i ± (b_j − c2)⟩ separates into two maxima.
    double best1 = -std::numeric_limits<double>::infinity();
    for (const Vec& a : samples1) best1 = std::max(best1, dir.dot(a));
    double best2 = -std::numeric_limits<double>::infinity();
    for (const Vec& b : samples2) best2 = std::max(best2, sign2 * dir.dot(b - c2));
    worst = std::max(worst, best1 + best2 - dir.dot(cloud.points[k]));
  }
  return worst;
}

KissingErrors kissing_point_errors(const MinkSumQuery& query, SphericalParam phi,
                                   const Vec& point) {
  const BodyInstance& b1 = query.body1;
  const BodyInstance& b2 = query.body2;
  const Vec x1_local = surface_point(b1.shape(), phi);
  const Vec x1_world = b1.to_world(x1_local);
  // Body 2 placed with its center at `point`, same linear map.
  const Vec x1_in_2 = b2.map_inverse() * (x1_world - point);
  const Vec m1 = b1.gradient_map() * implicit_gradient(b1.shape(), x1_local);
  const Vec m2 = b2.gradient_map() * implicit_gradient(b2.shape(), x1_in_2);
  KissingErrors e;
  e.implicit = std::abs(implicit_value(b2.shape(), x1_in_2) - 1.0);
  e.gradient = std::abs(m1.dot(m2) / (m1.norm() * m2.norm()) + 1.0);
  return e;
}

KissingReport kissing_errors(const MinkSumQuery& query, const BoundaryCloud& cloud) {
  const auto n = static_cast<std::ptrdiff_t>(cloud.size());
  std::vector<KissingErrors> per_point(cloud.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    per_point[k] = kissing_point_errors(query, cloud.params[k], cloud.points[k]);
  }
  KissingReport r;
  r.n_points = cloud.size();
  for (const KissingErrors& e : per_point) {
    r.mean_implicit += e.implicit;
    r.mean_gradient += e.gradient;
    r.max_implicit = std::max(r.max_implicit, e.implicit);
    r.max_gradient = std::max(r.max_gradient, e.gradient);
  }
  if (r.n_points > 0) {
    r.mean_implicit /= static_cast<double>(r.n_points);
    r.mean_gradient /= static_cast<double>(r.n_points);
  }
  return r;
}

}  // namespace mink

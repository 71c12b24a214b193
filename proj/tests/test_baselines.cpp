#include <algorithm>
#include <numbers>

#include "doctest.h"
#include "support.hpp"

using namespace mink;
using testing::vec;

namespace {

constexpr double kPi = std::numbers::pi;

Polygon2D random_convex_polygon(Rng& rng, int max_vertices) {
  // Hull of random points on a jittered ellipse; retry until enough vertices survive.
  for (;;) {
    const int n = 3 + static_cast<int>(uniform01(rng) * (max_vertices - 2));
    const double a = uniform(rng, 0.5, 2.0), b = uniform(rng, 0.5, 2.0);
    const Point2 c(uniform(rng, -2, 2), uniform(rng, -2, 2));
    std::vector<Point2> pts;
    for (int i = 0; i < n; ++i) {
      const double t = uniform(rng, -kPi, kPi);
      pts.push_back(c + Point2(a * std::cos(t), b * std::sin(t)));
    }
    try {
      Polygon2D p = hull2d(pts);
      if (p.size() >= 3 && is_strictly_convex(p)) return p;
    } catch (const DegenerateHull&) {
    }
  }
}

bool same_vertex_set(const Polygon2D& a, const Polygon2D& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const Point2& p : a.vertices) {
    const bool found = std::any_of(b.vertices.begin(), b.vertices.end(),
                                   [&](const Point2& q) { return (p - q).norm() <= tol; });
    if (!found) return false;
  }
  return true;
}

std::vector<Point2> pairwise_sums(const Polygon2D& P, const Polygon2D& Q) {
  std::vector<Point2> out;
  for (const Point2& p : P.vertices) {
    for (const Point2& q : Q.vertices) out.push_back(p + q);
  }
  return out;
}

}  // namespace

TEST_CASE("definition_sum_samples") {
  const std::vector<Vec> a{vec({1, 0})}, b{vec({0, 1})};
  const auto d = definition_sum_samples(a, b, SumMode::contact);
  REQUIRE(d.size() == 1);
  CHECK((d[0] - vec({1, -1})).norm() == 0.0);
  CHECK((definition_sum_samples(a, b, SumMode::sum)[0] - vec({1, 1})).norm() == 0.0);

  const std::vector<Vec> three(3, vec({0, 0})), four(4, vec({1, 1}));
  CHECK(definition_sum_samples(three, four, SumMode::contact).size() == 12);

  const auto grid = make_grid(GridSpec::planar(64));
  const auto s1 = sample_surface(testing::unit_circle(vec({0, 0})), grid);
  const auto sums = definition_sum_samples(s1, s1, SumMode::sum);
  double r = 0.0;
  for (const Vec& p : sums) r = std::max(r, p.norm());
  CHECK(r <= 2.0 + 1e-12);
  CHECK(r >= 2.0 - 2.0 * (1 - std::cos(kPi / 64)));
}

TEST_CASE("hull2d") {
  const std::vector<Point2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  const Polygon2D h = hull2d(square);
  CHECK(h.size() == 4);
  CHECK(is_strictly_convex(h));

  const std::vector<Point2> tri{{0, 0}, {0, 1}, {1, 0}};
  const Polygon2D t = hull2d(tri);
  REQUIRE(t.size() == 3);
  CHECK(cross2(t.vertices[0], t.vertices[1], t.vertices[2]) > 0);
  CHECK(same_vertex_set(t, Polygon2D{tri}, 0.0));

  Rng rng(61);
  std::vector<Point2> disk;
  while (disk.size() < 1000) {
    const Point2 p(uniform(rng, -1, 1), uniform(rng, -1, 1));
    if (p.norm() <= 1) disk.push_back(p);
  }
  const Polygon2D hd = hull2d(disk);
  for (const Point2& p : disk) {
    for (std::size_t i = 0; i < hd.size(); ++i) {
      CHECK(cross2(hd.vertices[i], hd.vertices[(i + 1) % hd.size()], p) >= -1e-12);
    }
  }

  const std::vector<Point2> line{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  CHECK_THROWS_AS(hull2d(line), DegenerateHull);
  const std::vector<Point2> dup{{1, 1}, {1, 1}};
  CHECK_THROWS_AS(hull2d(dup), DegenerateHull);
}

TEST_CASE("edge_sort_sum2d") {
  const Polygon2D sq{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  const Polygon2D s2 = edge_sort_sum2d(sq, sq);
  CHECK(same_vertex_set(s2, Polygon2D{{{0, 0}, {2, 0}, {2, 2}, {0, 2}}}, 1e-15));

  const Polygon2D tri{{{0, 0}, {2, 0}, {0, 1}}};
  const Polygon2D pt{{{3, -1}}};
  CHECK(same_vertex_set(edge_sort_sum2d(tri, pt), Polygon2D{{{3, -1}, {5, -1}, {3, 0}}}, 1e-15));
  CHECK(same_vertex_set(edge_sort_sum2d(pt, tri), Polygon2D{{{3, -1}, {5, -1}, {3, 0}}}, 1e-15));

  const Polygon2D dart{{{0, 0}, {2, 0}, {0.5, 0.5}, {0, 2}}};
  CHECK_THROWS_AS(edge_sort_sum2d(dart, sq), DomainError);

  Rng rng(67);
  for (int t = 0; t < 100; ++t) {
    const Polygon2D P = random_convex_polygon(rng, 8);
    const Polygon2D Q = random_convex_polygon(rng, 8);
    const Polygon2D fast = edge_sort_sum2d(P, Q);
    CHECK(is_strictly_convex(fast));
    CHECK(same_vertex_set(fast, hull2d(pairwise_sums(P, Q)), 1e-9));
  }
}

TEST_CASE("support_check") {
  const auto grid = make_grid(GridSpec::planar(37));
  const auto fine = make_grid(GridSpec::planar(91));
  const BodyInstance c1 = testing::unit_circle(vec({0.3, -0.2}));
  const BodyInstance c2 = testing::unit_circle(vec({4, 1}));
  const BoundaryCloud circles = boundary_cloud(MinkSumQuery{c1, c2, SumMode::contact}, grid);
  CHECK(support_check(circles, sample_surface(c1, fine), sample_surface(c2, fine)) <= 1e-12);

  Rng rng(71);
  for (int dim : {2, 3}) {
    for (SumMode mode : {SumMode::contact, SumMode::sum}) {
      RandomBodyOptions opts;
      opts.center_range = 3;
      const BodyInstance b1 = random_body(dim, rng, opts);
      const BodyInstance b2 = random_body(dim, rng, opts);
      const auto g = make_grid(testing::grid_of(dim, 50));
      const BoundaryCloud cloud = boundary_cloud(MinkSumQuery{b1, b2, mode}, g);
      CHECK(support_check(cloud, sample_surface(b1, g), sample_surface(b2, g)) <= 1e-9);
    }
  }
}

TEST_CASE("support_check detects a displaced point") {
  Rng rng(73);
  const BodyInstance b1 = random_body(2, rng);
  const BodyInstance b2 = random_body(2, rng);
  const auto grid = make_grid(GridSpec::planar(50));
  const auto dense = make_grid(GridSpec::planar(4000));
  BoundaryCloud cloud = boundary_cloud(MinkSumQuery{b1, b2, SumMode::contact}, grid);
  const std::size_t k = 17;
  Vec n = b1.gradient_map() * gradient_from_u(b1.shape(), u_from_phi(2, cloud.params[k]));
  n.normalize();
  cloud.points[k] -= 1e-3 * n;
  CHECK(support_check(cloud, sample_surface(b1, dense), sample_surface(b2, dense)) >= 9e-4);
}

TEST_CASE("kissing_errors") {
  const MinkSumQuery q{testing::unit_circle(vec({0, 0})), testing::unit_circle(vec({2, 2})), SumMode::contact};
  const KissingReport r = kissing_errors(q, boundary_cloud(q, make_grid(GridSpec::planar(100))));
  CHECK(r.n_points == 100);
  CHECK(r.max_implicit <= 1e-12);
  CHECK(r.max_gradient <= 1e-12);

  // A point moved off the contact space fails the implicit test.
  const KissingErrors off = kissing_point_errors(q, SphericalParam::planar(0), vec({2.5, 0}));
  CHECK(off.implicit == doctest::Approx(1.25));
}

TEST_CASE("sample_surface is world-frame") {
  Mat M(2, 2);
  M << 2, 0, 0, 1;
  const BodyInstance b(Superquadric::planar(1, 1, 1), M, vec({1, 1}));
  const auto pts = sample_surface(b, make_grid(GridSpec::planar(4)));
  CHECK((pts[2] - vec({3, 1})).norm() < 1e-15);
}

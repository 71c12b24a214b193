#pragma once

// Discretized baselines and verification oracles for closed-form clouds.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "minksum/minkowski.hpp"

namespace mink {

using Point2 = Eigen::Vector2d;

/// Convex polygon, vertices counter-clockwise.
struct Polygon2D {
  std::vector<Point2> vertices;

  std::size_t size() const { return vertices.size(); }
};

/// Cross product of (a − o) and (b − o); positive for a left turn.
double cross2(const Point2& o, const Point2& a, const Point2& b);

/// Every consecutive edge pair turns left by more than `tol`.
bool is_strictly_convex(const Polygon2D& poly, double tol = 1e-12);

/// All pairwise x − y (contact) or x + y (sum).
std::vector<Vec> definition_sum_samples(std::span<const Vec> cloud1, std::span<const Vec> cloud2,
                                        SumMode mode);

/// Andrew's monotone chain.  CCW, collinear vertices dropped (|cross| <= 1e-12).
/// Throws DegenerateHull when the input spans no area.
Polygon2D hull2d(std::span<const Point2> points);
Polygon2D hull2d(std::span<const Vec> points);

/// Minkowski sum of convex polygons by merging edges in slope order, O(|P|+|Q|).
/// A single-vertex operand acts as a translation.  Non-convex input throws.
Polygon2D edge_sort_sum2d(const Polygon2D& P, const Polygon2D& Q);

/// World-frame boundary samples of a body on the given parameter grid.
std::vector<Vec> sample_surface(const BodyInstance& body, std::span<const SphericalParam> grid);

/// One-sided extreme-point check.  For each cloud point, with n the world unit
/// normal of body 1 at its generating φ, returns the largest
///   max_{i,j} ⟨n, s_ij⟩ − ⟨n, x⟩
/// where s_ij ranges over the sampled sums of `samples1` (body 1, world) and
/// `samples2` (body 2, world) placed like the cloud.  The exact boundary point
/// is the support point in direction n, so a correct cloud yields <= round-off
/// regardless of sampling density.
double support_check(const BoundaryCloud& cloud, std::span<const Vec> samples1,
                     std::span<const Vec> samples2);

struct KissingErrors {
  double implicit = 0.0;  // |Ψ2(²x1) − 1|
  double gradient = 0.0;  // |m̂1·m̂2 + 1|
};

struct KissingReport {
  double mean_implicit = 0.0;
  double max_implicit = 0.0;
  double mean_gradient = 0.0;
  double max_gradient = 0.0;
  std::size_t n_points = 0;
};

/// Places body 2's center at `point` and measures how well x1(φ) is a kissing point.
KissingErrors kissing_point_errors(const MinkSumQuery& query, SphericalParam phi,
                                   const Vec& point);

/// Aggregate kissing errors over a contact-mode cloud.
KissingReport kissing_errors(const MinkSumQuery& query, const BoundaryCloud& cloud);

}  // namespace mink

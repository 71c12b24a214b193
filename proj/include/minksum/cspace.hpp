#pragma once

// Configuration-space obstacle slices for a rigid superquadric robot.
//
// For a fixed robot orientation R each obstacle inflates to the contact space
// ∂[B_obs ⊕ (−R·B_robot)], placed at the obstacle center: a robot centered on
// that boundary touches the obstacle without penetrating it.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "minksum/minkowski.hpp"

namespace mink {

struct Scene {
  Superquadric robot;
  std::vector<BodyInstance> obstacles;

  int dim() const { return robot.dim(); }
  /// Throws DomainError for an empty obstacle list or mixed dimensions.
  void validate() const;
};

/// Heading angle in 2D, unit quaternion in 3D.
struct Orientation {
  int dim = 2;
  double angle = 0.0;
  Eigen::Quaterniond quat = Eigen::Quaterniond::Identity();

  Mat rotation() const;
};

struct CSlice {
  Orientation orientation;
  std::vector<BoundaryCloud> clouds;     // one per obstacle, scene order
  std::vector<std::string> failures;     // per obstacle; empty string = ok
};

/// 2D: n headings −π + 2πk/n.  3D: n seeded uniform random unit quaternions.
std::vector<Orientation> sample_orientations(int dim, int n, std::uint64_t seed);

/// Slices for every orientation, each with one contact-mode cloud per obstacle.
/// Parallel over (orientation, obstacle) pairs; output order is deterministic.
std::vector<CSlice> cobstacle_slices(const Scene& scene, std::span<const Orientation> orientations,
                                     std::span<const SphericalParam> grid);

namespace serial {
std::vector<CSlice> cobstacle_slices(const Scene& scene, std::span<const Orientation> orientations,
                                     std::span<const SphericalParam> grid);
}  // namespace serial

}  // namespace mink

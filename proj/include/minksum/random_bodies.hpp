#pragma once

// Seeded generators for randomized bodies and poses.

#include <cstdint>
#include <random>

#include <Eigen/Geometry>

#include "minksum/geom_core.hpp"

namespace mink {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(Rng& rng);
double uniform(Rng& rng, double lo, double hi);

/// Uniform random rotation (Shoemake's subgroup algorithm).
Eigen::Quaterniond random_quaternion(Rng& rng);

struct RandomBodyOptions {
  double axis_min = 0.5;
  double axis_max = 2.0;
  double eps_min = 0.2;
  double eps_max = 1.8;
  double shear_max = 0.5;   // |s| of the shear factor
  bool transform = true;    // rotation·shear map; identity when false
  double center_range = 0.0;
};

Superquadric random_superquadric(int dim, Rng& rng, const RandomBodyOptions& opts = {});

/// Random body with M = rot·shear (2D: rot(α)·[[1,s],[0,1]]; 3D: R·upper unit-triangular).
BodyInstance random_body(int dim, Rng& rng, const RandomBodyOptions& opts = {});

/// Shear matrix: identity plus `s` entries above the diagonal.
Mat shear_matrix(int dim, double s);

}  // namespace mink

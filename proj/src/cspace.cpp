#include "minksum/cspace.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include "minksum/random_bodies.hpp"

namespace mink {

namespace {

template <bool Parallel>
std::vector<CSlice> run_slices(const Scene& scene, std::span<const Orientation> orientations,
                               std::span<const SphericalParam> grid) {
  scene.validate();
  const std::size_t n_obst = scene.obstacles.size();
  std::vector<CSlice> slices(orientations.size());
  std::vector<Mat> rotations(orientations.size());
  for (std::size_t o = 0; o < orientations.size(); ++o) {
    if (orientations[o].dim != scene.dim()) {
      throw DomainError("cobstacle_slices: orientation dimension does not match the scene");
    }
    slices[o].orientation = orientations[o];
    slices[o].clouds.reserve(n_obst);
    slices[o].failures.resize(n_obst);
    rotations[o] = orientations[o].rotation();
  }

  const auto total = static_cast<std::ptrdiff_t>(orientations.size() * n_obst);
  std::vector<std::optional<BoundaryCloud>> clouds(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic, 4) if (Parallel)
  for (std::ptrdiff_t k = 0; k < total; ++k) {
    const std::size_t o = static_cast<std::size_t>(k) / n_obst;
    const std::size_t i = static_cast<std::size_t>(k) % n_obst;
    const BodyInstance robot(scene.robot, rotations[o], Vec::Zero(scene.dim()));
    const MinkSumQuery query{scene.obstacles[i], robot, SumMode::contact};
    try {
      clouds[k] = serial::boundary_cloud(query, grid);
    } catch (const std::exception& e) {
      clouds[k] = BoundaryCloud{query, {}, {}};
      slices[o].failures[i] = e.what();
    }
  }
  for (std::ptrdiff_t k = 0; k < total; ++k) {
    slices[static_cast<std::size_t>(k) / n_obst].clouds.push_back(std::move(*clouds[k]));
  }
  return slices;
}

}  // namespace

void Scene::validate() const {
  if (obstacles.empty()) throw DomainError("scene: no obstacles");
  for (const BodyInstance& b : obstacles) {
    if (b.dim() != robot.dim()) throw DomainError("scene: obstacle dimension differs from robot");
  }
}

Mat Orientation::rotation() const {
  if (dim == 2) return rotation2d(angle);
  return Mat(quat.normalized().toRotationMatrix());
}

std::vector<Orientation> sample_orientations(int dim, int n, std::uint64_t seed) {
  if (n < 1) throw DomainError("sample_orientations: n must be >= 1");
  std::vector<Orientation> out;
  out.reserve(static_cast<std::size_t>(n));
  if (dim == 2) {
    for (int k = 0; k < n; ++k) {
      out.push_back({2, -std::numbers::pi + 2.0 * std::numbers::pi * k / n, {}});
    }
    return out;
  }
  if (dim != 3) throw DomainError("sample_orientations: dimension must be 2 or 3");
  Rng rng(seed);
  for (int k = 0; k < n; ++k) out.push_back({3, 0.0, random_quaternion(rng)});
  return out;
}

std::vector<CSlice> cobstacle_slices(const Scene& scene, std::span<const Orientation> orientations,
                                     std::span<const SphericalParam> grid) {
  return run_slices<true>(scene, orientations, grid);
}

namespace serial {
std::vector<CSlice> cobstacle_slices(const Scene& scene, std::span<const Orientation> orientations,
                                     std::span<const SphericalParam> grid) {
  return run_slices<false>(scene, orientations, grid);
}
}  // namespace serial

}  // namespace mink

// Serial reference vs OpenMP kernels.  Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "minksum/cspace.hpp"
#include "minksum/random_bodies.hpp"

namespace {

using namespace mink;

MinkSumQuery random_query(int dim) {
  Rng rng(7);
  BodyInstance b1 = random_body(dim, rng);
  BodyInstance b2 = random_body(dim, rng);
  return {b1, b2, SumMode::contact};
}

GridSpec grid_of(int dim, int n) { return dim == 2 ? GridSpec::planar(n) : GridSpec::spatial(n, n); }

template <bool Parallel>
void BM_BoundaryCloud(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const MinkSumQuery query = random_query(dim);
  const std::vector<SphericalParam> grid = make_grid(grid_of(dim, static_cast<int>(state.range(1))));
  for (auto _ : state) {
    BoundaryCloud c = Parallel ? boundary_cloud(query, grid) : serial::boundary_cloud(query, grid);
    benchmark::DoNotOptimize(c.points.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}

Scene random_scene(int n_obstacles) {
  Rng rng(11);
  RandomBodyOptions opts;
  opts.center_range = 20.0;
  Scene scene{random_superquadric(2, rng), {}};
  for (int i = 0; i < n_obstacles; ++i) scene.obstacles.push_back(random_body(2, rng, opts));
  return scene;
}

template <bool Parallel>
void BM_CObstacleSlices(benchmark::State& state) {
  const Scene scene = random_scene(static_cast<int>(state.range(0)));
  const std::vector<Orientation> orient = sample_orientations(2, static_cast<int>(state.range(0)), 3);
  const std::vector<SphericalParam> grid = make_grid(GridSpec::planar(50));
  for (auto _ : state) {
    auto slices = Parallel ? cobstacle_slices(scene, orient, grid) : serial::cobstacle_slices(scene, orient, grid);
    benchmark::DoNotOptimize(slices.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0) * 50);
}

}  // namespace

BENCHMARK(BM_BoundaryCloud<false>)->Args({2, 1000})->Args({2, 10000})->Args({3, 100});
BENCHMARK(BM_BoundaryCloud<true>)->Args({2, 1000})->Args({2, 10000})->Args({3, 100});
BENCHMARK(BM_CObstacleSlices<false>)->Arg(20)->Arg(50);
BENCHMARK(BM_CObstacleSlices<true>)->Arg(20)->Arg(50);

BENCHMARK_MAIN();

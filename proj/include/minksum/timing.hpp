#pragma once

// Grid-size sweeps timing the closed-form cloud against discretized baselines.

#include <cstddef>
#include <span>
#include <vector>

#include "minksum/minkowski.hpp"

namespace mink {

struct SweepRow {
  std::size_t n = 0;          // points per body / cloud size
  double closed_form = 0.0;   // seconds, serial boundary_cloud
  double hull = -1.0;         // seconds, hull of all pairwise sums (2D only)
  double edge_sort = -1.0;    // seconds, per-body hulls then edge merge (2D only)
};

/// Median of `reps` timed runs after one discarded warm-up.
template <typename F>
double median_seconds(F&& fn, int reps);

/// One row per size.  In 3D sizes are rounded to an n×n grid and baselines are skipped.
std::vector<SweepRow> timing_sweep(const MinkSumQuery& query, std::span<const std::size_t> sizes,
                                   int reps = 5);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Slope of log y against log x.
double loglog_exponent(std::span<const double> x, std::span<const double> y);

}  // namespace mink

#include <algorithm>
#include <chrono>

namespace mink {

template <typename F>
double median_seconds(F&& fn, int reps) {
  fn();
  std::vector<double> t;
  for (int r = 0; r < std::max(reps, 1); ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  std::nth_element(t.begin(), t.begin() + t.size() / 2, t.end());
  return t[t.size() / 2];
}

}  // namespace mink

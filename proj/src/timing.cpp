#include "minksum/timing.hpp"

#include <cmath>

#include "minksum/baselines.hpp"

namespace mink {

namespace {

volatile double sink = 0.0;

}  // namespace

std::vector<SweepRow> timing_sweep(const MinkSumQuery& query, std::span<const std::size_t> sizes,
                                   int reps) {
  const int dim = query.body1.dim();
  std::vector<SweepRow> rows;
  for (std::size_t n : sizes) {
    GridSpec spec;
    if (dim == 2) {
      spec = GridSpec::planar(static_cast<int>(n));
    } else {
      const int side = std::max(3, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n)))));
      spec = GridSpec::spatial(side, side);
    }
    const std::vector<SphericalParam> grid = make_grid(spec);
    SweepRow row;
    row.n = grid.size();
    row.closed_form = median_seconds(
        [&] { sink = sink + serial::boundary_cloud(query, grid).points.back()(0); }, reps);

    if (dim == 2) {
      const std::vector<Vec> s1 = sample_surface(query.body1, grid);
      const std::vector<Vec> s2 = sample_surface(query.body2, grid);
      row.hull = median_seconds(
          [&] {
            const std::vector<Vec> sums = definition_sum_samples(s1, s2, query.mode);
            sink = sink + static_cast<double>(hull2d(sums).size());
          },
          reps);
      row.edge_sort = median_seconds(
          [&] {
            Polygon2D p = hull2d(s1);
            Polygon2D q = hull2d(s2);
            if (query.mode == SumMode::contact) {
              for (Point2& v : q.vertices) v = -v;
            }
            sink = sink + static_cast<double>(edge_sort_sum2d(p, q).size());
          },
          reps);
    }
    rows.push_back(row);
  }
  return rows;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("fit_line: need >= 2 paired samples");
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit_line: x values are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

double loglog_exponent(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0) throw DomainError("loglog_exponent: values must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_line(lx, ly).slope;
}

}  // namespace mink

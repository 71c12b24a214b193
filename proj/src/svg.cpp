#include "minksum/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "minksum/baselines.hpp"
#include "minksum/io.hpp"

namespace mink {

namespace {

struct Frame {
  Eigen::Vector2d lo;
  double scale = 1.0;
  double pad = 0.0;
  int height = 0;

  Eigen::Vector2d map(const Vec& p) const {
    return {pad + (p(0) - lo(0)) * scale, height - pad - (p(1) - lo(1)) * scale};
  }
};

std::string closed_path(const std::vector<Vec>& pts, const Frame& f, const std::string& color,
                        double width) {
  std::string d;
  char buf[64];
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Eigen::Vector2d q = f.map(pts[i]);
    std::snprintf(buf, sizeof buf, "%s%.3f %.3f", i == 0 ? "M" : " L", q(0), q(1));
    d += buf;
  }
  d += " Z";
  std::snprintf(buf, sizeof buf, "%.2f", width);
  return "  <path d=\"" + d + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + buf +
         "\"/>\n";
}

BodyInstance moved_to(const BodyInstance& body, const Vec& center) {
  return BodyInstance(body.shape(), body.map(), center);
}

}  // namespace

std::string svg2d(const BodyInstance& body1, const BodyInstance& body2,
                  std::span<const std::vector<Vec>> boundaries, const SvgStyle& style) {
  if (body1.dim() != 2 || body2.dim() != 2) {
    throw DomainError("svg2d: unsupported dimension " + std::to_string(std::max(body1.dim(), body2.dim())));
  }
  if (style.outline_samples < 3) throw DomainError("svg2d: outline_samples must be >= 3");
  if (style.placements < 0) throw DomainError("svg2d: placements must be >= 0");

  const std::vector<SphericalParam> grid = make_grid(GridSpec::planar(style.outline_samples));
  std::vector<std::vector<Vec>> outlines1{sample_surface(body1, grid)};
  std::vector<std::vector<Vec>> outlines2;

  const std::vector<Vec>* along = nullptr;
  for (const auto& b : boundaries) {
    if (!b.empty()) {
      along = &b;
      break;
    }
  }
  if (style.placements == 0 || along == nullptr) {
    outlines2.push_back(sample_surface(body2, grid));
  } else {
    const std::size_t n = along->size();
    for (int k = 0; k < style.placements; ++k) {
      const std::size_t idx = static_cast<std::size_t>(k) * n / static_cast<std::size_t>(style.placements);
      outlines2.push_back(sample_surface(moved_to(body2, (*along)[idx]), grid));
    }
  }

  Eigen::Vector2d lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector2d hi = -lo;
  const auto extend = [&](const std::vector<Vec>& pts) {
    for (const Vec& p : pts) {
      lo = lo.cwiseMin(Eigen::Vector2d(p(0), p(1)));
      hi = hi.cwiseMax(Eigen::Vector2d(p(0), p(1)));
    }
  };
  for (const auto& o : outlines1) extend(o);
  for (const auto& o : outlines2) extend(o);
  for (const auto& b : boundaries) extend(b);

  Frame f;
  f.height = style.height;
  f.pad = 0.05 * std::min(style.width, style.height);
  f.lo = lo;
  const Eigen::Vector2d span = (hi - lo).cwiseMax(1e-12);
  f.scale = std::min((style.width - 2 * f.pad) / span(0), (style.height - 2 * f.pad) / span(1));

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(style.width) +
         "\" height=\"" + std::to_string(style.height) + "\" viewBox=\"0 0 " +
         std::to_string(style.width) + " " + std::to_string(style.height) + "\">\n";
  out += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& o : outlines1) out += closed_path(o, f, style.body1_color, 1.5);
  for (const auto& b : boundaries) {
    if (!b.empty()) out += closed_path(b, f, style.boundary_color, 1.5);
  }
  for (const auto& o : outlines2) out += closed_path(o, f, style.body2_color, 1.0);
  out += "</svg>\n";
  return out;
}

std::string svg2d(const BoundaryCloud& cloud, const SvgStyle& style) {
  const std::vector<Vec>* pts = &cloud.points;
  return svg2d(cloud.query.body1, cloud.query.body2, std::span<const std::vector<Vec>>(pts, 1), style);
}

void render_svg2d(const BoundaryCloud& cloud, const std::filesystem::path& path, const SvgStyle& style) {
  write_text(path, svg2d(cloud, style));
}

}  // namespace mink

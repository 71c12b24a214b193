#pragma once

// SVG figures of 2D scenes: body outlines, Minkowski boundaries and copies of
// body 2 placed along a boundary.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "minksum/minkowski.hpp"

namespace mink {

struct SvgStyle {
  int width = 640;
  int height = 640;
  int outline_samples = 240;
  /// Copies of body 2 centered on evenly spaced boundary points.  With zero
  /// copies body 2 is drawn once at its own center.
  int placements = 0;
  std::string body1_color = "#333333";
  std::string body2_color = "#1f5fbf";
  std::string boundary_color = "#c0392b";
};

/// Throws DomainError for anything but 2D input.
std::string svg2d(const BodyInstance& body1, const BodyInstance& body2,
                  std::span<const std::vector<Vec>> boundaries, const SvgStyle& style = {});
std::string svg2d(const BoundaryCloud& cloud, const SvgStyle& style = {});

void render_svg2d(const BoundaryCloud& cloud, const std::filesystem::path& path,
                  const SvgStyle& style = {});

}  // namespace mink

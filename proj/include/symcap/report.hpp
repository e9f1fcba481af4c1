#pragma once

#include <string>
#include <vector>

#include "symcap/geometry.hpp"

namespace symcap {

// Minimal SVG emitter for the moment-polytope figures: polygon outline,
// optional scatter of moment-map images, optional rectangle overlays.
// Coordinates are action coordinates, y axis up, `px_per_unit` pixels per
// symplectic-area unit.
struct SvgOverlayRect {
  double x0, x1, y0, y1;
  std::string color = "#c0392b";
};

std::string polytope_svg(const PolytopeModel& poly,
                         const std::vector<Vector2d>& scatter,
                         const std::vector<SvgOverlayRect>& rects,
                         double px_per_unit = 200.0);

std::string polytope_csv(const PolytopeModel& poly);

// (s,t)-plane figure: rectangles only (disk-to-rectangle families).
std::string rectangles_svg(const std::vector<SvgOverlayRect>& rects, double px_per_unit);

void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace symcap

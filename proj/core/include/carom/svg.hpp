#pragma once

#include <string>
#include <vector>

#include "carom/vec2.hpp"

namespace carom {

// Minimal SVG 1.1 canvas over world coordinates (y pointing up).  All
// coordinates are validated finite (SerializationError otherwise) and
// rendered with 9 significant digits.
class SvgCanvas {
 public:
  // World-space view box; pixels fixes the longer image side.
  SvgCanvas(double x_lo, double y_lo, double x_hi, double y_hi, int pixels = 720);

  void polyline(const std::vector<Vec2>& pts, const std::string& stroke,
                double width = 1.0, bool closed = false);
  void circle(const Vec2& center, double radius, const std::string& stroke,
              const std::string& fill = "none", double width = 1.0);
  void dot(const Vec2& center, double pixel_radius, const std::string& fill);
  void segment(const Vec2& a, const Vec2& b, const std::string& stroke, double width = 1.0);

  std::string str() const;
  void write_file(const std::string& path) const;

 private:
  double to_px(double world) const;
  double px_x(double x) const;
  double px_y(double y) const;

  double x_lo_, y_lo_, x_hi_, y_hi_;
  int width_px_, height_px_;
  double scale_;
  std::vector<std::string> elements_;
};

}  // namespace carom

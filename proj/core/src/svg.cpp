#include "carom/svg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "carom/errors.hpp"

namespace carom {

namespace {

std::string num(double v) {
  if (!std::isfinite(v)) throw SerializationError("non-finite coordinate in SVG payload");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

SvgCanvas::SvgCanvas(double x_lo, double y_lo, double x_hi, double y_hi, int pixels)
    : x_lo_(x_lo), y_lo_(y_lo), x_hi_(x_hi), y_hi_(y_hi) {
  if (!(x_hi > x_lo) || !(y_hi > y_lo)) throw SerializationError("empty SVG view box");
  if (!std::isfinite(x_lo) || !std::isfinite(y_lo) || !std::isfinite(x_hi) ||
      !std::isfinite(y_hi))
    throw SerializationError("non-finite SVG view box");
  const double w = x_hi - x_lo, h = y_hi - y_lo;
  if (w >= h) {
    width_px_ = pixels;
    scale_ = pixels / w;
    height_px_ = std::max(1, static_cast<int>(std::lround(h * scale_)));
  } else {
    height_px_ = pixels;
    scale_ = pixels / h;
    width_px_ = std::max(1, static_cast<int>(std::lround(w * scale_)));
  }
}

double SvgCanvas::to_px(double world) const { return world * scale_; }
double SvgCanvas::px_x(double x) const { return (x - x_lo_) * scale_; }
double SvgCanvas::px_y(double y) const { return (y_hi_ - y) * scale_; }

void SvgCanvas::polyline(const std::vector<Vec2>& pts, const std::string& stroke, double width,
                         bool closed) {
  if (pts.size() < 2) return;
  std::ostringstream e;
  e << (closed ? "<polygon" : "<polyline") << " points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) e << ' ';
    e << num(px_x(pts[i].x)) << ',' << num(px_y(pts[i].y));
  }
  e << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width) << "\"/>";
  elements_.push_back(e.str());
}

void SvgCanvas::circle(const Vec2& center, double radius, const std::string& stroke,
                       const std::string& fill, double width) {
  std::ostringstream e;
  e << "<circle cx=\"" << num(px_x(center.x)) << "\" cy=\"" << num(px_y(center.y)) << "\" r=\""
    << num(to_px(radius)) << "\" stroke=\"" << stroke << "\" fill=\"" << fill
    << "\" stroke-width=\"" << num(width) << "\"/>";
  elements_.push_back(e.str());
}

void SvgCanvas::dot(const Vec2& center, double pixel_radius, const std::string& fill) {
  std::ostringstream e;
  e << "<circle cx=\"" << num(px_x(center.x)) << "\" cy=\"" << num(px_y(center.y)) << "\" r=\""
    << num(pixel_radius) << "\" stroke=\"none\" fill=\"" << fill << "\"/>";
  elements_.push_back(e.str());
}

void SvgCanvas::segment(const Vec2& a, const Vec2& b, const std::string& stroke, double width) {
  std::ostringstream e;
  e << "<line x1=\"" << num(px_x(a.x)) << "\" y1=\"" << num(px_y(a.y)) << "\" x2=\""
    << num(px_x(b.x)) << "\" y2=\"" << num(px_y(b.y)) << "\" stroke=\"" << stroke
    << "\" stroke-width=\"" << num(width) << "\"/>";
  elements_.push_back(e.str());
}

std::string SvgCanvas::str() const {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width_px_
      << "\" height=\"" << height_px_ << "\" viewBox=\"0 0 " << width_px_ << ' ' << height_px_
      << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const std::string& e : elements_) out << e << '\n';
  out << "</svg>\n";
  return out.str();
}

void SvgCanvas::write_file(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw SerializationError("cannot open SVG output file: " + path);
  const std::string body = str();
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw SerializationError("failed writing SVG file: " + path);
}

}  // namespace carom

#include "kaze/draw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kaze {

namespace {

void plot(Raster8& img, long x, long y, const Rgb& color) {
  if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
  std::copy(color.begin(), color.end(), img.pixel(static_cast<int>(x), static_cast<int>(y)));
}

void draw_circle(Raster8& img, double cx, double cy, double r, const Rgb& color) {
  // Angular step small enough that consecutive samples are at most ~0.5 px apart.
  const int steps = std::max(16, static_cast<int>(std::ceil(4.0 * std::numbers::pi * r)));
  for (int i = 0; i < steps; ++i) {
    const double t = 2.0 * std::numbers::pi * i / steps;
    plot(img, std::lround(cx + r * std::cos(t)), std::lround(cy + r * std::sin(t)), color);
  }
}

void draw_segment(Raster8& img, double x0, double y0, double x1, double y1, const Rgb& color) {
  const int steps = std::max(1, static_cast<int>(std::ceil(2.0 * std::hypot(x1 - x0, y1 - y0))));
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    plot(img, std::lround(x0 + t * (x1 - x0)), std::lround(y0 + t * (y1 - y0)), color);
  }
}

}  // namespace

void draw_keypoints(Raster8& rgb, const std::vector<KeyPoint>& kps) {
  if (rgb.channels != 3) throw std::invalid_argument("draw_keypoints: raster must be RGB");
  for (const KeyPoint& kp : kps) {
    const double r = kp.sigma;
    draw_circle(rgb, kp.x, kp.y, r, kCircleColor);
    draw_segment(rgb, kp.x, kp.y, kp.x + r * std::cos(kp.angle), kp.y + r * std::sin(kp.angle), kTickColor);
  }
}

}  // namespace kaze

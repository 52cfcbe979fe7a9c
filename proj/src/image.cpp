/**
 * @file image.cpp
 * @brief Separable filtering with Neumann-type borders.
 */

#include "kaze/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace kaze {

GrayImage::GrayImage(int width, int height, double fill) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("GrayImage: dimensions must be positive");
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("GrayImage: dimensions must be positive");
  if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw std::invalid_argument("GrayImage: data length does not match width * height");
  if (!std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); }))
    throw std::invalid_argument("GrayImage: non-finite pixel value");
}

double GrayImage::clamped(int x, int y) const {
  return at(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
}

int border_index(int i, int n, BorderPolicy border) {
  if (i >= 0 && i < n) return i;
  if (border == BorderPolicy::kReplicate) return std::clamp(i, 0, n - 1);
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

void validate(const SeparableKernel& kernel) {
  auto ok = [](const std::vector<double>& taps) { return taps.size() >= 3 && taps.size() % 2 == 1; };
  if (!ok(kernel.row_taps) || !ok(kernel.col_taps))
    throw std::invalid_argument("SeparableKernel: tap arrays must have odd length >= 3");
  if (kernel.tap_spacing < 1) throw std::invalid_argument("SeparableKernel: tap_spacing must be >= 1");
}

std::vector<double> gaussian_taps(double sigma, int radius) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_taps: sigma must be positive");
  if (radius < 0) radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  radius = std::max(radius, 1);

  std::vector<double> taps(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i)
    taps[i + radius] = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
  const double total = std::accumulate(taps.begin(), taps.end(), 0.0);
  for (double& t : taps) t /= total;
  return taps;
}

SeparableKernel gaussian_kernel(double sigma, int radius) {
  auto taps = gaussian_taps(sigma, radius);
  return {taps, taps, 1};
}

namespace {

void row_pass(const GrayImage& src, GrayImage& dst, const std::vector<double>& taps, int spacing,
              BorderPolicy border) {
  const int w = src.width();
  const int h = src.height();
  const int r = static_cast<int>(taps.size() / 2);
  const int reach = r * spacing;

#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const auto in = src.row(y);
    auto out = dst.row(y);
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      if (x - reach >= 0 && x + reach < w) {
        const double* base = in.data() + x - reach;
        for (std::size_t t = 0; t < taps.size(); ++t) acc += taps[t] * base[t * spacing];
      } else {
        for (int t = -r; t <= r; ++t) acc += taps[t + r] * in[border_index(x + t * spacing, w, border)];
      }
      out[x] = acc;
    }
  }
}

void col_pass(const GrayImage& src, GrayImage& dst, const std::vector<double>& taps, int spacing,
              BorderPolicy border) {
  const int w = src.width();
  const int h = src.height();
  const int r = static_cast<int>(taps.size() / 2);

#pragma omp parallel
  {
    std::vector<double> acc(w);
#pragma omp for schedule(static)
    for (int y = 0; y < h; ++y) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int t = -r; t <= r; ++t) {
        const double tap = taps[t + r];
        if (tap == 0.0) continue;
        const auto in = src.row(border_index(y + t * spacing, h, border));
        for (int x = 0; x < w; ++x) acc[x] += tap * in[x];
      }
      auto out = dst.row(y);
      for (int x = 0; x < w; ++x) out[x] = acc[x];
    }
  }
}

}  // namespace

GrayImage convolve_separable(const GrayImage& img, const SeparableKernel& kernel, BorderPolicy border) {
  if (img.empty()) throw std::invalid_argument("convolve_separable: empty image");
  validate(kernel);

  GrayImage tmp(img.width(), img.height());
  GrayImage out(img.width(), img.height());
  row_pass(img, tmp, kernel.row_taps, kernel.tap_spacing, border);
  col_pass(tmp, out, kernel.col_taps, kernel.tap_spacing, border);
  return out;
}

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
  return convolve_separable(img, gaussian_kernel(sigma));
}

SeparableKernel scharr_kernel(int dx, int dy, int step) {
  if (step < 1) throw std::invalid_argument("scharr_derivative: step must be >= 1, got " + std::to_string(step));
  if (!((dx == 1 && dy == 0) || (dx == 0 && dy == 1)))
    throw std::invalid_argument("scharr_derivative: exactly one of dx, dy must be 1");

  const double half = 1.0 / (2.0 * step);
  const std::vector<double> deriv{-half, 0.0, half};
  const std::vector<double> smooth{3.0 / 16.0, 10.0 / 16.0, 3.0 / 16.0};
  return dx == 1 ? SeparableKernel{deriv, smooth, step} : SeparableKernel{smooth, deriv, step};
}

GrayImage scharr_derivative(const GrayImage& img, int dx, int dy, int step) {
  return convolve_separable(img, scharr_kernel(dx, dy, step));
}

double sum(const GrayImage& img) {
  double total = 0.0;
  for (double v : img.pixels()) total += v;
  return total;
}

double mean(const GrayImage& img) {
  if (img.empty()) throw std::invalid_argument("mean: empty image");
  return sum(img) / static_cast<double>(img.size());
}

}  // namespace kaze

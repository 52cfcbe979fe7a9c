/**
 * @file descriptor.cpp
 * @brief Orientation assignment and M-SURF description.
 */

#include "kaze/descriptor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace kaze {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a >= kTwoPi ? 0.0 : a;
}

// Gaussian weights depend only on the sample's place in the grid.
const std::array<double, 13 * 13>& orientation_weights() {
  static const auto table = [] {
    constexpr double kWeightSigma = 2.5;  // in units of sigma
    std::array<double, 13 * 13> t{};
    for (int v = -6; v <= 6; ++v)
      for (int u = -6; u <= 6; ++u)
        t[(v + 6) * 13 + u + 6] = std::exp(-(u * u + v * v) / (2.0 * kWeightSigma * kWeightSigma));
    return t;
  }();
  return table;
}

const std::array<double, 9 * 9>& subregion_weights() {
  static const auto table = [] {
    constexpr double kSubregionSigma = 2.5;  // in sample units (sigma)
    std::array<double, 9 * 9> t{};
    for (int j = 0; j < 9; ++j)
      for (int i = 0; i < 9; ++i) {
        const double du = i - 4.0, dv = j - 4.0;
        t[j * 9 + i] = std::exp(-(du * du + dv * dv) / (2.0 * kSubregionSigma * kSubregionSigma));
      }
    return t;
  }();
  return table;
}

void require_derivatives(const EvolutionLevel& level) {
  if (level.Lx.empty() || level.Ly.empty())
    throw std::invalid_argument("descriptor: level derivatives not computed (run the detector first)");
}

}  // namespace

double sample_bilinear(const GrayImage& img, double x, double y) {
  const double fx0 = std::floor(x);
  const double fy0 = std::floor(y);
  const auto x0 = static_cast<int>(fx0);
  const auto y0 = static_cast<int>(fy0);
  const double fx = x - fx0;
  const double fy = y - fy0;
  const double v = (1.0 - fx) * (1.0 - fy) * img.clamped(x0, y0) + fx * (1.0 - fy) * img.clamped(x0 + 1, y0) +
                   (1.0 - fx) * fy * img.clamped(x0, y0 + 1) + fx * fy * img.clamped(x0 + 1, y0 + 1);
  return v;
}

Orientation dominant_orientation(const EvolutionLevel& level, const KeyPoint& kp) {
  require_derivatives(level);

  struct Sample {
    double gx, gy, angle;
  };
  std::vector<Sample> samples;
  samples.reserve(113);

  const double s = kp.sigma;
  const auto& weights = orientation_weights();
  for (int v = -6; v <= 6; ++v) {
    for (int u = -6; u <= 6; ++u) {
      if (u * u + v * v > 36) continue;
      const double px = kp.x + u * s;
      const double py = kp.y + v * s;
      const double w = weights[(v + 6) * 13 + u + 6];
      const double gx = w * sample_bilinear(level.Lx, px, py);
      const double gy = w * sample_bilinear(level.Ly, px, py);
      samples.push_back({gx, gy, wrap_angle(std::atan2(gy, gx))});
    }
  }

  double best = 0.0;
  double best_x = 0.0, best_y = 0.0;
  for (int k = 0; k < kOrientationWindows; ++k) {
    const double centre = kTwoPi * k / kOrientationWindows;
    double sx = 0.0, sy = 0.0;
    for (const Sample& smp : samples) {
      double d = std::abs(smp.angle - centre);
      if (d > std::numbers::pi) d = kTwoPi - d;
      if (d <= std::numbers::pi / 6.0) {
        sx += smp.gx;
        sy += smp.gy;
      }
    }
    const double len = sx * sx + sy * sy;
    if (len > best) {
      best = len;
      best_x = sx;
      best_y = sy;
    }
  }

  if (best == 0.0) return {0.0, true};
  return {wrap_angle(std::atan2(best_y, best_x)), false};
}

Descriptor msurf_descriptor(const EvolutionLevel& level, const KeyPoint& kp) {
  require_derivatives(level);

  constexpr int kSubregions = 4;
  constexpr int kSubregionSamples = 9;
  constexpr int kStride = 5;
  constexpr int kFirstSample = -12;      // sample k sits at offset k + 0.5
  constexpr double kMaskSigma = 1.5;       // in subregion cells

  const double s = kp.sigma;
  const double co = std::cos(kp.angle);
  const double si = std::sin(kp.angle);
  const auto& weights = subregion_weights();

  Descriptor desc;
  std::array<double, kDescriptorSize> acc{};
  std::size_t out = 0;

  for (int b = 0; b < kSubregions; ++b) {
    for (int a = 0; a < kSubregions; ++a) {
      const int u0 = kFirstSample + kStride * a;
      const int v0 = kFirstSample + kStride * b;

      double dx = 0.0, dy = 0.0, mdx = 0.0, mdy = 0.0;
      for (int j = 0; j < kSubregionSamples; ++j) {
        const double v = v0 + j + 0.5;
        for (int i = 0; i < kSubregionSamples; ++i) {
          const double u = u0 + i + 0.5;
          const double px = kp.x + s * (u * co - v * si);
          const double py = kp.y + s * (u * si + v * co);
          const double lx = sample_bilinear(level.Lx, px, py);
          const double ly = sample_bilinear(level.Ly, px, py);
          const double w = weights[j * kSubregionSamples + i];
          const double ru = w * (lx * co + ly * si);
          const double rv = w * (-lx * si + ly * co);
          dx += ru;
          dy += rv;
          mdx += std::abs(ru);
          mdy += std::abs(rv);
        }
      }

      const double ma = a - 0.5 * (kSubregions - 1);
      const double mb = b - 0.5 * (kSubregions - 1);
      const double mask = std::exp(-(ma * ma + mb * mb) / (2.0 * kMaskSigma * kMaskSigma));
      acc[out++] = dx * mask;
      acc[out++] = dy * mask;
      acc[out++] = mdx * mask;
      acc[out++] = mdy * mask;
    }
  }

  double norm = 0.0;
  for (double x : acc) norm += x * x;
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) {
    desc.degenerate = true;
    return desc;
  }
  for (std::size_t i = 0; i < kDescriptorSize; ++i) desc.values[i] = static_cast<float>(acc[i] / norm);
  return desc;
}

std::vector<Descriptor> describe(const std::vector<EvolutionLevel>& levels, std::vector<KeyPoint>& kps) {
  for (const KeyPoint& kp : kps) {
    if (kp.level_index < 0 || kp.level_index >= static_cast<int>(levels.size()))
      throw std::invalid_argument("describe: keypoint level out of range");
    require_derivatives(levels[kp.level_index]);
  }

  std::vector<Descriptor> out(kps.size());
  const auto n = static_cast<std::ptrdiff_t>(kps.size());

  // Visit by level and row so consecutive keypoints read nearby memory.
  std::vector<std::size_t> order(kps.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&kps](std::size_t a, std::size_t b) {
    return std::tie(kps[a].level_index, kps[a].y, kps[a].x) < std::tie(kps[b].level_index, kps[b].y, kps[b].x);
  });

#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    KeyPoint& kp = kps[i];
    const auto& level = levels[kp.level_index];
    const Orientation o = dominant_orientation(level, kp);
    kp.angle = o.angle;
    out[i] = msurf_descriptor(level, kp);
    out[i].keypoint_ref = static_cast<std::size_t>(i);
    if (o.degenerate) {
      out[i].values.fill(0.0f);
      out[i].degenerate = true;
    }
  }
  return out;
}

}  // namespace kaze

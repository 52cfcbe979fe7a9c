/**
 * @file detector.cpp
 * @brief Hessian-determinant keypoint detection in the nonlinear scale space.
 */

#include "kaze/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kaze {

int derivative_step(double sigma, int width, int height) {
  const int cap = std::max(1, std::min(width, height) / 4);
  return std::clamp(static_cast<int>(std::lround(sigma)), 1, cap);
}

void hessian_response(EvolutionLevel& level, int step) {
  if (level.Lt.empty()) throw std::invalid_argument("hessian_response: level has no evolution image");
  if (step < 1) throw std::invalid_argument("hessian_response: step must be >= 1");

  level.derivative_step = step;
  level.Lx = scharr_derivative(level.Lt, 1, 0, step);
  level.Ly = scharr_derivative(level.Lt, 0, 1, step);
  level.Lxx = scharr_derivative(level.Lx, 1, 0, step);
  level.Lyy = scharr_derivative(level.Ly, 0, 1, step);
  level.Lxy = scharr_derivative(level.Lx, 0, 1, step);

  const double norm = std::pow(static_cast<double>(step), 4);
  level.Ldet = GrayImage(level.Lt.width(), level.Lt.height());
  const auto xx = level.Lxx.pixels();
  const auto yy = level.Lyy.pixels();
  const auto xy = level.Lxy.pixels();
  auto det = level.Ldet.pixels();
  for (std::size_t i = 0; i < det.size(); ++i) det[i] = norm * (xx[i] * yy[i] - xy[i] * xy[i]);
}

void compute_responses(std::vector<EvolutionLevel>& levels) {
  const auto n = static_cast<int>(levels.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    auto& level = levels[i];
    hessian_response(level, derivative_step(level.sigma, level.Lt.width(), level.Lt.height()));
  }
}

int comparison_window(double sigma, ExtremaWindow mode) {
  if (mode == ExtremaWindow::kApprox3x3) return 3;
  int side = static_cast<int>(std::lround(sigma));
  if (side % 2 == 0) ++side;
  return std::max(side, 3);
}

namespace {

bool exceeds_window(const GrayImage& img, double value, int cx, int cy, int half) {
  const int x0 = std::max(0, cx - half);
  const int x1 = std::min(img.width() - 1, cx + half);
  const int y0 = std::max(0, cy - half);
  const int y1 = std::min(img.height() - 1, cy + half);
  for (int y = y0; y <= y1; ++y) {
    const auto row = img.row(y);
    for (int x = x0; x <= x1; ++x)
      if (!(value > row[x])) return false;
  }
  return true;
}

bool spatial_maximum(const GrayImage& det, double value, int x, int y) {
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx)
      if ((dx || dy) && !(value > det.at(x + dx, y + dy))) return false;
  return true;
}

}  // namespace

std::vector<KeyPoint> find_extrema(const std::vector<EvolutionLevel>& levels, const ScaleSpaceOptions& opts) {
  if (levels.size() < 3) throw std::invalid_argument("find_extrema: at least 3 levels required");
  for (const auto& level : levels)
    if (level.Ldet.empty()) throw std::invalid_argument("find_extrema: responses not computed");

  const auto n = static_cast<int>(levels.size());
  std::vector<std::vector<KeyPoint>> per_level(levels.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 1; i < n - 1; ++i) {
    const auto& level = levels[i];
    const GrayImage& det = level.Ldet;
    const int half = comparison_window(level.sigma, opts.extrema_window) / 2;

    for (int y = 1; y < det.height() - 1; ++y) {
      for (int x = 1; x < det.width() - 1; ++x) {
        const double value = det.at(x, y);
        if (!(value > opts.detector_threshold)) continue;
        if (!spatial_maximum(det, value, x, y)) continue;
        if (!exceeds_window(levels[i - 1].Ldet, value, x, y, half)) continue;
        if (!exceeds_window(levels[i + 1].Ldet, value, x, y, half)) continue;

        KeyPoint kp;
        kp.x = x;
        kp.y = y;
        kp.sigma = level.sigma;
        kp.response = value;
        kp.level_index = level.index;
        kp.octave = level.octave;
        kp.sublevel = level.sublevel;
        per_level[i].push_back(kp);
      }
    }
  }

  std::vector<KeyPoint> out;
  for (auto& bucket : per_level) out.insert(out.end(), bucket.begin(), bucket.end());
  return out;
}

ResponsePatch response_patch(const GrayImage& det, PixelPos p) {
  if (p.x < 1 || p.y < 1 || p.x > det.width() - 2 || p.y > det.height() - 2)
    throw std::invalid_argument("response_patch: position lacks a full 3x3 neighbourhood");
  ResponsePatch patch{};
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) patch[(dy + 1) * 3 + (dx + 1)] = det.at(p.x + dx, p.y + dy);
  return patch;
}

namespace {

ResponseHessian patch_hessian(const ResponsePatch& v) {
  return {v[5] + v[3] - 2.0 * v[4], v[7] + v[1] - 2.0 * v[4], 0.25 * (v[8] + v[0] - v[2] - v[6])};
}

}  // namespace

ResponseHessian response_hessian(const GrayImage& det, PixelPos p) { return patch_hessian(response_patch(det, p)); }

bool passes_edge_test(const ResponseHessian& h, double edge_ratio) {
  const double det = h.dxx * h.dyy - h.dxy * h.dxy;
  if (!(det > 0.0)) return false;
  const double trace = h.dxx + h.dyy;
  const double bound = (edge_ratio + 1.0) * (edge_ratio + 1.0) / edge_ratio;
  return trace * trace / det < bound;
}

bool passes_edge_test(const EvolutionLevel& level, PixelPos p, double edge_ratio) {
  return passes_edge_test(response_hessian(level.Ldet, p), edge_ratio);
}

std::optional<SubpixelOffset> solve_subpixel_offset(const ResponsePatch& patch) {
  const double gx = 0.5 * (patch[5] - patch[3]);
  const double gy = 0.5 * (patch[7] - patch[1]);
  const ResponseHessian h = patch_hessian(patch);

  const double det = h.dxx * h.dyy - h.dxy * h.dxy;
  if (std::abs(det) < 1e-12) return std::nullopt;

  // [dxx dxy; dxy dyy] * offset = -grad
  const double ox = -(h.dyy * gx - h.dxy * gy) / det;
  const double oy = -(h.dxx * gy - h.dxy * gx) / det;
  if (std::abs(ox) > 1.0 || std::abs(oy) > 1.0) return std::nullopt;
  return SubpixelOffset{ox, oy};
}

std::optional<SubpixelOffset> refine_subpixel(const GrayImage& det, PixelPos p) {
  return solve_subpixel_offset(response_patch(det, p));
}

std::vector<KeyPoint> detect(std::vector<EvolutionLevel>& levels, const ScaleSpaceOptions& opts) {
  validate(opts);
  compute_responses(levels);

  std::vector<KeyPoint> out;
  for (KeyPoint kp : find_extrema(levels, opts)) {
    const auto& level = levels[kp.level_index];
    const PixelPos p{static_cast<int>(kp.x), static_cast<int>(kp.y)};
    if (!passes_edge_test(level, p, opts.edge_ratio)) continue;
    const auto offset = refine_subpixel(level.Ldet, p);
    if (!offset) continue;
    kp.x += offset->dx;
    kp.y += offset->dy;
    out.push_back(kp);
  }

  std::sort(out.begin(), out.end(), [](const KeyPoint& a, const KeyPoint& b) {
    if (a.response != b.response) return a.response > b.response;
    if (a.level_index != b.level_index) return a.level_index < b.level_index;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
  return out;
}

}  // namespace kaze

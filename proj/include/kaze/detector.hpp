/**
 * @file detector.hpp
 * @brief Scale-normalized Hessian-determinant detector: response maps, scale
 * space extrema, edge rejection and quadratic sub-pixel refinement.
 */

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "kaze/image.hpp"
#include "kaze/scale_space.hpp"

namespace kaze {

struct KeyPoint {
  double x = 0.0;  ///< sub-pixel column, full input resolution
  double y = 0.0;  ///< sub-pixel row
  double sigma = 0.0;
  double response = 0.0;
  int level_index = 0;
  int octave = 0;
  int sublevel = 0;
  double angle = 0.0;  ///< radians in [0, 2pi), assigned by the descriptor stage

  friend bool operator==(const KeyPoint&, const KeyPoint&) = default;
};

struct PixelPos {
  int x = 0;
  int y = 0;
  friend bool operator==(const PixelPos&, const PixelPos&) = default;
};

/// Integer derivative step for a level: max(1, round(sigma)), capped at min(W, H) / 4.
int derivative_step(double sigma, int width, int height);

/// Fills Lx, Ly, Lxx, Lyy, Lxy (Scharr, dilated by step) from level.Lt and
/// Ldet = step^4 (Lxx Lyy - Lxy^2).
void hessian_response(EvolutionLevel& level, int step);

/// hessian_response for every level, each with its own derivative_step.
void compute_responses(std::vector<EvolutionLevel>& levels);

/// Side of the square window searched on the adjacent levels.
/// kExactSigma: round(sigma) forced odd and >= 3. kApprox3x3: 3.
int comparison_window(double sigma, ExtremaWindow mode);

/// Candidates at integer positions (x, y, level fields and response set).
/// First and last levels never produce candidates. Output is ordered by level, then row-major.
std::vector<KeyPoint> find_extrema(const std::vector<EvolutionLevel>& levels, const ScaleSpaceOptions& opts);

/// Second derivatives of the response surface from its 3x3 neighbourhood.
struct ResponseHessian {
  double dxx = 0.0;
  double dyy = 0.0;
  double dxy = 0.0;
};

ResponseHessian response_hessian(const GrayImage& det, PixelPos p);

/// Keep iff Det(H) > 0 and Tr(H)^2 / Det(H) < (r + 1)^2 / r.
bool passes_edge_test(const ResponseHessian& h, double edge_ratio);
bool passes_edge_test(const EvolutionLevel& level, PixelPos p, double edge_ratio);

struct SubpixelOffset {
  double dx = 0.0;
  double dy = 0.0;
};

/// 3x3 patch, row-major, centre at index 4.
using ResponsePatch = std::array<double, 9>;

ResponsePatch response_patch(const GrayImage& det, PixelPos p);

/// Quadratic fit from central differences, offset = -H^-1 grad.
/// nullopt when H is singular or either offset component exceeds 1 pixel.
std::optional<SubpixelOffset> solve_subpixel_offset(const ResponsePatch& patch);
std::optional<SubpixelOffset> refine_subpixel(const GrayImage& det, PixelPos p);

/// Full detector: responses, extrema, edge test, sub-pixel fit.
/// Sorted by descending response (ties by level, y, x).
std::vector<KeyPoint> detect(std::vector<EvolutionLevel>& levels, const ScaleSpaceOptions& opts);

}  // namespace kaze

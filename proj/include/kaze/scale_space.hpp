/**
 * @file scale_space.hpp
 * @brief Nonlinear scale space built with Perona-Malik diffusion and
 * Fast Explicit Diffusion (FED) cycles. Every level keeps full resolution.
 */

#pragma once

#include <vector>

#include "kaze/image.hpp"

namespace kaze {

enum class Diffusivity { kG1, kG2 };

enum class ExtremaWindow {
  kExactSigma,  ///< neighbour levels compared over a round(sigma) odd window
  kApprox3x3,   ///< neighbour levels compared over 3x3 only
};

/// Pipeline parameters. Scale-space fields come first, detector fields after.
struct ScaleSpaceOptions {
  int num_octaves = 4;
  int num_sublevels = 4;
  double base_sigma = 1.6;
  double tau_max = 0.25;
  Diffusivity diffusivity = Diffusivity::kG2;
  double k_percentile = 0.7;
  int k_histogram_bins = 300;
  double detector_threshold = 1e-3;
  double edge_ratio = 10.0;
  ExtremaWindow extrema_window = ExtremaWindow::kExactSigma;
};

/// Throws std::invalid_argument if any option is out of range.
void validate(const ScaleSpaceOptions& opts);

/// One entry of the evolution schedule.
struct ScaleStep {
  int octave = 0;
  int sublevel = 0;
  double sigma = 0.0;  ///< pixels
  double time = 0.0;   ///< sigma^2 / 2
};

/// One level of the pyramid. Lt and Lsmooth are produced by build_scale_space;
/// the derivative and response images are filled by hessian_response.
struct EvolutionLevel {
  int index = 0;
  int octave = 0;
  int sublevel = 0;
  double sigma = 0.0;
  double time = 0.0;
  GrayImage Lt;
  GrayImage Lsmooth;
  GrayImage Lx, Ly;
  GrayImage Lxx, Lyy, Lxy;
  GrayImage Ldet;
  int derivative_step = 0;  ///< set by hessian_response
};

/// sigma_i = base_sigma * 2^(o + s/S), t_i = sigma_i^2 / 2, ordered by i = o*S + s.
/// The unbounded schedule; see truncated_schedule for the image-dependent cut.
std::vector<ScaleStep> evolution_schedule(const ScaleSpaceOptions& opts);

/// Drops entries whose sigma exceeds min(width, height) / 2.
std::vector<ScaleStep> truncated_schedule(const ScaleSpaceOptions& opts, int width, int height);

struct ContrastEstimate {
  double k = 0.0;
  bool degenerate = false;  ///< no nonzero gradient: k fell back to kFallbackContrast
};

inline constexpr double kFallbackContrast = 0.03;

/// Contrast factor k: the k_percentile quantile of the gradient-magnitude
/// histogram of an already smoothed image (k_histogram_bins bins over (0, max]).
/// The returned k is the upper edge of the bin that crosses the quantile.
ContrastEstimate estimate_contrast_k(const GrayImage& smoothed, const ScaleSpaceOptions& opts);

/// Perona-Malik conductivity g(|grad|^2 / k^2), values in (0, 1].
GrayImage conductivity(const GrayImage& Lx, const GrayImage& Ly, double k, Diffusivity which);

/// FED step sizes tau_j = tau_max / (2 cos^2(pi (2j+1) / (4n+2))), j = 0..n-1.
std::vector<double> fed_tau_steps(int n, double tau_max);

struct FedCycle {
  int n = 0;
  std::vector<double> taus;  ///< rescaled steps, sum to total_time
  double total_time = 0.0;
};

/// Smallest n with tau_max n(n+1)/3 >= total_time, steps rescaled to sum to total_time.
FedCycle fed_cycle(double total_time, double tau_max);

/// Explicit update L + tau div(c grad L) on the 4-neighbour stencil with
/// half-sum edge conductivities and zero flux across the image border.
GrayImage fed_step(const GrayImage& L, const GrayImage& c, double tau);

/// In-place variant writing into out (must have L's shape). out may not alias L.
void fed_step_into(const GrayImage& L, const GrayImage& c, double tau, GrayImage& out);

/// Builds the full-resolution nonlinear pyramid. Requires min(W, H) >= 32.
/// If contrast is non-null it receives the k estimate used.
std::vector<EvolutionLevel> build_scale_space(const GrayImage& img, const ScaleSpaceOptions& opts,
                                              ContrastEstimate* contrast = nullptr);

}  // namespace kaze

/**
 * @file image.hpp
 * @brief Single-channel double raster and the separable filters shared by
 * every stage of the pipeline (Gaussian smoothing, dilated Scharr derivatives).
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kaze {

/// Row-major single-channel double image.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, double fill = 0.0);
  GrayImage(int width, int height, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& at(int x, int y) { return data_[index(x, y)]; }
  double at(int x, int y) const { return data_[index(x, y)]; }

  /// Replicate-border read: coordinates are clamped into the image.
  double clamped(int x, int y) const;

  std::span<double> row(int y) { return {data_.data() + index(0, y), static_cast<std::size_t>(width_)}; }
  std::span<const double> row(int y) const {
    return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
  }

  std::span<double> pixels() { return data_; }
  std::span<const double> pixels() const { return data_; }

  bool same_shape(const GrayImage& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Out-of-range handling for convolutions.
/// kSymmetric mirrors about the half-pixel boundary (...cba|abc...), a discrete
/// Neumann condition under which symmetric smoothing kernels conserve the image sum.
/// kReplicate clamps to the edge pixel.
enum class BorderPolicy { kSymmetric, kReplicate };

/// Maps an out-of-range coordinate into [0, n) under the given policy.
int border_index(int i, int n, BorderPolicy border);

/// Row and column taps applied at offsets that are multiples of tap_spacing.
/// Tap arrays are odd-length and centered.
struct SeparableKernel {
  std::vector<double> row_taps;
  std::vector<double> col_taps;
  int tap_spacing = 1;
};

/// Checks the SeparableKernel invariants (odd length >= 3, spacing >= 1).
void validate(const SeparableKernel& kernel);

/// 1D sampled Gaussian normalized to sum 1. radius < 0 selects ceil(3 sigma), min 1.
std::vector<double> gaussian_taps(double sigma, int radius = -1);

/// Isotropic Gaussian kernel, same taps on both axes.
SeparableKernel gaussian_kernel(double sigma, int radius = -1);

/// Row pass then column pass (correlation), accumulating in double.
GrayImage convolve_separable(const GrayImage& img, const SeparableKernel& kernel,
                             BorderPolicy border = BorderPolicy::kSymmetric);

GrayImage gaussian_blur(const GrayImage& img, double sigma);

/// First-order Scharr derivative with taps dilated to offsets {-step, 0, +step}.
/// Derivative axis: (-1, 0, 1) / (2 step), so a unit ramp gives exactly 1.
/// Smoothing axis: (3, 10, 3) / 16. Exactly one of dx, dy must be 1.
SeparableKernel scharr_kernel(int dx, int dy, int step);
GrayImage scharr_derivative(const GrayImage& img, int dx, int dy, int step);

/// Element-wise helpers used across modules.
double mean(const GrayImage& img);
double sum(const GrayImage& img);

}  // namespace kaze

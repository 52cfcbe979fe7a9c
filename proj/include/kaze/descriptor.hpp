/**
 * @file descriptor.hpp
 * @brief Dominant orientation and 64-dimensional M-SURF descriptors computed
 * from the detector's first-order derivative images.
 */

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "kaze/detector.hpp"
#include "kaze/scale_space.hpp"

namespace kaze {

inline constexpr std::size_t kDescriptorSize = 64;

struct Descriptor {
  std::array<float, kDescriptorSize> values{};
  std::size_t keypoint_ref = 0;
  bool degenerate = false;  ///< zero-energy neighbourhood, values all zero

  friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

struct Orientation {
  double angle = 0.0;  ///< radians in [0, 2pi)
  bool degenerate = false;
};

/// Number of candidate centres for the sliding pi/3 segment.
inline constexpr int kOrientationWindows = 42;

/// Bilinear read of img at (x, y) with replicate borders.
double sample_bilinear(const GrayImage& img, double x, double y);

/// Gaussian-weighted (2.5 sigma) derivative samples on a sigma-spaced disc of
/// radius 6 sigma, summed over a pi/3 segment slid through 42 positions; the
/// longest sum gives the angle. Needs level.Lx / level.Ly.
Orientation dominant_orientation(const EvolutionLevel& level, const KeyPoint& kp);

/// M-SURF over a 24 sigma square aligned with kp.angle: 4x4 subregions of 9x9
/// samples (stride 5, so neighbours share a 2 sigma margin on each side),
/// each summing Gaussian-weighted (2.5 sigma) rotated (Lx, Ly, |Lx|, |Ly|),
/// then weighted by a 4x4 mask Gaussian (1.5 subregion cells) and L2-normalized.
Descriptor msurf_descriptor(const EvolutionLevel& level, const KeyPoint& kp);

/// Assigns kps[i].angle and returns one descriptor per keypoint, index-aligned.
std::vector<Descriptor> describe(const std::vector<EvolutionLevel>& levels, std::vector<KeyPoint>& kps);

}  // namespace kaze

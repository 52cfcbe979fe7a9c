#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "kaze/detector.hpp"
#include "kaze/image_io.hpp"

namespace kaze {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kCircleColor{0, 255, 0};
inline constexpr Rgb kTickColor{255, 0, 0};

/// Circle of radius sigma plus a radius-length tick along the keypoint angle.
/// Pixels falling outside the raster are skipped. rgb must have 3 channels.
void draw_keypoints(Raster8& rgb, const std::vector<KeyPoint>& kps);

}  // namespace kaze

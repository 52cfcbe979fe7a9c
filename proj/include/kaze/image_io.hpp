/**
 * @file image_io.hpp
 * @brief 8-bit raster decode/encode (binary PGM and PNG) and luminance conversion.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "kaze/image.hpp"

namespace kaze {

/// Unreadable, truncated or unsupported image data.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Interleaved 8-bit raster with 1 (gray) or 3 (RGB) channels.
struct Raster8 {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> data;

  std::uint8_t* pixel(int x, int y) {
    return data.data() + (static_cast<std::size_t>(y) * width + x) * static_cast<std::size_t>(channels);
  }
  const std::uint8_t* pixel(int x, int y) const {
    return data.data() + (static_cast<std::size_t>(y) * width + x) * static_cast<std::size_t>(channels);
  }

  friend bool operator==(const Raster8&, const Raster8&) = default;
};

/// Reads P5 PGM or PNG, chosen by signature. Palette/alpha PNGs are flattened
/// to gray or RGB.
Raster8 read_image(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const Raster8& raster);
void write_pgm(const std::filesystem::path& path, const Raster8& raster);

/// Gray rasters map to v/255; RGB uses 0.299 R + 0.587 G + 0.114 B, then /255.
GrayImage to_luminance(const Raster8& raster);

/// Gray expanded to three equal channels; RGB returned unchanged.
Raster8 to_rgb(const Raster8& raster);

/// Quantizes [0, 1] luminance (clamped) to an 8-bit gray raster.
Raster8 to_gray8(const GrayImage& img);

}  // namespace kaze

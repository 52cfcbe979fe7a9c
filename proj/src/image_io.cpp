#include "kaze/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace kaze {

namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DecodeError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(const std::vector<std::uint8_t>& bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(bytes[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  std::string token;
  while (pos < bytes.size() && !std::isspace(bytes[pos]) && bytes[pos] != '#') token += static_cast<char>(bytes[pos++]);
  return token;
}

int pgm_int(const std::vector<std::uint8_t>& bytes, std::size_t& pos) {
  const std::string token = pgm_token(bytes, pos);
  if (token.empty() || !std::all_of(token.begin(), token.end(), [](char c) { return std::isdigit(c); }) ||
      token.size() > 9)
    throw DecodeError("malformed PGM header");
  return std::stoi(token);
}

Raster8 decode_pgm(const std::vector<std::uint8_t>& bytes) {
  std::size_t pos = 2;
  const int width = pgm_int(bytes, pos);
  const int height = pgm_int(bytes, pos);
  const int maxval = pgm_int(bytes, pos);
  if (width <= 0 || height <= 0) throw DecodeError("PGM has zero dimensions");
  if (maxval <= 0 || maxval > 255) throw DecodeError("only 8-bit PGM is supported");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw DecodeError("malformed PGM header");
  ++pos;

  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - pos < count) throw DecodeError("truncated PGM data");

  Raster8 raster{width, height, 1, std::vector<std::uint8_t>(bytes.begin() + pos, bytes.begin() + pos + count)};
  if (maxval != 255)
    for (auto& v : raster.data) v = static_cast<std::uint8_t>(std::lround(255.0 * std::min<int>(v, maxval) / maxval));
  return raster;
}

Raster8 decode_png(const std::vector<std::uint8_t>& bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
    throw DecodeError(std::string("PNG: ") + image.message);

  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

  Raster8 raster{static_cast<int>(image.width), static_cast<int>(image.height), color ? 3 : 1, {}};
  raster.data.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raster.data.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw DecodeError("PNG: " + message);
  }
  return raster;
}

}  // namespace

Raster8 read_image(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  static constexpr std::array<std::uint8_t, 8> kPngSignature{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= kPngSignature.size() && std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin()))
    return decode_png(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decode_pgm(bytes);
  throw DecodeError("unrecognized image format: " + path.string());
}

void write_png(const std::filesystem::path& path, const Raster8& raster) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(raster.width);
  image.height = static_cast<png_uint_32>(raster.height);
  image.format = raster.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, raster.data.data(), 0, nullptr))
    throw std::runtime_error(std::string("PNG write failed: ") + image.message);
}

void write_pgm(const std::filesystem::path& path, const Raster8& raster) {
  if (raster.channels != 1) throw std::invalid_argument("write_pgm: raster must be single-channel");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P5\n" << raster.width << ' ' << raster.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(raster.data.data()), static_cast<std::streamsize>(raster.data.size()));
}

GrayImage to_luminance(const Raster8& raster) {
  GrayImage img(raster.width, raster.height);
  auto dst = img.pixels();
  const std::size_t n = dst.size();
  if (raster.channels == 1) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = raster.data[i] / 255.0;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint8_t* p = raster.data.data() + 3 * i;
      dst[i] = (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]) / 255.0;
    }
  }
  return img;
}

Raster8 to_rgb(const Raster8& raster) {
  if (raster.channels == 3) return raster;
  Raster8 rgb{raster.width, raster.height, 3, std::vector<std::uint8_t>(raster.data.size() * 3)};
  for (std::size_t i = 0; i < raster.data.size(); ++i)
    rgb.data[3 * i] = rgb.data[3 * i + 1] = rgb.data[3 * i + 2] = raster.data[i];
  return rgb;
}

Raster8 to_gray8(const GrayImage& img) {
  Raster8 raster{img.width(), img.height(), 1, std::vector<std::uint8_t>(img.size())};
  const auto src = img.pixels();
  for (std::size_t i = 0; i < src.size(); ++i)
    raster.data[i] = static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(src[i], 0.0, 1.0)));
  return raster;
}

}  // namespace kaze

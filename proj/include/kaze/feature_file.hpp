/**
 * @file feature_file.hpp
 * @brief Versioned text format for keypoints and descriptors.
 *
 *   KAZEFEAT 1 <count>
 *   x y sigma response octave sublevel angle      (count lines)
 *   d0 d1 ... d63                                  (count lines, index-aligned)
 *
 * Reals are printed with 9 significant digits.
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "kaze/descriptor.hpp"
#include "kaze/detector.hpp"

namespace kaze {

inline constexpr int kFeatureFileVersion = 1;

/// Bad magic, unsupported version, or malformed body.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FeatureSet {
  std::vector<KeyPoint> keypoints;  ///< level_index is not stored; read back as -1
  std::vector<Descriptor> descriptors;
};

void write_features(std::ostream& out, const std::vector<KeyPoint>& kps, const std::vector<Descriptor>& descs);
FeatureSet read_features(std::istream& in);

/// File variants; read throws std::runtime_error if the file cannot be opened.
void save_features(const std::filesystem::path& path, const std::vector<KeyPoint>& kps,
                   const std::vector<Descriptor>& descs);
FeatureSet load_features(const std::filesystem::path& path);

}  // namespace kaze

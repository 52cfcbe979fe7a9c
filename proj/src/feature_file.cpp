#include "kaze/feature_file.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace kaze {

namespace {

constexpr const char* kMagic = "KAZEFEAT";

void put_real(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  out << buf;
}

// strtod rather than operator>> so subnormal values parse instead of failing.
bool get_real(std::istream& in, double& v) {
  std::string token;
  if (!(in >> token)) return false;
  char* end = nullptr;
  v = std::strtod(token.c_str(), &end);
  return end == token.c_str() + token.size();
}

std::string next_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError(std::string("feature file truncated: missing ") + what);
  return line;
}

}  // namespace

void write_features(std::ostream& out, const std::vector<KeyPoint>& kps, const std::vector<Descriptor>& descs) {
  if (kps.size() != descs.size()) throw std::invalid_argument("write_features: keypoint/descriptor count mismatch");

  out << kMagic << ' ' << kFeatureFileVersion << ' ' << kps.size() << '\n';
  for (const KeyPoint& kp : kps) {
    put_real(out, kp.x);
    out << ' ';
    put_real(out, kp.y);
    out << ' ';
    put_real(out, kp.sigma);
    out << ' ';
    put_real(out, kp.response);
    out << ' ' << kp.octave << ' ' << kp.sublevel << ' ';
    put_real(out, kp.angle);
    out << '\n';
  }
  for (const Descriptor& d : descs) {
    for (std::size_t i = 0; i < kDescriptorSize; ++i) {
      if (i) out << ' ';
      put_real(out, d.values[i]);
    }
    out << '\n';
  }
}

FeatureSet read_features(std::istream& in) {
  std::istringstream header(next_line(in, "header"));
  std::string magic;
  int version = 0;
  long long count = -1;
  if (!(header >> magic) || magic != kMagic) throw FormatError("not a feature file (bad magic)");
  if (!(header >> version)) throw FormatError("feature file header lacks a version");
  if (version != kFeatureFileVersion)
    throw FormatError("unsupported feature file version " + std::to_string(version) + " (expected " +
                      std::to_string(kFeatureFileVersion) + ")");
  if (!(header >> count) || count < 0) throw FormatError("feature file header lacks a valid count");

  // Grow as lines arrive; a corrupt count must not trigger a huge allocation.
  FeatureSet set;
  for (long long i = 0; i < count; ++i) {
    KeyPoint& kp = set.keypoints.emplace_back();
    std::istringstream line(next_line(in, "keypoint line"));
    if (!(get_real(line, kp.x) && get_real(line, kp.y) && get_real(line, kp.sigma) &&
          get_real(line, kp.response) && (line >> kp.octave >> kp.sublevel) && get_real(line, kp.angle)))
      throw FormatError("malformed keypoint line");
    kp.level_index = -1;
  }
  for (std::size_t i = 0; i < set.keypoints.size(); ++i) {
    Descriptor& d = set.descriptors.emplace_back();
    std::istringstream line(next_line(in, "descriptor line"));
    for (float& v : d.values) {
      double parsed = 0.0;
      if (!get_real(line, parsed)) throw FormatError("malformed descriptor line");
      v = static_cast<float>(parsed);
    }
    d.keypoint_ref = i;
    d.degenerate = std::all_of(d.values.begin(), d.values.end(), [](float v) { return v == 0.0f; });
  }
  return set;
}

void save_features(const std::filesystem::path& path, const std::vector<KeyPoint>& kps,
                   const std::vector<Descriptor>& descs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_features(out, kps, descs);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

FeatureSet load_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_features(in);
}

}  // namespace kaze

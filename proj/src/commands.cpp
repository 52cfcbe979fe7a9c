#include "kaze/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <system_error>
#include <vector>

#include "kaze/draw.hpp"
#include "kaze/feature_file.hpp"
#include "kaze/image_io.hpp"
#include "kaze/parallel.hpp"

namespace kaze::cli {

namespace fs = std::filesystem;

namespace {

// Decodes the input and checks its size; returns an exit code != kOk on failure.
int load_luminance(const fs::path& input, GrayImage& img, Raster8* raster, std::ostream& err) {
  Raster8 decoded;
  try {
    decoded = read_image(input);
  } catch (const DecodeError& e) {
    err << "error: " << e.what() << '\n';
    return kDecodeError;
  }
  if (std::min(decoded.width, decoded.height) < kMinImageSide) {
    err << "error: image " << decoded.width << "x" << decoded.height << " is smaller than " << kMinImageSide << "x"
        << kMinImageSide << '\n';
    return kBadDimensions;
  }
  img = to_luminance(decoded);
  if (raster) *raster = std::move(decoded);
  return kOk;
}

int load_feature_file(const fs::path& path, FeatureSet& set, std::ostream& err) {
  try {
    set = load_features(path);
  } catch (const FormatError& e) {
    err << "error: " << path.string() << ": " << e.what() << '\n';
    return kFormatMismatch;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kDecodeError;
  }
  return kOk;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

int cmd_detect(const fs::path& input, const ScaleSpaceOptions& opts, const fs::path& output, std::ostream& err) {
  GrayImage img;
  if (int rc = load_luminance(input, img, nullptr, err); rc != kOk) return rc;

  const Features features = extract_features(img, opts);
  if (features.contrast.degenerate)
    err << "warning: image has no gradient; contrast factor fell back to " << kFallbackContrast << '\n';

  // Write next to the destination, then rename, so failures leave no partial file.
  fs::path tmp = output;
  tmp += ".partial";
  try {
    save_features(tmp, features.keypoints, features.descriptors);
    fs::rename(tmp, output);
  } catch (const std::exception& e) {
    std::error_code ec;
    fs::remove(tmp, ec);
    err << "error: " << e.what() << '\n';
    return kDecodeError;
  }
  return kOk;
}

int cmd_match(const fs::path& features_a, const fs::path& features_b, double ratio, std::ostream& out,
              std::ostream& err) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    err << "error: --ratio must be in (0, 1]\n";
    return kBadFlags;
  }
  FeatureSet a, b;
  if (int rc = load_feature_file(features_a, a, err); rc != kOk) return rc;
  if (int rc = load_feature_file(features_b, b, err); rc != kOk) return rc;

  const auto matches = match(a.descriptors, b.descriptors, MatchOptions{ratio, true});
  char buf[96];
  for (const Match& m : matches) {
    std::snprintf(buf, sizeof(buf), "%zu %zu %.9g\n", m.index_a, m.index_b, m.distance);
    out << buf;
  }
  out << "matches=" << matches.size() << '\n';
  return kOk;
}

StageTimings median_timings(const std::vector<StageTimings>& runs) {
  if (runs.empty()) throw std::invalid_argument("median_timings: no runs");
  auto field = [&runs](double StageTimings::*member) {
    std::vector<double> v;
    for (const auto& r : runs) v.push_back(r.*member);
    return median(std::move(v));
  };
  StageTimings m = runs.front();
  m.scale_space_ms = field(&StageTimings::scale_space_ms);
  m.detection_ms = field(&StageTimings::detection_ms);
  m.description_ms = field(&StageTimings::description_ms);
  m.total_ms = field(&StageTimings::total_ms);
  return m;
}

std::string format_timings(const StageTimings& t, int repeats) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  os << "scale_space_ms=" << t.scale_space_ms << '\n'
     << "detection_ms=" << t.detection_ms << '\n'
     << "description_ms=" << t.description_ms << '\n'
     << "total_ms=" << t.total_ms << '\n'
     << "image_width=" << t.image_width << '\n'
     << "image_height=" << t.image_height << '\n'
     << "keypoint_count=" << t.keypoint_count << '\n'
     << "thread_count=" << t.thread_count << '\n'
     << "repeats=" << repeats << '\n';
  return os.str();
}

int cmd_bench(const fs::path& input, const ScaleSpaceOptions& opts, int repeats, int threads, std::ostream& out,
              std::ostream& err) {
  if (repeats < 1) {
    err << "error: --repeats must be >= 1\n";
    return kBadFlags;
  }
  GrayImage img;
  if (int rc = load_luminance(input, img, nullptr, err); rc != kOk) return rc;

  const int previous = thread_count();
  set_thread_count(threads);
  std::vector<StageTimings> runs(static_cast<std::size_t>(repeats));
  for (auto& run : runs) extract_features(img, opts, &run);
  set_thread_count(previous);

  out << format_timings(median_timings(runs), repeats);
  return kOk;
}

int cmd_draw(const fs::path& input, const fs::path& features, const fs::path& output, std::ostream& err) {
  Raster8 raster;
  try {
    raster = read_image(input);
  } catch (const DecodeError& e) {
    err << "error: " << e.what() << '\n';
    return kDecodeError;
  }
  FeatureSet set;
  if (int rc = load_feature_file(features, set, err); rc != kOk) return rc;

  Raster8 canvas = to_rgb(raster);
  draw_keypoints(canvas, set.keypoints);
  try {
    write_png(output, canvas);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDecodeError;
  }
  return kOk;
}

}  // namespace kaze::cli

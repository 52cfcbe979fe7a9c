#include "kaze/pipeline.hpp"

#include <chrono>

#include "kaze/parallel.hpp"

namespace kaze {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point from, Clock::time_point to) {
  return std::chrono::duration<double, std::milli>(to - from).count();
}

}  // namespace

Features extract_features(const GrayImage& img, const ScaleSpaceOptions& opts, StageTimings* timings) {
  Features features;

  const auto t0 = Clock::now();
  auto levels = build_scale_space(img, opts, &features.contrast);
  const auto t1 = Clock::now();
  features.keypoints = detect(levels, opts);
  const auto t2 = Clock::now();
  features.descriptors = describe(levels, features.keypoints);
  const auto t3 = Clock::now();

  if (timings) {
    timings->scale_space_ms = elapsed_ms(t0, t1);
    timings->detection_ms = elapsed_ms(t1, t2);
    timings->description_ms = elapsed_ms(t2, t3);
    timings->total_ms = elapsed_ms(t0, t3);
    timings->image_width = img.width();
    timings->image_height = img.height();
    timings->keypoint_count = static_cast<int>(features.keypoints.size());
    timings->thread_count = thread_count();
  }
  return features;
}

}  // namespace kaze

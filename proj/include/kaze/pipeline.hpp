/**
 * @file pipeline.hpp
 * @brief End-to-end extraction with per-stage wall-clock instrumentation.
 */

#pragma once

#include <vector>

#include "kaze/descriptor.hpp"
#include "kaze/detector.hpp"
#include "kaze/scale_space.hpp"

namespace kaze {

/// Wall-clock breakdown in milliseconds. total_ms covers the three stages
/// plus the glue between them.
struct StageTimings {
  double scale_space_ms = 0.0;
  double detection_ms = 0.0;
  double description_ms = 0.0;
  double total_ms = 0.0;
  int image_width = 0;
  int image_height = 0;
  int keypoint_count = 0;
  int thread_count = 0;
};

struct Features {
  std::vector<KeyPoint> keypoints;
  std::vector<Descriptor> descriptors;  ///< index-aligned with keypoints
  ContrastEstimate contrast;
};

Features extract_features(const GrayImage& img, const ScaleSpaceOptions& opts, StageTimings* timings = nullptr);

}  // namespace kaze

/**
 * @file commands.hpp
 * @brief The CLI subcommands as plain functions returning process exit codes.
 *
 * Exit codes: 0 ok, 2 unreadable/corrupt input, 3 image too small,
 * 4 feature file format/version mismatch, 5 bad flags.
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "kaze/matcher.hpp"
#include "kaze/pipeline.hpp"
#include "kaze/scale_space.hpp"

namespace kaze::cli {

enum ExitCode : int {
  kOk = 0,
  kDecodeError = 2,
  kBadDimensions = 3,
  kFormatMismatch = 4,
  kBadFlags = 5,
};

/// Smallest side accepted by the pipeline.
inline constexpr int kMinImageSide = 32;

int cmd_detect(const std::filesystem::path& input, const ScaleSpaceOptions& opts,
               const std::filesystem::path& output, std::ostream& err);

int cmd_match(const std::filesystem::path& features_a, const std::filesystem::path& features_b, double ratio,
              std::ostream& out, std::ostream& err);

/// Runs the pipeline `repeats` times with `threads` workers and prints the
/// per-stage medians as key=value lines. Image decode is not timed.
int cmd_bench(const std::filesystem::path& input, const ScaleSpaceOptions& opts, int repeats, int threads,
              std::ostream& out, std::ostream& err);

int cmd_draw(const std::filesystem::path& input, const std::filesystem::path& features,
             const std::filesystem::path& output, std::ostream& err);

/// key=value rendering used by cmd_bench.
std::string format_timings(const StageTimings& t, int repeats);

/// Per-field median over runs (total_ms is the median of the per-run totals).
StageTimings median_timings(const std::vector<StageTimings>& runs);

}  // namespace kaze::cli

#pragma once

#include <cstddef>
#include <vector>

#include "kaze/descriptor.hpp"

namespace kaze {

struct Match {
  std::size_t index_a = 0;
  std::size_t index_b = 0;
  double distance = 0.0;  ///< L2 between descriptors

  friend bool operator==(const Match&, const Match&) = default;
};

struct MatchOptions {
  double ratio = 0.8;       ///< keep iff d1 < ratio * d2
  bool cross_check = true;  ///< keep only mutual nearest neighbours
};

double l2_distance(const Descriptor& a, const Descriptor& b);

/// Brute-force nearest neighbour matching with ratio test and cross-check.
/// Degenerate descriptors never match. Ties resolve to the lower index.
/// Output ordered by index_a.
std::vector<Match> match(const std::vector<Descriptor>& desc_a, const std::vector<Descriptor>& desc_b,
                         const MatchOptions& opts = {});

}  // namespace kaze

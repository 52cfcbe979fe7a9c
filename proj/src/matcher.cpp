#include "kaze/matcher.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kaze {

double l2_distance(const Descriptor& a, const Descriptor& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < kDescriptorSize; ++i) {
    const double diff = static_cast<double>(a.values[i]) - b.values[i];
    d += diff * diff;
  }
  return std::sqrt(d);
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Nearest {
  std::size_t best = kNone;
  double d1 = std::numeric_limits<double>::infinity();
  double d2 = std::numeric_limits<double>::infinity();
};

// For every query, the two smallest distances to the candidates. Strict < keeps
// the lowest index on ties.
std::vector<Nearest> nearest_two(const std::vector<Descriptor>& queries, const std::vector<Descriptor>& candidates) {
  std::vector<Nearest> out(queries.size());
  const auto n = static_cast<std::ptrdiff_t>(queries.size());

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t q = 0; q < n; ++q) {
    if (queries[q].degenerate) continue;
    Nearest& nn = out[q];
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (candidates[c].degenerate) continue;
      const double d = l2_distance(queries[q], candidates[c]);
      if (d < nn.d1) {
        nn.d2 = nn.d1;
        nn.d1 = d;
        nn.best = c;
      } else if (d < nn.d2) {
        nn.d2 = d;
      }
    }
  }
  return out;
}

}  // namespace

std::vector<Match> match(const std::vector<Descriptor>& desc_a, const std::vector<Descriptor>& desc_b,
                         const MatchOptions& opts) {
  if (!(opts.ratio > 0.0 && opts.ratio <= 1.0)) throw std::invalid_argument("match: ratio must be in (0, 1]");
  std::vector<Match> out;
  if (desc_a.empty() || desc_b.empty()) return out;

  const auto forward = nearest_two(desc_a, desc_b);
  std::vector<Nearest> backward;
  if (opts.cross_check) backward = nearest_two(desc_b, desc_a);

  for (std::size_t a = 0; a < forward.size(); ++a) {
    const Nearest& nn = forward[a];
    if (nn.best == kNone) continue;
    if (!(nn.d1 < opts.ratio * nn.d2)) continue;
    if (opts.cross_check && backward[nn.best].best != a) continue;
    out.push_back({a, nn.best, nn.d1});
  }
  return out;
}

}  // namespace kaze

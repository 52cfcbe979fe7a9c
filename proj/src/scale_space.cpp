/**
 * @file scale_space.cpp
 * @brief Evolution schedule, contrast factor, conductivities and FED cycles.
 */

#include "kaze/scale_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace kaze {

namespace {

constexpr double kNegligibleGradient = 1e-5;  // relative to the largest magnitude

bool is_prime(int v) {
  if (v < 2) return false;
  for (int d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

}  // namespace

void validate(const ScaleSpaceOptions& opts) {
  auto fail = [](const std::string& what) { throw std::invalid_argument("ScaleSpaceOptions: " + what); };
  if (opts.num_octaves < 1) fail("num_octaves must be >= 1");
  if (opts.num_sublevels < 1) fail("num_sublevels must be >= 1");
  if (!(opts.base_sigma > 0.0)) fail("base_sigma must be positive");
  if (!(opts.tau_max > 0.0 && opts.tau_max <= 0.25)) fail("tau_max must be in (0, 0.25]");
  if (!(opts.k_percentile > 0.0 && opts.k_percentile < 1.0)) fail("k_percentile must be in (0, 1)");
  if (opts.k_histogram_bins < 1) fail("k_histogram_bins must be >= 1");
  if (!(opts.detector_threshold >= 0.0)) fail("detector_threshold must be non-negative");
  if (!(opts.edge_ratio >= 1.0)) fail("edge_ratio must be >= 1");
}

std::vector<ScaleStep> evolution_schedule(const ScaleSpaceOptions& opts) {
  validate(opts);
  std::vector<ScaleStep> steps;
  steps.reserve(static_cast<std::size_t>(opts.num_octaves) * opts.num_sublevels);
  for (int o = 0; o < opts.num_octaves; ++o) {
    for (int s = 0; s < opts.num_sublevels; ++s) {
      const double exponent = static_cast<double>(o * opts.num_sublevels + s) / opts.num_sublevels;
      const double sigma = opts.base_sigma * std::exp2(exponent);
      steps.push_back({o, s, sigma, 0.5 * sigma * sigma});
    }
  }
  return steps;
}

std::vector<ScaleStep> truncated_schedule(const ScaleSpaceOptions& opts, int width, int height) {
  auto steps = evolution_schedule(opts);
  const double limit = 0.5 * std::min(width, height);
  std::erase_if(steps, [limit](const ScaleStep& st) { return st.sigma > limit; });
  return steps;
}

ContrastEstimate estimate_contrast_k(const GrayImage& smoothed, const ScaleSpaceOptions& opts) {
  if (smoothed.empty()) throw std::invalid_argument("estimate_contrast_k: empty image");
  validate(opts);

  const GrayImage Lx = scharr_derivative(smoothed, 1, 0, 1);
  const GrayImage Ly = scharr_derivative(smoothed, 0, 1, 1);

  std::vector<double> magnitude(smoothed.size());
  double hmax = 0.0;
  for (std::size_t i = 0; i < magnitude.size(); ++i) {
    const double gx = Lx.pixels()[i];
    const double gy = Ly.pixels()[i];
    magnitude[i] = std::sqrt(gx * gx + gy * gy);
    hmax = std::max(hmax, magnitude[i]);
  }
  if (hmax == 0.0) return {kFallbackContrast, true};

  // Magnitudes this far below the peak are double residue (a constant offset
  // can round them to exactly zero), so they count as zero gradient.
  const double floor = hmax * kNegligibleGradient;
  const auto nbins = static_cast<std::size_t>(opts.k_histogram_bins);
  std::vector<std::size_t> hist(nbins, 0);
  std::size_t npoints = 0;
  for (double m : magnitude) {
    if (m <= floor) continue;
    auto bin = static_cast<std::size_t>(std::floor(static_cast<double>(nbins) * (m / hmax)));
    if (bin >= nbins) bin = nbins - 1;
    ++hist[bin];
    ++npoints;
  }

  const auto threshold =
      std::max<std::size_t>(1, static_cast<std::size_t>(static_cast<double>(npoints) * opts.k_percentile));
  std::size_t cumulative = 0;
  std::size_t bins_used = 0;
  while (cumulative < threshold && bins_used < nbins) cumulative += hist[bins_used++];

  return {hmax * static_cast<double>(bins_used) / static_cast<double>(nbins), false};
}

GrayImage conductivity(const GrayImage& Lx, const GrayImage& Ly, double k, Diffusivity which) {
  if (!(k > 0.0)) throw std::invalid_argument("conductivity: k must be positive");
  if (!Lx.same_shape(Ly)) throw std::invalid_argument("conductivity: Lx and Ly differ in shape");

  GrayImage out(Lx.width(), Lx.height());
  const auto gx = Lx.pixels();
  const auto gy = Ly.pixels();
  auto dst = out.pixels();
  const double inv_k2 = 1.0 / (k * k);
  const auto n = static_cast<std::ptrdiff_t>(dst.size());

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double ratio = (gx[i] * gx[i] + gy[i] * gy[i]) * inv_k2;
    const double g = which == Diffusivity::kG1 ? std::exp(-ratio) : 1.0 / (1.0 + ratio);
    // exp(-ratio) underflows for very steep gradients; keep the (0, 1] range.
    dst[i] = std::max(g, std::numeric_limits<double>::min());
  }
  return out;
}

std::vector<double> fed_tau_steps(int n, double tau_max) {
  if (n < 1) throw std::invalid_argument("fed_tau_steps: n must be >= 1");
  if (!(tau_max > 0.0)) throw std::invalid_argument("fed_tau_steps: tau_max must be positive");

  std::vector<double> taus(n);
  for (int j = 0; j < n; ++j) {
    const double c = std::cos(std::numbers::pi * (2.0 * j + 1.0) / (4.0 * n + 2.0));
    taus[j] = tau_max / (2.0 * c * c);
  }
  return taus;
}

FedCycle fed_cycle(double total_time, double tau_max) {
  if (!(total_time > 0.0)) throw std::invalid_argument("fed_cycle: total time must be positive");
  if (!(tau_max > 0.0)) throw std::invalid_argument("fed_cycle: tau_max must be positive");

  auto reach = [tau_max](int n) { return tau_max * n * (n + 1) / 3.0; };
  int n = static_cast<int>(std::ceil(-0.5 + 0.5 * std::sqrt(1.0 + 12.0 * total_time / tau_max)));
  n = std::max(n, 1);
  // The closed form can land one off when sqrt rounds across an integer.
  constexpr double kRel = 1e-12;
  while (n > 1 && reach(n - 1) >= total_time * (1.0 - kRel)) --n;
  while (reach(n) < total_time * (1.0 - kRel)) ++n;

  std::vector<double> taus = fed_tau_steps(n, tau_max);
  const double scale = total_time / reach(n);
  for (double& tau : taus) tau *= scale;

  // kappa-cycle ordering (kappa = n/2, modulus = next prime above n): large and
  // small steps interleave so double rounding is not amplified by runs of large steps.
  FedCycle cycle{n, {}, total_time};
  cycle.taus.reserve(taus.size());
  const int kappa = std::max(1, n / 2);
  int prime = n + 1;
  while (!is_prime(prime)) ++prime;
  for (int k = 0; static_cast<int>(cycle.taus.size()) < n; ++k) {
    const int index = ((k + 1) * kappa) % prime - 1;
    if (index >= 0 && index < n) cycle.taus.push_back(taus[index]);
  }
  return cycle;
}

void fed_step_into(const GrayImage& L, const GrayImage& c, double tau, GrayImage& out) {
  if (!L.same_shape(c) || !L.same_shape(out)) throw std::invalid_argument("fed_step: dimension mismatch");
  if (!(tau > 0.0)) throw std::invalid_argument("fed_step: tau must be positive");

  const int w = L.width();
  const int h = L.height();

#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const double* lc = L.row(y).data();
    const double* cc = c.row(y).data();
    const double* ln = y > 0 ? L.row(y - 1).data() : nullptr;
    const double* cn = y > 0 ? c.row(y - 1).data() : nullptr;
    const double* ls = y + 1 < h ? L.row(y + 1).data() : nullptr;
    const double* cs = y + 1 < h ? c.row(y + 1).data() : nullptr;
    double* dst = out.row(y).data();

    for (int x = 0; x < w; ++x) {
      const double v = lc[x];
      const double cv = cc[x];
      double flux = 0.0;
      if (x + 1 < w) flux += 0.5 * (cv + cc[x + 1]) * (lc[x + 1] - v);
      if (x > 0) flux += 0.5 * (cv + cc[x - 1]) * (lc[x - 1] - v);
      if (ls) flux += 0.5 * (cv + cs[x]) * (ls[x] - v);
      if (ln) flux += 0.5 * (cv + cn[x]) * (ln[x] - v);
      dst[x] = v + tau * flux;
    }
  }
}

GrayImage fed_step(const GrayImage& L, const GrayImage& c, double tau) {
  GrayImage out(L.width(), L.height());
  fed_step_into(L, c, tau, out);
  return out;
}

std::vector<EvolutionLevel> build_scale_space(const GrayImage& img, const ScaleSpaceOptions& opts,
                                              ContrastEstimate* contrast) {
  validate(opts);
  if (img.empty()) throw std::invalid_argument("build_scale_space: empty image");
  if (std::min(img.width(), img.height()) < 32)
    throw std::invalid_argument("build_scale_space: image must be at least 32x32");

  const auto schedule = truncated_schedule(opts, img.width(), img.height());
  if (schedule.empty()) throw std::invalid_argument("build_scale_space: base_sigma exceeds image size");

  std::vector<EvolutionLevel> levels(schedule.size());
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    auto& level = levels[i];
    level.index = static_cast<int>(i);
    level.octave = schedule[i].octave;
    level.sublevel = schedule[i].sublevel;
    level.sigma = schedule[i].sigma;
    level.time = schedule[i].time;
  }

  constexpr double kGradientSigma = 1.0;
  levels[0].Lt = gaussian_blur(img, opts.base_sigma);
  levels[0].Lsmooth = gaussian_blur(levels[0].Lt, kGradientSigma);

  const ContrastEstimate k = estimate_contrast_k(levels[0].Lt, opts);
  if (contrast) *contrast = k;

  GrayImage scratch(img.width(), img.height());
  for (std::size_t i = 1; i < levels.size(); ++i) {
    auto& prev = levels[i - 1];
    auto& level = levels[i];

    level.Lsmooth = gaussian_blur(prev.Lt, kGradientSigma);
    const GrayImage flow = conductivity(scharr_derivative(level.Lsmooth, 1, 0, 1),
                                        scharr_derivative(level.Lsmooth, 0, 1, 1), k.k, opts.diffusivity);

    level.Lt = prev.Lt;
    const FedCycle cycle = fed_cycle(level.time - prev.time, opts.tau_max);
    for (double tau : cycle.taus) {
      fed_step_into(level.Lt, flow, tau, scratch);
      std::swap(level.Lt, scratch);
    }
  }
  return levels;
}

}  // namespace kaze

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "kaze/parallel.hpp"
#include "kaze/scale_space.hpp"
#include "support/synthetic.hpp"

namespace kaze {
namespace {

TEST(Schedule, BaseAndOctaveValues) {
  const ScaleSpaceOptions opts;
  const auto sched = evolution_schedule(opts);
  ASSERT_EQ(sched.size(), 16u);
  EXPECT_DOUBLE_EQ(sched[0].sigma, 1.6);
  EXPECT_DOUBLE_EQ(sched[0].time, 1.28);
  EXPECT_EQ(sched[4].octave, 1);
  EXPECT_EQ(sched[4].sublevel, 0);
  EXPECT_NEAR(sched[4].sigma, 3.2, 1e-12);
  for (std::size_t i = 1; i < sched.size(); ++i) {
    EXPECT_GT(sched[i].sigma, sched[i - 1].sigma);
    EXPECT_NEAR(sched[i].time, sched[i].sigma * sched[i].sigma / 2.0, 1e-12);
  }
}

TEST(Schedule, TruncatedBySmallImages) {
  const ScaleSpaceOptions opts;
  const auto sched = truncated_schedule(opts, 64, 40);
  ASSERT_FALSE(sched.empty());
  for (const auto& s : sched) EXPECT_LE(s.sigma, 20.0);
  EXPECT_LT(sched.size(), 16u);
}

TEST(Options, ValidationRejectsNonsense) {
  ScaleSpaceOptions o;
  o.num_octaves = 0;
  EXPECT_THROW(validate(o), std::invalid_argument);
  o = {};
  o.base_sigma = -1;
  EXPECT_THROW(validate(o), std::invalid_argument);
  o = {};
  o.k_percentile = 1.5;
  EXPECT_THROW(validate(o), std::invalid_argument);
  o = {};
  o.edge_ratio = 0;
  EXPECT_THROW(validate(o), std::invalid_argument);
  EXPECT_NO_THROW(validate(ScaleSpaceOptions{}));
}

TEST(Contrast, ConstantImageFallsBack) {
  const auto est = estimate_contrast_k(GrayImage(40, 40, 0.4), ScaleSpaceOptions{});
  EXPECT_TRUE(est.degenerate);
  EXPECT_DOUBLE_EQ(est.k, kFallbackContrast);
}

TEST(Contrast, StepImageMatchesSortedQuantile) {
  GrayImage img(64, 64);
  for (int y = 0; y < 64; ++y)
    for (int x = 32; x < 64; ++x) img.at(x, y) = 1.0;
  const ScaleSpaceOptions opts;
  const GrayImage smoothed = gaussian_blur(img, opts.base_sigma);
  const auto est = estimate_contrast_k(smoothed, opts);
  ASSERT_FALSE(est.degenerate);

  // Oracle: sort every nonzero gradient magnitude, no histogram.
  const GrayImage gx = scharr_derivative(smoothed, 1, 0, 1), gy = scharr_derivative(smoothed, 0, 1, 1);
  std::vector<double> mags;
  for (std::size_t i = 0; i < smoothed.size(); ++i) {
    const double m = std::hypot(double(gx.pixels()[i]), double(gy.pixels()[i]));
    if (m > 0.0) mags.push_back(m);
  }
  std::sort(mags.begin(), mags.end());
  const double hmax = mags.back();
  const auto rank = std::max<std::size_t>(1, static_cast<std::size_t>(mags.size() * opts.k_percentile));
  const double v = mags[rank - 1];
  EXPECT_GT(est.k, 0.0);
  EXPECT_LE(est.k, hmax * (1 + 1e-12));
  EXPECT_GE(est.k, v * (1 - 1e-12));
  EXPECT_LE(est.k, v + hmax / opts.k_histogram_bins + 1e-12);
}

TEST(Contrast, ScalesWithIntensity) {
  const ScaleSpaceOptions opts;
  const GrayImage img = gaussian_blur(testing::textured(80, 60, 2), opts.base_sigma);
  const double k1 = estimate_contrast_k(img, opts).k;
  const double k3 = estimate_contrast_k(testing::affine(img, 3.0, 0.2), opts).k;
  EXPECT_NEAR(k3, 3.0 * k1, 1e-4 * k1);
}

TEST(Conductivity, ReferenceValues) {
  const double k = 0.05;
  GrayImage lx(2, 1), ly(2, 1);
  lx.at(1, 0) = k * 0.6;
  ly.at(1, 0) = k * 0.8;
  const GrayImage c1 = conductivity(lx, ly, k, Diffusivity::kG1);
  const GrayImage c2 = conductivity(lx, ly, k, Diffusivity::kG2);
  EXPECT_FLOAT_EQ(c1.at(0, 0), 1.0);
  EXPECT_FLOAT_EQ(c2.at(0, 0), 1.0);
  EXPECT_NEAR(c1.at(1, 0), 0.36787944117144233, 1e-6);
  EXPECT_NEAR(c2.at(1, 0), 0.5, 1e-6);
  EXPECT_THROW(conductivity(lx, ly, 0.0, Diffusivity::kG2), std::invalid_argument);
}

TEST(Conductivity, JointScalingInvariance) {
  const GrayImage img = testing::textured(40, 40, 9);
  const GrayImage lx = scharr_derivative(img, 1, 0, 1), ly = scharr_derivative(img, 0, 1, 1);
  for (auto which : {Diffusivity::kG1, Diffusivity::kG2}) {
    const GrayImage a = conductivity(lx, ly, 0.02, which);
    const GrayImage b = conductivity(testing::affine(lx, 4.0, 0.0), testing::affine(ly, 4.0, 0.0), 0.08, which);
    EXPECT_LT(testing::max_abs_difference(a, b), 1e-6);
    for (double v : a.pixels()) {
      EXPECT_GT(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Fed, SingleStep) {
  const auto t = fed_tau_steps(1, 0.25);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_NEAR(t[0], 1.0 / 6.0, 1e-15);
  EXPECT_THROW(fed_tau_steps(0, 0.25), std::invalid_argument);
}

TEST(Fed, StepSumIdentity) {
  for (int n = 1; n <= 50; ++n) {
    const auto t = fed_tau_steps(n, 0.25);
    ASSERT_EQ(t.size(), static_cast<std::size_t>(n));
    const double target = 0.25 * n * (n + 1) / 3.0;
    EXPECT_NEAR(std::accumulate(t.begin(), t.end(), 0.0), target, 1e-9 * target) << n;
    for (double v : t) EXPECT_GT(v, 0.0);
  }
}

TEST(Fed, CycleForFirstLevel) {
  const FedCycle c = fed_cycle(1.28, 0.25);
  EXPECT_EQ(c.n, 4);
  EXPECT_NEAR(std::accumulate(c.taus.begin(), c.taus.end(), 0.0), 1.28, 1e-12);
}

TEST(Fed, CycleBoundaryIsOneStep) {
  const double T = 0.25 * 2.0 / 3.0;
  const FedCycle c = fed_cycle(T, 0.25);
  EXPECT_EQ(c.n, 1);
  ASSERT_EQ(c.taus.size(), 1u);
  EXPECT_NEAR(c.taus[0], T, 1e-15);
  EXPECT_THROW(fed_cycle(0.0, 0.25), std::invalid_argument);
}

TEST(Fed, CycleIsMinimal) {
  for (double T : {0.01, 0.3, 1.28, 2.0, 7.7, 40.96, 163.84}) {
    const FedCycle c = fed_cycle(T, 0.25);
    EXPECT_GE(0.25 * c.n * (c.n + 1) / 3.0, T * (1 - 1e-12));
    if (c.n > 1) EXPECT_LT(0.25 * (c.n - 1) * c.n / 3.0, T);
    EXPECT_NEAR(std::accumulate(c.taus.begin(), c.taus.end(), 0.0), T, 1e-12 * T);
  }
}

TEST(Fed, CycleOrderIsAPermutation) {
  for (double T : {0.2, 1.28, 9.0, 60.0}) {
    const FedCycle c = fed_cycle(T, 0.25);
    auto ordered = c.taus;
    std::sort(ordered.begin(), ordered.end());
    auto expected = fed_tau_steps(c.n, 0.25);
    std::sort(expected.begin(), expected.end());
    const double scale = T / (0.25 * c.n * (c.n + 1) / 3.0);
    ASSERT_EQ(ordered.size(), expected.size());
    for (std::size_t i = 0; i < ordered.size(); ++i) EXPECT_NEAR(ordered[i], expected[i] * scale, 1e-12 * T);
  }
}

TEST(Fed, ConstantImageUnchanged) {
  const GrayImage L(30, 20, 0.6);
  const GrayImage c = testing::textured(30, 20, 1);
  EXPECT_EQ(fed_step(L, c, 0.2), L);
  EXPECT_THROW(fed_step(L, GrayImage(20, 30), 0.2), std::invalid_argument);
}

TEST(Fed, StableStepObeysMaximumPrinciple) {
  const GrayImage L = testing::textured(50, 50, 4);
  const GrayImage c = testing::affine(testing::textured(50, 50, 8), 0.9, 0.05);
  const GrayImage out = fed_step(L, c, 0.25);
  const auto [lo, hi] = std::minmax_element(L.pixels().begin(), L.pixels().end());
  for (double v : out.pixels()) {
    EXPECT_GE(v, *lo - 1e-6f);
    EXPECT_LE(v, *hi + 1e-6f);
  }
  EXPECT_NEAR(sum(out), sum(L), 1e-6 * std::abs(sum(L)));
}

TEST(Pyramid, LevelsAndMassConservation) {
  const GrayImage img = testing::textured(128, 96, 6);
  ContrastEstimate k;
  const auto levels = build_scale_space(img, ScaleSpaceOptions{}, &k);
  const auto sched = truncated_schedule(ScaleSpaceOptions{}, 128, 96);
  ASSERT_EQ(levels.size(), sched.size());
  EXPECT_FALSE(k.degenerate);
  const double m0 = mean(levels[0].Lt);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    EXPECT_EQ(levels[i].index, static_cast<int>(i));
    EXPECT_DOUBLE_EQ(levels[i].sigma, sched[i].sigma);
    EXPECT_NEAR(mean(levels[i].Lt), m0, 1e-4 * m0);
    for (double v : levels[i].Lt.pixels()) ASSERT_TRUE(std::isfinite(v));
    if (i) EXPECT_GT(testing::max_abs_difference(levels[i].Lt, levels[i - 1].Lt), 0.0);
  }
}

TEST(Pyramid, TooSmallImageRejected) {
  EXPECT_THROW(build_scale_space(GrayImage(31, 100), ScaleSpaceOptions{}), std::invalid_argument);
}

TEST(Pyramid, ThreadCountDoesNotChangeOutput) {
  const GrayImage img = testing::textured(96, 64, 12);
  set_thread_count(1);
  const auto a = build_scale_space(img, ScaleSpaceOptions{});
  set_thread_count(4);
  const auto b = build_scale_space(img, ScaleSpaceOptions{});
  set_thread_count(0);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].Lt, b[i].Lt);
}

}  // namespace
}  // namespace kaze

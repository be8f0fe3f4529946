#include <gtest/gtest.h>

#include <cmath>

#include "tbdnc/synth.hpp"

using namespace tbdnc;

namespace {

SynthSpec floor_bounce() {
  SynthSpec s;
  s.n_frames = 16;
  s.gravity_px = 0.2;
  s.initial_position = {30, 60};
  s.initial_velocity = {10, 6};
  s.bounce_planes.push_back({PlaneAxis::y, 180, 1.0});
  return s;
}

}  // namespace

TEST(Generate, ZeroGravityStraightLine) {
  SynthSpec s;
  s.n_frames = 10;
  s.initial_position = {20, 40.5};
  s.initial_velocity = {10, 0};
  s.exposure = 0.5;
  const SynthOutput out = generate(s);
  ASSERT_EQ(out.bundle.frames.size(), 10u);
  EXPECT_TRUE(out.bounce_times.empty());
  for (int f = 1; f <= 10; ++f) {
    const FrameRecord& r = out.bundle.frames[static_cast<std::size_t>(f - 1)];
    EXPECT_EQ(r.curve.frame_index, f);
    EXPECT_NEAR((r.curve.start - Point(20 + 10.0 * (f - 1), 40.5)).norm(), 0.0, 1e-12);
    EXPECT_NEAR((r.curve.end - r.curve.start - Point(5, 0)).norm(), 0.0, 1e-12);
    ASSERT_TRUE(r.kernel.has_value());
    // Half-pixel row offset splits the mass evenly between rows 40 and 41.
    double rows = 0.0;
    for (int x = 0; x < r.kernel->width(); ++x) rows += r.kernel->at(x, 40) + r.kernel->at(x, 41);
    EXPECT_NEAR(rows, r.kernel->sum(), 1e-12);
  }
}

TEST(Generate, KernelMassEqualsExposure) {
  for (double eps : {0.3, 0.85, 1.0}) {
    SynthSpec s = floor_bounce();
    s.exposure = eps;
    const SynthOutput out = generate(s);
    for (const auto& r : out.bundle.frames) EXPECT_NEAR(r.kernel->sum(), eps, 1e-6);
  }
}

TEST(Generate, ElasticFloorBounce) {
  const SynthSpec s = floor_bounce();
  const SynthOutput out = generate(s);
  ASSERT_EQ(out.bounce_times.size(), 1u);
  const double tb = out.bounce_times[0];
  EXPECT_NEAR(out.bounce_points[0].y(), 180.0, 1e-9);
  // Analytic hit time of y = 60 + 6 t + 0.2 t^2 = 180.
  const double expect = (-6.0 + std::sqrt(36.0 + 4.0 * 0.2 * 120.0)) / (2.0 * 0.2);
  EXPECT_NEAR(tb, expect, 1e-9);
  const TrajectoryFn& t = out.ground_truth.trajectory;
  const Point before = t.segments[t.piece_index(tb) - 1].derivative(tb);
  const Point after = t.derivative(tb);
  EXPECT_NEAR(before.norm(), after.norm(), 1e-9);
  EXPECT_NEAR(before.x(), after.x(), 1e-9);
  EXPECT_NEAR(before.y(), -after.y(), 1e-9);
  EXPECT_LT(t.max_breakpoint_gap(), 1e-9);
}

TEST(Generate, RestitutionScalesNormalVelocity) {
  SynthSpec s = floor_bounce();
  s.bounce_planes[0].restitution = 0.5;
  const SynthOutput out = generate(s);
  const double tb = out.bounce_times.at(0);
  const TrajectoryFn& t = out.ground_truth.trajectory;
  const Point before = t.segments[t.piece_index(tb) - 1].derivative(tb);
  EXPECT_NEAR(t.derivative(tb).y(), -0.5 * before.y(), 1e-9);
}

TEST(Generate, SpeedProfileIsAnalyticDerivative) {
  const SynthSpec s = floor_bounce();
  const SynthOutput out = generate(s);
  ASSERT_EQ(out.speed.samples.size(), static_cast<std::size_t>(20 * s.n_frames + 1));
  const double tb = out.bounce_times[0];
  for (const auto& sample : out.speed.samples) {
    // Before the hit: v = (10, 6 + 0.4 t).
    if (sample.t < tb - 1e-9) {
      EXPECT_NEAR(sample.speed, std::hypot(10.0, 6.0 + 0.4 * sample.t), 1e-9) << sample.t;
    }
  }
}

TEST(Generate, DeterministicForSeed) {
  SynthSpec s = floor_bounce();
  s.kernel_noise_sigma = 0.1;
  s.endpoint_noise_sigma = 0.7;
  s.seed = 123;
  const SynthOutput a = generate(s);
  const SynthOutput b = generate(s);
  s.seed = 124;
  const SynthOutput c = generate(s);
  bool differs = false;
  for (std::size_t i = 0; i < a.bundle.frames.size(); ++i) {
    EXPECT_EQ(a.bundle.frames[i].curve.start, b.bundle.frames[i].curve.start);
    EXPECT_EQ(a.bundle.frames[i].curve.end, b.bundle.frames[i].curve.end);
    EXPECT_EQ(*a.bundle.frames[i].kernel, *b.bundle.frames[i].kernel);
    differs = differs || a.bundle.frames[i].curve.start != c.bundle.frames[i].curve.start;
  }
  EXPECT_TRUE(differs);
}

TEST(Generate, DropoutAndNoKernels) {
  SynthSpec s;
  s.n_frames = 6;
  s.dropout = {2, 5};
  s.render_kernels = false;
  const SynthOutput out = generate(s);
  for (const auto& r : out.bundle.frames) {
    const bool dropped = r.curve.frame_index == 2 || r.curve.frame_index == 5;
    EXPECT_EQ(r.curve.present, !dropped);
    EXPECT_FALSE(r.kernel.has_value());
  }
}

TEST(Generate, SpecErrors) {
  auto kind_of = [](const SynthSpec& s) {
    try {
      generate(s);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::argument;
  };
  SynthSpec s;
  s.n_frames = 0;
  EXPECT_EQ(kind_of(s), ErrorKind::spec);
  s = SynthSpec{};
  s.initial_velocity = {300, 0};  // leaves 4x the 320 px width well within 20 frames
  EXPECT_EQ(kind_of(s), ErrorKind::spec);
  s = SynthSpec{};
  s.exposure = 1.5;
  EXPECT_EQ(kind_of(s), ErrorKind::spec);
  s = SynthSpec{};
  s.dropout = {21};
  EXPECT_EQ(kind_of(s), ErrorKind::spec);
  s = SynthSpec{};
  s.bounce_planes.push_back({PlaneAxis::x, 100, 0.0});
  EXPECT_EQ(kind_of(s), ErrorKind::spec);
}

TEST(GaussianSource, Moments) {
  GaussianSource g(77);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = g.normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.01);
  GaussianSource u(5);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

TEST(RenderStreak, MassOutsideImageIsDropped) {
  TrajectoryFn t;
  t.n_frames = 1;
  t.segments = {SegmentPoly::line(0, {-10.5, 5.5}, 1, {9.5, 5.5}, SegmentKind::fitted)};
  const BlurKernel k = render_streak(t, 0.0, 1.0, 32, 12);
  EXPECT_NEAR(k.sum(), 0.5, 0.02);
}

#include <gtest/gtest.h>

#include "tbdnc/core_types.hpp"

using namespace tbdnc;

namespace {

TrajectoryFn two_piece_line() {
  TrajectoryFn traj;
  traj.n_frames = 4;
  traj.exposure = 0.5;
  traj.segments.push_back(SegmentPoly::line(0.0, {0, 0}, 2.0, {4, 2}, SegmentKind::fitted));
  traj.segments.push_back(SegmentPoly::line(2.0, {4, 2}, 4.0, {4, 6}, SegmentKind::bounce_linear));
  return traj;
}

}  // namespace

TEST(BlurKernel, RejectsNegativeAndEmpty) {
  EXPECT_THROW(BlurKernel(0, 3), Error);
  EXPECT_THROW(BlurKernel(2, 2, {0.0, 1.0, -0.5, 0.0}), Error);
  EXPECT_THROW(BlurKernel(2, 2, {0.0, 1.0, 0.5}), Error);
  BlurKernel k(3, 2);
  EXPECT_THROW(k.set(3, 0, 1.0), Error);
  EXPECT_THROW(k.set(0, 0, -1.0), Error);
}

TEST(BlurKernel, RowMajorAccessAndTransforms) {
  BlurKernel k(3, 2, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(k.at(2, 0), 3);
  EXPECT_EQ(k.at(0, 1), 4);
  EXPECT_DOUBLE_EQ(k.sum(), 21.0);
  EXPECT_DOUBLE_EQ(k.max(), 6.0);

  const BlurKernel t = k.transposed();
  ASSERT_EQ(t.width(), 2);
  ASSERT_EQ(t.height(), 3);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 3; ++x) EXPECT_EQ(t.at(y, x), k.at(x, y));

  const BlurKernel m = k.mirrored_x();
  EXPECT_EQ(m.at(0, 0), 3);
  EXPECT_EQ(m.mirrored_x(), k);
}

TEST(BlurKernel, Normalization) {
  BlurKernel k(2, 1, {0.25, 0.75});
  EXPECT_TRUE(k.is_normalized());
  k.scale(2.0);
  EXPECT_FALSE(k.is_normalized());
}

TEST(DiscretePath, ImagePointsUndoFlipAndTranspose) {
  DiscretePath p;
  p.x_begin = 1;
  p.x_end = 3;
  p.rows = {5, 6, 7};
  p.frame_width = 10;
  auto pts = p.image_points();
  EXPECT_EQ(pts.front(), Point(1, 5));

  p.flipped = true;
  pts = p.image_points();
  EXPECT_EQ(pts.front(), Point(8, 5));
  EXPECT_EQ(pts.back(), Point(6, 7));

  p.axis = Axis::row_wise;
  pts = p.image_points();
  EXPECT_EQ(pts.front(), Point(5, 8));
}

TEST(DiscretePath, ValidateStepBound) {
  DiscretePath p;
  p.x_begin = 0;
  p.x_end = 2;
  p.rows = {0, 2, 5};
  EXPECT_THROW(p.validate(), Error);
  p.rows = {0, 2, 4};
  EXPECT_NO_THROW(p.validate());
  p.rows = {0, 2};
  EXPECT_THROW(p.validate(), Error);
}

TEST(SegmentPoly, LocalBasisMatchesGlobalCoefficients) {
  SegmentPoly s;
  s.t_start = 3.0;
  s.t_end = 7.0;
  s.degree = 2;
  s.origin = 5.0;
  s.scale = 2.0;
  s.coeffs.resize(2, 3);
  s.coeffs << 1.0, -2.0, 0.5,
              4.0, 0.25, 3.0;
  const auto g = s.global_coeffs();
  for (double t : {3.0, 4.1, 6.9}) {
    Point direct = Point::Zero();
    for (int k = 2; k >= 0; --k) direct = direct * t + g.col(k);
    EXPECT_NEAR((direct - s.eval(t)).norm(), 0.0, 1e-12);
  }
  // d/dt of u^2 with u = (t - 5) / 2 is (t - 5) / 2.
  const Point d = s.derivative(6.0);
  EXPECT_NEAR(d.x(), -2.0 / 2.0 + 0.5 * 2.0 * 0.5 / 2.0, 1e-12);
  EXPECT_NEAR(s.second_derivative(6.0).y(), 3.0 * 2.0 / 4.0, 1e-12);
}

TEST(SegmentPoly, LineHitsBothEnds) {
  const SegmentPoly s = SegmentPoly::line(1.0, {2, 3}, 4.0, {8, -3}, SegmentKind::gap_linear);
  EXPECT_EQ(s.degree, 1);
  EXPECT_NEAR((s.eval(1.0) - Point(2, 3)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((s.eval(4.0) - Point(8, -3)).norm(), 0.0, 1e-12);
  EXPECT_THROW(SegmentPoly::line(2.0, {0, 0}, 2.0, {1, 1}, SegmentKind::fitted), Error);
}

TEST(SegmentKind, StringRoundTrip) {
  for (auto k : {SegmentKind::fitted, SegmentKind::bounce_linear, SegmentKind::gap_linear,
                 SegmentKind::extrapolated}) {
    EXPECT_EQ(segment_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(segment_kind_from_string("spline"), Error);
}

TEST(TrajectoryFn, EvaluationUsesRightPieceAndClamps) {
  const TrajectoryFn traj = two_piece_line();
  EXPECT_NO_THROW(traj.validate());
  EXPECT_EQ(traj.piece_index(2.0), 1u);
  EXPECT_EQ(traj.derivative(2.0), Point(0, 2));
  EXPECT_EQ(traj.eval(-1.0), Point(0, 0));
  EXPECT_EQ(traj.eval(9.0), Point(4, 6));
  EXPECT_EQ(traj.max_breakpoint_gap(), 0.0);
}

TEST(TrajectoryFn, ValidateRejectsGapsAndJumps) {
  TrajectoryFn traj = two_piece_line();
  traj.segments[1] = SegmentPoly::line(2.5, {4, 2}, 4.0, {4, 6}, SegmentKind::fitted);
  EXPECT_THROW(traj.validate(), Error);

  traj = two_piece_line();
  traj.segments[1] = SegmentPoly::line(2.0, {4, 2.001}, 4.0, {4, 6}, SegmentKind::fitted);
  EXPECT_THROW(traj.validate(), Error);

  traj = two_piece_line();
  traj.segments.pop_back();
  EXPECT_THROW(traj.validate(), Error);

  traj = two_piece_line();
  traj.exposure = 1.5;
  EXPECT_THROW(traj.validate(), Error);
}

TEST(SequenceBundle, Validate) {
  SequenceBundle b;
  b.n_frames = 2;
  b.image_width = 10;
  b.image_height = 10;
  b.frames.push_back({FrameCurve::detected(1, {1, 1}, {2, 2}), std::nullopt});
  b.frames.push_back({FrameCurve::absent(2), std::nullopt});
  EXPECT_NO_THROW(b.validate());
  EXPECT_EQ(b.curves().size(), 2u);

  SequenceBundle far = b;
  far.frames[0].curve.end = {100, 2};
  EXPECT_THROW(far.validate(), Error);
  EXPECT_NO_THROW(far.validate(10.0));

  SequenceBundle wrong_kernel = b;
  wrong_kernel.frames[1].kernel = BlurKernel(3, 3);
  EXPECT_THROW(wrong_kernel.validate(), Error);

  SequenceBundle misordered = b;
  std::swap(misordered.frames[0], misordered.frames[1]);
  EXPECT_THROW(misordered.validate(), Error);

  SequenceBundle bad_fps = b;
  bad_fps.fps = 0.0;
  EXPECT_THROW(bad_fps.validate(), Error);

  SequenceBundle bad_radius = b;
  bad_radius.radius_px = -1.0;
  EXPECT_THROW(bad_radius.validate(), Error);
}

TEST(Params, Validate) {
  DpParams dp;
  EXPECT_NO_THROW(dp.validate());
  dp.kappa2 = -0.1;
  EXPECT_THROW(dp.validate(), Error);

  BounceParams bp;
  EXPECT_EQ(bp.window_px, 5);
  EXPECT_EQ(bp.angle_threshold_deg, 30.0);
  bp.angle_threshold_deg = 180.0;
  EXPECT_THROW(bp.validate(), Error);
}

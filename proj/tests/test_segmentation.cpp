#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "tbdnc/segmentation.hpp"

using namespace tbdnc;

namespace {

std::vector<FrameCurve> frames_from_starts(const std::vector<Point>& starts) {
  std::vector<FrameCurve> out;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const Point next = i + 1 < starts.size() ? starts[i + 1] : starts[i];
    out.push_back(FrameCurve::detected(static_cast<int>(i) + 1, starts[i], 0.5 * (starts[i] + next)));
  }
  return out;
}

DiscretePath column_path(int x0, const std::vector<int>& rows, int width) {
  DiscretePath p;
  p.x_begin = x0;
  p.x_end = x0 + static_cast<int>(rows.size()) - 1;
  p.rows = rows;
  p.frame_width = width;
  return p;
}

// y = 35 + |x - 65|, sampled per column: apex at x = 65.
int v_row(int x) { return 35 + std::abs(x - 65); }

}  // namespace

TEST(SplitNonintersecting, MonotoneMotionIsOnePart) {
  std::vector<Point> starts;
  for (int i = 0; i < 10; ++i) starts.emplace_back(10.0 * i, 50.0 + 3.0 * i);
  const auto parts = split_nonintersecting(frames_from_starts(starts));
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0], (FrameRange{1, 10}));
}

TEST(SplitNonintersecting, EitherAxisKeepsThePart) {
  std::vector<Point> starts;
  for (int i = 0; i < 5; ++i) starts.emplace_back(10.0 * i, 20.0 + 4.0 * i);
  for (int i = 1; i <= 5; ++i) starts.emplace_back(40.0 - 10.0 * i, 36.0 + 4.0 * i);
  const auto parts = split_nonintersecting(frames_from_starts(starts));
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0], (FrameRange{1, 10}));
}

TEST(SplitNonintersecting, PingPongSplitsWhereBothAxesTurn) {
  // Steps 1-3 go right/down, 4-7 left/down, 8-11 right/up, 12-15 left/up.
  std::vector<Point> starts{{100, 100}};
  const Point steps[] = {{8, 3}, {-8, 3}, {8, -3}, {-8, -3}};
  const int counts[] = {3, 4, 4, 4};
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < counts[k]; ++i) starts.push_back(starts.back() + steps[k]);
  ASSERT_EQ(starts.size(), 16u);
  const auto parts = split_nonintersecting(frames_from_starts(starts));
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0], (FrameRange{1, 8}));
  EXPECT_EQ(parts[1], (FrameRange{9, 16}));
}

TEST(SplitNonintersecting, ZeroStepsAreCompatibleAndAbsentFramesSkipped) {
  std::vector<FrameCurve> frames = frames_from_starts({{0, 0}, {5, 0}, {5, 0}, {9, 0}, {12, 0}});
  frames[2] = FrameCurve::absent(3);
  const auto parts = split_nonintersecting(frames);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0], (FrameRange{1, 5}));

  std::vector<FrameCurve> none{FrameCurve::absent(1), FrameCurve::absent(2)};
  try {
    split_nonintersecting(none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::empty_input);
  }
}

TEST(SplitNonintersecting, RangesPartitionPresentFrames) {
  std::vector<Point> starts;
  for (int i = 0; i < 30; ++i) starts.emplace_back(60.0 * std::sin(0.4 * i), 40.0 * std::cos(0.3 * i));
  auto frames = frames_from_starts(starts);
  frames[4] = FrameCurve::absent(5);
  const auto parts = split_nonintersecting(frames);
  int expect_first = 1;
  for (const auto& r : parts) {
    EXPECT_EQ(r.first, expect_first == 5 ? 6 : expect_first);
    EXPECT_LE(r.first, r.last);
    expect_first = r.last + 1;
  }
  EXPECT_EQ(parts.back().last, 30);
}

TEST(SplitSteepParts, ShallowWallReversalIsSplit) {
  // x turns at a wall while y keeps rising slowly: y alone cannot carry a
  // path through 10 px of x per px of y.
  const auto f = frames_from_starts({{0, 0}, {10, 1}, {20, 2}, {30, 3}, {20, 4}, {10, 5}});
  const auto base = split_nonintersecting(f);
  ASSERT_EQ(base.size(), 1u);
  const auto parts = split_steep_parts(f, base);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].first, 1);
  EXPECT_EQ(parts[0].last, 4);
  EXPECT_EQ(parts[1].first, 5);
  EXPECT_EQ(parts[1].last, 6);
}

TEST(SplitSteepParts, SteepFloorReversalIsKept) {
  // The surviving x axis has one px of x per 3 px of y: traceable.
  const auto f = frames_from_starts({{0, 0}, {3, 1}, {6, 2}, {9, 3}, {12, 2}, {15, 1}});
  EXPECT_EQ(split_steep_parts(f, split_nonintersecting(f)).size(), 1u);
  EXPECT_THROW(split_steep_parts(f, split_nonintersecting(f), 0.0), Error);
}

TEST(MonotoneAxes, StartPointsDecide) {
  const auto f = frames_from_starts({{0, 0}, {5, 4}, {10, 6}, {15, 4}});
  const MonotoneAxes both = monotone_axes(f, {1, 3});
  EXPECT_TRUE(both.x);
  EXPECT_TRUE(both.y);
  const MonotoneAxes only_x = monotone_axes(f, {1, 4});
  EXPECT_TRUE(only_x.x);
  EXPECT_FALSE(only_x.y);
}

TEST(DetectBounces, StraightLineHasNone) {
  std::vector<int> rows;
  for (int x = 0; x < 40; ++x) rows.push_back(x / 2);
  EXPECT_TRUE(detect_bounces(column_path(0, rows, 40), BounceParams{}).empty());
}

TEST(DetectBounces, VShapeGivesOneBounceAtApex) {
  std::vector<Point> pts;
  for (int i = 0; i <= 10; ++i) pts.emplace_back(i, 20 - i);
  for (int i = 1; i <= 10; ++i) pts.emplace_back(10 + i, 10 + i);
  const auto b = detect_bounces(pts, BounceParams{});
  ASSERT_EQ(b.size(), 1u);
  EXPECT_LE((b[0].position - Point(10, 10)).norm(), 1.0);
  EXPECT_EQ(b[0].origin, BounceOrigin::within_part);
}

TEST(DetectBounces, ShallowParabolaHasNone) {
  // Slope changes by at most ~10 degrees across any 2w = 10 px window.
  std::vector<int> rows;
  for (int x = 0; x < 60; ++x) rows.push_back(static_cast<int>(std::lround(0.008 * (x - 30) * (x - 30))));
  EXPECT_TRUE(detect_bounces(column_path(0, rows, 60), BounceParams{}).empty());
}

TEST(DetectBounces, ShortPathHasNone) {
  EXPECT_TRUE(detect_bounces(column_path(0, {0, 2, 4, 2, 0}, 10), BounceParams{}).empty());
}

TEST(DetectBounces, ReversalInvariance) {
  std::vector<Point> pts;
  for (int i = 0; i <= 14; ++i) pts.emplace_back(i, 30 - 2 * (i % 15));
  for (int i = 1; i <= 12; ++i) pts.emplace_back(14 + i, 2 + i);
  for (int i = 1; i <= 12; ++i) pts.emplace_back(26 + i, 14 - i / 2);
  auto fwd = detect_bounces(pts, BounceParams{});
  std::vector<Point> rev(pts.rbegin(), pts.rend());
  auto bwd = detect_bounces(rev, BounceParams{});
  ASSERT_EQ(fwd.size(), bwd.size());
  ASSERT_EQ(fwd.size(), 2u);
  for (std::size_t i = 0; i < fwd.size(); ++i) {
    EXPECT_NEAR((fwd[i].position - bwd[bwd.size() - 1 - i].position).norm(), 0.0, 1e-12);
  }
}

TEST(DetectBounces, CircleIsSplitOnce) {
  std::vector<Point> pts;
  Point last(1e9, 1e9);
  for (int i = 0; i <= 600; ++i) {
    const double a = M_PI * i / 600.0 * 1.5;
    const Point p(std::lround(50 + 30 * std::cos(a)), std::lround(50 + 30 * std::sin(a)));
    if (p != last) pts.push_back(p);
    last = p;
  }
  const auto b = detect_bounces(pts, BounceParams{});
  EXPECT_EQ(b.size(), 1u);
  BounceParams lax;
  lax.circle_split_deg = 359.0;
  EXPECT_TRUE(detect_bounces(pts, lax).empty());
}

TEST(AssignFrames, NoBouncesOneSegmentWithAllFrames) {
  std::vector<Point> starts;
  std::vector<int> rows;
  for (int i = 0; i < 8; ++i) starts.emplace_back(10.0 * i, 20.0);
  for (int x = 0; x <= 75; ++x) rows.push_back(20);
  const auto frames = frames_from_starts(starts);
  Part part{{1, 8}, column_path(0, rows, 80)};
  const auto segs = assign_frames(frames, {{}}, {part});
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].frame_list, (std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8}));
}

TEST(AssignFrames, FrameStraddlingBounceIsUnassigned) {
  const int n = 12;
  const double eps = 0.85;
  std::vector<FrameCurve> frames;
  auto at = [](double tau) { return Point(10.0 * tau, 35.0 + std::abs(10.0 * tau - 65.0)); };
  for (int t = 1; t <= n; ++t) frames.push_back(FrameCurve::detected(t, at(t - 1), at(t - 1 + eps)));
  std::vector<int> rows;
  for (int x = 0; x <= 119; ++x) rows.push_back(v_row(x));
  Part part{{1, n}, column_path(0, rows, 130)};
  const auto bounces = detect_bounces(oriented_path_points(part, frames), BounceParams{});
  ASSERT_EQ(bounces.size(), 1u);
  EXPECT_LE((bounces[0].position - Point(65, 35)).norm(), 1.0);

  const auto segs = assign_frames(frames, {bounces}, {part});
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_EQ(segs[0].frame_list, (std::vector<int>{1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(segs[1].frame_list, (std::vector<int>{8, 9, 10, 11, 12}));
}

TEST(AssignFrames, AbsentFramesJoinNoSegment) {
  std::vector<FrameCurve> frames;
  for (int t = 1; t <= 4; ++t) frames.push_back(FrameCurve::detected(t, {10.0 * t, 20}, {10.0 * t + 5, 20}));
  frames.push_back(FrameCurve::absent(5));
  frames.push_back(FrameCurve::absent(6));
  for (int t = 7; t <= 10; ++t) frames.push_back(FrameCurve::detected(t, {10.0 * (11 - t), 60}, {10.0 * (11 - t) - 5, 60}));
  std::vector<int> a(40, 20), b(40, 60);
  Part p1{{1, 4}, column_path(10, a, 100)};
  DiscretePath back = column_path(100 - 1 - 45, b, 100);
  back.flipped = true;
  Part p2{{7, 10}, back};
  const auto segs = assign_frames(frames, {{}, {}}, {p1, p2});
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_EQ(segs[0].frame_list, (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(segs[1].frame_list, (std::vector<int>{7, 8, 9, 10}));
}

TEST(Geometry, PointPolylineDistance) {
  const std::vector<Point> poly{{0, 0}, {10, 0}, {10, 10}};
  EXPECT_DOUBLE_EQ(point_polyline_distance({5, 3}, poly), 3.0);
  EXPECT_DOUBLE_EQ(point_polyline_distance({12, 5}, poly), 2.0);
  EXPECT_DOUBLE_EQ(point_polyline_distance({-3, -4}, poly), 5.0);
}

TEST(Geometry, NearestEndpointTime) {
  std::vector<FrameCurve> frames{FrameCurve::detected(1, {0, 0}, {8, 0}),
                                 FrameCurve::detected(2, {10, 0}, {18, 0})};
  EXPECT_DOUBLE_EQ(nearest_endpoint_time({9, 0}, frames, {1, 2}, 0.8), 0.8);
  EXPECT_DOUBLE_EQ(nearest_endpoint_time({11, 0}, frames, {1, 2}, 0.8), 1.0);
}

#pragma once

#include <vector>

#include "tbdnc/core_types.hpp"
#include "tbdnc/segmentation.hpp"

namespace tbdnc {

/// Mean ratio of in-frame streak length to the displacement of consecutive
/// start points, over consecutive present frame pairs, clamped to (0, 1].
/// Pairs whose displacement is below 1e-9 px are skipped.
double estimate_exposure(const std::vector<FrameCurve>& frames);

/// min(6, ceil(n / 3)) for a segment spanning n frames.
int segment_degree(int n_frames_in_segment);

struct FitProblem {
  int first_frame = 1;  // t_{s-1}
  int last_frame = 1;   // t_s
  std::vector<FrameCurve> frames;  // frames assigned to the segment
  int degree = 1;
  double exposure = 1.0;
  Point anchor_start = Point::Zero();  // hit at time of first_frame
  Point anchor_end = Point::Zero();    // hit at time of last_frame + exposure
};

struct FitOutcome {
  SegmentPoly poly;
  // The constrained system was singular; poly is the line through the anchors.
  bool degenerate = false;
};

/// Equality-constrained least squares: minimises the squared distance of
/// C_f(t) to every start point and of C_f(t + exposure) to every end point,
/// subject to passing exactly through both anchors. x and y decouple and
/// share one KKT matrix. The fit runs in u = (t - mid) / half_span; the
/// requested degree is lowered when there are too few distinct sample times.
FitOutcome fit_segment(const FitProblem& problem);

/// Degree-1 pieces from `from` at t0 through each kink to `to` at t1. Kink
/// times are proportional to arc length; kinks that would give a zero-length
/// piece are dropped.
std::vector<SegmentPoly> interpolate_chain(const Point& from, const std::vector<Point>& kinks,
                                           const Point& to, double t0, double t1,
                                           SegmentKind kind);

std::vector<SegmentPoly> interpolate_bounce_frame(const Point& prev_segment_end,
                                                  const Bounce& bounce,
                                                  const Point& next_segment_start,
                                                  double t0, double t1);

/// Extends the first piece back to 0 and the last forward to n_frames with
/// the same polynomials, marked `extrapolated`. Pieces must be contiguous.
std::vector<SegmentPoly> extrapolate_ends(std::vector<SegmentPoly> pieces, int n_frames);

}  // namespace tbdnc

#pragma once

#include <vector>

#include "tbdnc/core_types.hpp"

namespace tbdnc {

struct FrameRange {
  int first = 1;  // 1-based frame indices, inclusive
  int last = 1;

  friend bool operator==(const FrameRange&, const FrameRange&) = default;
};

/// Frames over which one image axis keeps its direction of motion, with the
/// discrete path extracted from their accumulated kernels.
struct Part {
  FrameRange frame_range;
  DiscretePath path;
};

enum class BounceOrigin { within_part, between_parts };

struct Bounce {
  Point position = Point::Zero();
  double time_hint = 0.0;
  BounceOrigin origin = BounceOrigin::within_part;
  // Position along the part's path (fractional point index); -1 when the
  // bounce does not come from a path.
  double path_index = -1.0;
};

/// Path piece between consecutive bounces of one part, with the frames whose
/// two endpoints are both nearest to it.
struct Segment {
  int part_index = 0;
  std::vector<Point> polyline;
  std::vector<int> frame_list;  // ascending frame indices
  Point boundary_start = Point::Zero();
  Point boundary_end = Point::Zero();
};

/// Maximal runs of present frames where sign(dx) or sign(dy) of the
/// frame-to-frame start-point motion stays constant. Absent frames neither
/// join nor break a run; the returned ranges span present frames only.
std::vector<FrameRange> split_nonintersecting(const std::vector<FrameCurve>& frames);

/// Subdivides each range at a reversal of one axis when the part would then
/// depend on the other axis alone and some frame-to-frame chord is steeper
/// than `max_slope` along it, so every part stays traceable by a path with
/// at most `max_slope` cross-axis pixels per step.
std::vector<FrameRange> split_steep_parts(const std::vector<FrameCurve>& frames,
                                          const std::vector<FrameRange>& ranges, double max_slope = 2.0);

struct MonotoneAxes {
  bool x = true;
  bool y = true;
};

/// Axes along which the start points of the present frames in `range` never
/// reverse direction (start to end for a single frame).
MonotoneAxes monotone_axes(const std::vector<FrameCurve>& frames, const FrameRange& range);

std::vector<Bounce> detect_bounces(const DiscretePath& path, const BounceParams& params);

// Image-space variant on an arbitrary polyline with unit-ish steps.
std::vector<Bounce> detect_bounces(const std::vector<Point>& points, const BounceParams& params);

/// Splits each part's path at its bounces and assigns frames. `bounces[i]`
/// holds the within-part bounces of `parts[i]`, ordered along its path.
/// Segments come back in time order; frames straddling a bounce (or whose
/// endpoints disagree with the time order of segments) are left unassigned.
std::vector<Segment> assign_frames(const std::vector<FrameCurve>& frames,
                                   const std::vector<std::vector<Bounce>>& bounces,
                                   const std::vector<Part>& parts);

/// Path pixels of a part, in image coordinates, oriented so the first point
/// is nearest the part's first causal start.
std::vector<Point> oriented_path_points(const Part& part, const std::vector<FrameCurve>& frames);

double point_polyline_distance(const Point& p, const std::vector<Point>& polyline);

/// Time of the frame endpoint closest to `p` among the frames of `range`.
double nearest_endpoint_time(const Point& p, const std::vector<FrameCurve>& frames,
                             const FrameRange& range, double exposure);

}  // namespace tbdnc

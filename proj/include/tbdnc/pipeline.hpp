#pragma once

#include <vector>

#include "tbdnc/core_types.hpp"
#include "tbdnc/dp_solver.hpp"
#include "tbdnc/polyfit.hpp"
#include "tbdnc/segmentation.hpp"

namespace tbdnc {

struct PipelineConfig {
  DpParams dp;
  BounceParams bounce;
  // Upper bound on the per-segment degree; 2 restricts fits to parabolas.
  int max_degree = 6;
  // Rescale each frame kernel to unit peak before accumulation, so the data
  // term is on the same scale as the kappa penalties.
  bool normalize_kernel_peak = true;
  // Split parts whose only monotone axis is too steep for the path search.
  bool split_steep_parts = true;
  // Snap a within-part bounce to the meeting point of the neighbouring
  // fitted polynomials when that point lies within the bounce window.
  bool refine_bounces = true;
  // Leave out of a segment's fit an edge frame whose chord turns against its
  // neighbour's by more than the bounce angle, and pass through an estimated
  // hit point inside that frame instead.
  bool trim_straddling_frames = true;
  // Exposure used when only one frame is detected (no ratio can be formed).
  double single_frame_exposure = 1.0;
  // Re-estimate the exposure by minimising the total fit residual over a
  // window around the chord-ratio estimate.
  bool refine_exposure = true;
  double exposure_search_radius = 0.1;

  void validate() const;
};

struct StitchResult {
  TrajectoryFn trajectory;
  double exposure = 1.0;
  std::vector<Part> parts;
  std::vector<Segment> segments;
  // Within-part and between-part bounces, in time order.
  std::vector<Bounce> bounces;
  int fitted_segments = 0;
};

/// Parts, discrete paths, bounces, constrained fits and the stitched
/// trajectory for one sequence.
StitchResult stitch(const SequenceBundle& sequence, const PipelineConfig& config = {});

TrajectoryFn build_trajectory(const SequenceBundle& sequence, const PipelineConfig& config = {});

/// Midpoint of the closest pair between a(t) and b(t), t in [t0, t1].
Point closest_approach(const SegmentPoly& a, const SegmentPoly& b, double t0, double t1,
                       double* distance = nullptr);

}  // namespace tbdnc

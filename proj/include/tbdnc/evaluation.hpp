#pragma once

#include <optional>
#include <vector>

#include "tbdnc/core_types.hpp"
#include "tbdnc/physics.hpp"

namespace tbdnc {

inline constexpr int kTiouSamplesPerFrame = 10;

struct EvalReport {
  double tiou = 0.0;
  double recall = 0.0;
  std::optional<double> mean_speed_abs_error;
  std::vector<double> per_frame_tiou;  // one entry per evaluated frame
  std::vector<int> frames;             // frame index of each entry
};

/// IoU of two disks of radius r.
double disk_iou(const Point& c1, const Point& c2, double r);

/// Mean disk IoU at t + eps * (k + 0.5) / 10, k = 0..9, where t is the
/// frame's start time and eps the ground-truth exposure.
double tiou(const TrajectoryFn& estimated, const GroundTruth& gt, int frame);

/// Per-frame TIoU over frames 1..min(N_est, N_gt), their mean, recall
/// (share of frames with TIoU > 0) and, with speed_gt, the mean absolute
/// difference to |C_f'| at the ground-truth sample times.
EvalReport sequence_report(const TrajectoryFn& estimated, const GroundTruth& gt,
                           const std::optional<SpeedProfile>& speed_gt = std::nullopt);

}  // namespace tbdnc

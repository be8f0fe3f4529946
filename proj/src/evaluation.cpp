#include "tbdnc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tbdnc {

double disk_iou(const Point& c1, const Point& c2, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::argument, "disk radius must be positive");
  const double d = (c1 - c2).norm();
  if (d >= 2.0 * r) return 0.0;
  const double inter =
      2.0 * r * r * std::acos(d / (2.0 * r)) - 0.5 * d * std::sqrt(4.0 * r * r - d * d);
  return inter / (2.0 * std::numbers::pi * r * r - inter);
}

double tiou(const TrajectoryFn& estimated, const GroundTruth& gt, int frame) {
  if (frame < 1 || frame > gt.trajectory.n_frames) {
    throw Error(ErrorKind::argument, "ground truth does not cover frame " + std::to_string(frame));
  }
  const double t0 = frame_start_time(frame);
  const double eps = gt.trajectory.exposure;
  double acc = 0.0;
  for (int k = 0; k < kTiouSamplesPerFrame; ++k) {
    const double t = t0 + eps * (k + 0.5) / kTiouSamplesPerFrame;
    acc += disk_iou(estimated.eval(t), gt.trajectory.eval(t), gt.mask_radius_px);
  }
  return acc / kTiouSamplesPerFrame;
}

EvalReport sequence_report(const TrajectoryFn& estimated, const GroundTruth& gt,
                           const std::optional<SpeedProfile>& speed_gt) {
  const int n = std::min(estimated.n_frames, gt.trajectory.n_frames);
  if (n < 1) throw Error(ErrorKind::empty_report, "no overlapping frames to evaluate");
  EvalReport report;
  double sum = 0.0;
  int hits = 0;
  for (int f = 1; f <= n; ++f) {
    const double v = tiou(estimated, gt, f);
    report.per_frame_tiou.push_back(v);
    report.frames.push_back(f);
    sum += v;
    if (v > 0.0) ++hits;
  }
  report.tiou = sum / n;
  report.recall = static_cast<double>(hits) / n;
  if (speed_gt && !speed_gt->samples.empty()) {
    double err = 0.0;
    for (const auto& s : speed_gt->samples) {
      err += std::abs(estimated.derivative(s.t).norm() - s.speed);
    }
    report.mean_speed_abs_error = err / static_cast<double>(speed_gt->samples.size());
  }
  return report;
}

}  // namespace tbdnc

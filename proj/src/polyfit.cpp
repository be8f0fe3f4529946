#include "tbdnc/polyfit.hpp"

#include <algorithm>
#include <cmath>

namespace tbdnc {

double estimate_exposure(const std::vector<FrameCurve>& frames) {
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
    const FrameCurve& a = frames[i];
    const FrameCurve& b = frames[i + 1];
    if (!a.present || !b.present || b.frame_index != a.frame_index + 1) continue;
    const double step = (b.start - a.start).norm();
    if (step < 1e-9) continue;
    sum += (a.end - a.start).norm() / step;
    ++count;
  }
  if (count == 0) {
    throw Error(ErrorKind::exposure_undefined,
                "exposure needs two consecutive detections with distinct starts");
  }
  const double eps = sum / count;
  if (!(eps > 0.0)) {
    throw Error(ErrorKind::exposure_undefined, "all detected streaks have zero length");
  }
  return std::min(eps, 1.0);
}

int segment_degree(int n_frames_in_segment) {
  if (n_frames_in_segment <= 0) {
    throw Error(ErrorKind::argument, "segment must span at least one frame");
  }
  return std::clamp((n_frames_in_segment + 2) / 3, 1, 6);
}

FitOutcome fit_segment(const FitProblem& problem) {
  if (problem.last_frame < problem.first_frame) {
    throw Error(ErrorKind::argument, "segment frame range is empty");
  }
  if (!(problem.exposure > 0.0 && problem.exposure <= 1.0)) {
    throw Error(ErrorKind::argument, "exposure must lie in (0, 1]");
  }
  if (!problem.anchor_start.allFinite() || !problem.anchor_end.allFinite()) {
    throw Error(ErrorKind::argument, "segment anchors must be finite");
  }
  const double t0 = frame_start_time(problem.first_frame);
  const double t1 = frame_start_time(problem.last_frame) + problem.exposure;
  const double origin = 0.5 * (t0 + t1);
  const double half = 0.5 * (t1 - t0);

  std::vector<double> times;
  std::vector<Point> targets;
  for (const FrameCurve& f : problem.frames) {
    if (!f.present) continue;
    times.push_back(frame_start_time(f.frame_index));
    targets.push_back(f.start);
    times.push_back(frame_start_time(f.frame_index) + problem.exposure);
    targets.push_back(f.end);
  }

  std::vector<double> distinct = times;
  distinct.push_back(t0);
  distinct.push_back(t1);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const int degree = std::clamp(std::min(problem.degree, static_cast<int>(distinct.size()) - 1), 1, 6);
  const int n = degree + 1;

  FitOutcome out;
  out.poly.t_start = t0;
  out.poly.t_end = t1;
  out.poly.origin = origin;
  out.poly.scale = half;
  out.poly.kind = SegmentKind::fitted;

  auto basis_row = [&](double t) {
    Eigen::RowVectorXd row(n);
    const double u = (t - origin) / half;
    double p = 1.0;
    for (int k = 0; k < n; ++k) {
      row(k) = p;
      p *= u;
    }
    return row;
  };

  // [A'A  G'] [c]   [A'b]
  // [G    0 ] [l] = [r  ]
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 2, n + 2);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + 2, 2);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Eigen::RowVectorXd row = basis_row(times[i]);
    kkt.topLeftCorner(n, n) += row.transpose() * row;
    rhs.topRows(n) += row.transpose() * targets[i].transpose();
  }
  const Eigen::RowVectorXd g0 = basis_row(t0);
  const Eigen::RowVectorXd g1 = basis_row(t1);
  kkt.block(n, 0, 1, n) = g0;
  kkt.block(n + 1, 0, 1, n) = g1;
  kkt.block(0, n, n, 1) = g0.transpose();
  kkt.block(0, n + 1, n, 1) = g1.transpose();
  rhs.row(n) = problem.anchor_start.transpose();
  rhs.row(n + 1) = problem.anchor_end.transpose();

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(kkt);
  Eigen::MatrixXd sol;
  bool ok = lu.rcond() > 1e-13;
  if (ok) {
    sol = lu.solve(rhs);
    ok = sol.allFinite();
  }
  if (!ok) {
    out.degenerate = true;
    out.poly.degree = 1;
    out.poly.coeffs.resize(2, 2);
    out.poly.coeffs.col(0) = 0.5 * (problem.anchor_start + problem.anchor_end);
    out.poly.coeffs.col(1) = 0.5 * (problem.anchor_end - problem.anchor_start);
    return out;
  }
  out.poly.degree = degree;
  out.poly.coeffs = sol.topRows(n).transpose();
  return out;
}

std::vector<SegmentPoly> interpolate_chain(const Point& from, const std::vector<Point>& kinks,
                                           const Point& to, double t0, double t1,
                                           SegmentKind kind) {
  if (!(t0 < t1)) throw Error(ErrorKind::argument, "interpolation needs t0 < t1");
  std::vector<Point> pts{from};
  pts.insert(pts.end(), kinks.begin(), kinks.end());
  pts.push_back(to);

  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) cum.push_back(cum.back() + (pts[i] - pts[i - 1]).norm());
  const double total = cum.back();
  if (!(total > 0.0)) return {SegmentPoly::line(t0, from, t1, to, kind)};

  constexpr double kMinFraction = 1e-9;
  std::vector<std::size_t> keep{0};
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double f = cum[i] / total;
    if (f - cum[keep.back()] / total > kMinFraction && 1.0 - f > kMinFraction) keep.push_back(i);
  }
  keep.push_back(pts.size() - 1);

  std::vector<SegmentPoly> out;
  double ts = t0;
  for (std::size_t j = 1; j < keep.size(); ++j) {
    const bool last = j + 1 == keep.size();
    const double te = last ? t1 : t0 + (t1 - t0) * (cum[keep[j]] / total);
    if (!(te > ts)) continue;
    out.push_back(SegmentPoly::line(ts, out.empty() ? from : out.back().eval(ts),
                                    te, pts[keep[j]], kind));
    ts = te;
  }
  if (out.empty()) return {SegmentPoly::line(t0, from, t1, to, kind)};
  return out;
}

std::vector<SegmentPoly> interpolate_bounce_frame(const Point& prev_segment_end,
                                                  const Bounce& bounce,
                                                  const Point& next_segment_start,
                                                  double t0, double t1) {
  const SegmentKind kind = bounce.origin == BounceOrigin::within_part ? SegmentKind::bounce_linear
                                                                      : SegmentKind::gap_linear;
  return interpolate_chain(prev_segment_end, {bounce.position}, next_segment_start, t0, t1, kind);
}

std::vector<SegmentPoly> extrapolate_ends(std::vector<SegmentPoly> pieces, int n_frames) {
  if (pieces.empty()) throw Error(ErrorKind::empty_input, "nothing to extrapolate");
  const double n = static_cast<double>(n_frames);
  if (pieces.front().t_start > 0.0) {
    SegmentPoly head = pieces.front();
    head.t_end = head.t_start;
    head.t_start = 0.0;
    head.kind = SegmentKind::extrapolated;
    pieces.insert(pieces.begin(), std::move(head));
  }
  if (pieces.back().t_end < n) {
    SegmentPoly tail = pieces.back();
    tail.t_start = tail.t_end;
    tail.t_end = n;
    tail.kind = SegmentKind::extrapolated;
    pieces.push_back(std::move(tail));
  }
  return pieces;
}

}  // namespace tbdnc

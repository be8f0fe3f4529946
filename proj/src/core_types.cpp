#include "tbdnc/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tbdnc {

BlurKernel::BlurKernel(int width, int height)
    : BlurKernel(width, height,
                 std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                         static_cast<std::size_t>(std::max(height, 0)),
                                     0.0)) {}

BlurKernel::BlurKernel(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::dimension, "blur kernel must be at least 1x1");
  }
  if (values_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorKind::dimension, "blur kernel value count does not match its size");
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorKind::argument, "blur kernel values must be finite and non-negative");
    }
  }
}

void BlurKernel::set(int x, int y, double v) {
  if (!contains(x, y)) throw Error(ErrorKind::bounds, "kernel index out of range");
  if (!std::isfinite(v) || v < 0.0) {
    throw Error(ErrorKind::argument, "blur kernel values must be finite and non-negative");
  }
  values_[index(x, y)] = v;
}

void BlurKernel::add(int x, int y, double v) { set(x, y, at(x, y) + v); }

double BlurKernel::sum() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

double BlurKernel::max() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

bool BlurKernel::is_normalized(double tol) const { return std::abs(sum() - 1.0) <= tol; }

BlurKernel BlurKernel::transposed() const {
  std::vector<double> out(values_.size());
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      out[static_cast<std::size_t>(x) * static_cast<std::size_t>(height_) +
          static_cast<std::size_t>(y)] = at(x, y);
    }
  }
  return BlurKernel(height_, width_, std::move(out));
}

BlurKernel BlurKernel::mirrored_x() const {
  std::vector<double> out(values_.size());
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      out[index(width_ - 1 - x, y)] = at(x, y);
    }
  }
  return BlurKernel(width_, height_, std::move(out));
}

void BlurKernel::scale(double factor) {
  if (!std::isfinite(factor) || factor < 0.0) {
    throw Error(ErrorKind::argument, "kernel scale factor must be finite and non-negative");
  }
  for (double& v : values_) v *= factor;
}

std::vector<Point> DiscretePath::image_points() const {
  std::vector<Point> pts;
  pts.reserve(rows.size());
  for (int i = 0; i < length(); ++i) {
    int u = x_begin + i;
    if (flipped) u = frame_width - 1 - u;
    const int v = rows[static_cast<std::size_t>(i)];
    if (axis == Axis::column_wise) {
      pts.emplace_back(u, v);
    } else {
      pts.emplace_back(v, u);
    }
  }
  return pts;
}

void DiscretePath::validate() const {
  if (x_begin > x_end) throw Error(ErrorKind::argument, "path x_begin exceeds x_end");
  if (length() != x_end - x_begin + 1) {
    throw Error(ErrorKind::argument, "path row count does not match its column span");
  }
  for (int i = 1; i < length(); ++i) {
    if (std::abs(rows[static_cast<std::size_t>(i)] - rows[static_cast<std::size_t>(i - 1)]) > 2) {
      throw Error(ErrorKind::argument, "path step exceeds 2 rows");
    }
  }
}

std::string to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::fitted: return "fitted";
    case SegmentKind::bounce_linear: return "bounce_linear";
    case SegmentKind::gap_linear: return "gap_linear";
    case SegmentKind::extrapolated: return "extrapolated";
  }
  return "fitted";
}

SegmentKind segment_kind_from_string(const std::string& name) {
  if (name == "fitted") return SegmentKind::fitted;
  if (name == "bounce_linear") return SegmentKind::bounce_linear;
  if (name == "gap_linear") return SegmentKind::gap_linear;
  if (name == "extrapolated") return SegmentKind::extrapolated;
  throw Error(ErrorKind::argument, "unknown segment kind '" + name + "'");
}

Point SegmentPoly::eval(double t) const {
  const double u = (t - origin) / scale;
  Point acc = Point::Zero();
  for (int k = static_cast<int>(coeffs.cols()) - 1; k >= 0; --k) {
    acc = acc * u + coeffs.col(k);
  }
  return acc;
}

Point SegmentPoly::derivative(double t) const {
  const double u = (t - origin) / scale;
  Point acc = Point::Zero();
  for (int k = static_cast<int>(coeffs.cols()) - 1; k >= 1; --k) {
    acc = acc * u + static_cast<double>(k) * coeffs.col(k);
  }
  return acc / scale;
}

Point SegmentPoly::second_derivative(double t) const {
  const double u = (t - origin) / scale;
  Point acc = Point::Zero();
  for (int k = static_cast<int>(coeffs.cols()) - 1; k >= 2; --k) {
    acc = acc * u + static_cast<double>(k * (k - 1)) * coeffs.col(k);
  }
  return acc / (scale * scale);
}

Eigen::Matrix<double, 2, Eigen::Dynamic> SegmentPoly::global_coeffs() const {
  const int n = static_cast<int>(coeffs.cols());
  Eigen::Matrix<double, 2, Eigen::Dynamic> out =
      Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, n);
  // ((t - o) / s)^k = s^-k * sum_j C(k, j) t^j (-o)^(k - j)
  for (int k = 0; k < n; ++k) {
    const double sk = std::pow(scale, -k);
    double binom = 1.0;
    for (int j = 0; j <= k; ++j) {
      if (j > 0) binom = binom * static_cast<double>(k - j + 1) / static_cast<double>(j);
      const double term = sk * binom * std::pow(-origin, k - j);
      out.col(j) += term * coeffs.col(k);
    }
  }
  return out;
}

SegmentPoly SegmentPoly::line(double t0, const Point& p0, double t1, const Point& p1,
                              SegmentKind kind) {
  if (!(t0 < t1)) throw Error(ErrorKind::argument, "line piece requires t0 < t1");
  SegmentPoly piece;
  piece.t_start = t0;
  piece.t_end = t1;
  piece.degree = 1;
  piece.origin = t0;
  piece.scale = t1 - t0;
  piece.coeffs.resize(2, 2);
  piece.coeffs.col(0) = p0;
  piece.coeffs.col(1) = p1 - p0;
  piece.kind = kind;
  return piece;
}

void SegmentPoly::validate() const {
  if (!(t_start < t_end)) throw Error(ErrorKind::argument, "segment requires t_start < t_end");
  if (degree < 1 || degree > 6) throw Error(ErrorKind::argument, "segment degree must be in [1, 6]");
  if (coeffs.cols() != degree + 1) {
    throw Error(ErrorKind::argument, "segment coefficient count does not match degree");
  }
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(origin)) {
    throw Error(ErrorKind::argument, "segment time basis must be finite with positive scale");
  }
  if (!coeffs.allFinite() || !eval(t_start).allFinite() || !eval(t_end).allFinite()) {
    throw Error(ErrorKind::argument, "segment evaluates to a non-finite point");
  }
}

std::size_t TrajectoryFn::piece_index(double t) const {
  if (segments.empty()) throw Error(ErrorKind::empty_input, "trajectory has no segments");
  auto it = std::upper_bound(segments.begin(), segments.end(), t,
                             [](double v, const SegmentPoly& s) { return v < s.t_start; });
  if (it == segments.begin()) return 0;
  return static_cast<std::size_t>(std::distance(segments.begin(), it) - 1);
}

Point TrajectoryFn::eval(double t) const {
  const double tc = std::clamp(t, 0.0, static_cast<double>(n_frames));
  return segments[piece_index(tc)].eval(tc);
}

Point TrajectoryFn::derivative(double t) const {
  const double tc = std::clamp(t, 0.0, static_cast<double>(n_frames));
  return segments[piece_index(tc)].derivative(tc);
}

double TrajectoryFn::max_breakpoint_gap() const {
  double worst = 0.0;
  for (std::size_t i = 1; i < segments.size(); ++i) {
    const double t = segments[i].t_start;
    worst = std::max(worst, (segments[i - 1].eval(t) - segments[i].eval(t)).norm());
  }
  return worst;
}

void TrajectoryFn::validate(double continuity_tol) const {
  if (n_frames < 1) throw Error(ErrorKind::argument, "trajectory needs at least one frame");
  if (!(exposure > 0.0 && exposure <= 1.0)) {
    throw Error(ErrorKind::argument, "exposure must lie in (0, 1]");
  }
  if (segments.empty()) throw Error(ErrorKind::empty_input, "trajectory has no segments");
  if (segments.front().t_start != 0.0 ||
      segments.back().t_end != static_cast<double>(n_frames)) {
    throw Error(ErrorKind::argument, "trajectory must cover [0, N]");
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    segments[i].validate();
    if (i > 0 && segments[i].t_start != segments[i - 1].t_end) {
      throw Error(ErrorKind::argument, "trajectory segments must abut without gaps");
    }
  }
  if (max_breakpoint_gap() > continuity_tol) {
    throw Error(ErrorKind::argument, "trajectory is discontinuous at a breakpoint");
  }
}

void GroundTruth::validate() const {
  if (!(mask_radius_px > 0.0)) throw Error(ErrorKind::argument, "mask radius must be positive");
  trajectory.validate(1e-6);
}

std::vector<FrameCurve> SequenceBundle::curves() const {
  std::vector<FrameCurve> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(f.curve);
  return out;
}

void SequenceBundle::validate(double margin_factor) const {
  if (n_frames < 0) throw Error(ErrorKind::argument, "frame count must be non-negative");
  if (!(fps > 0.0) || !std::isfinite(fps)) throw Error(ErrorKind::argument, "fps must be positive");
  if (image_width < 1 || image_height < 1) {
    throw Error(ErrorKind::argument, "image size must be positive");
  }
  if (radius_px && !(*radius_px > 0.0)) throw Error(ErrorKind::argument, "radius must be positive");
  if (static_cast<int>(frames.size()) != n_frames) {
    throw Error(ErrorKind::argument, "frame list length must equal n_frames");
  }
  const double mx = margin_factor * image_width;
  const double my = margin_factor * image_height;
  auto inside = [&](const Point& p) {
    return p.allFinite() && p.x() >= -mx && p.x() <= image_width + mx && p.y() >= -my &&
           p.y() <= image_height + my;
  };
  for (int i = 0; i < n_frames; ++i) {
    const auto& rec = frames[static_cast<std::size_t>(i)];
    if (rec.curve.frame_index != i + 1) {
      throw Error(ErrorKind::argument, "frames must be ordered by frame_index starting at 1");
    }
    if (rec.curve.present && (!inside(rec.curve.start) || !inside(rec.curve.end))) {
      throw Error(ErrorKind::bounds, "frame " + std::to_string(i + 1) +
                                         " endpoints lie outside the admissible domain");
    }
    if (rec.kernel && (rec.kernel->width() != image_width ||
                       rec.kernel->height() != image_height)) {
      throw Error(ErrorKind::dimension, "frame " + std::to_string(i + 1) +
                                            " kernel size differs from the image size");
    }
  }
  if (ground_truth) ground_truth->validate();
}

void DpParams::validate() const {
  if (!(kappa1 >= 0.0 && kappa2 >= 0.0 && kappa3 >= 0.0)) {
    throw Error(ErrorKind::argument, "kappa parameters must be non-negative");
  }
}

void BounceParams::validate() const {
  if (window_px < 1) throw Error(ErrorKind::argument, "bounce window must be at least 1 px");
  if (!(angle_threshold_deg > 0.0 && angle_threshold_deg < 180.0)) {
    throw Error(ErrorKind::argument, "bounce angle threshold must lie in (0, 180)");
  }
  if (!(circle_split_deg > 0.0)) {
    throw Error(ErrorKind::argument, "circle split angle must be positive");
  }
}

}  // namespace tbdnc

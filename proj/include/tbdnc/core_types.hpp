#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tbdnc/errors.hpp"

namespace tbdnc {

// Image coordinates: origin at the top-left pixel center, x right, y down.
using Point = Eigen::Vector2d;

// Frame t (1-based) is exposed during [t - 1, t - 1 + exposure] in sequence
// time, so the trajectory domain [0, N] holds every frame.
inline double frame_start_time(int frame_index) {
  return static_cast<double>(frame_index - 1);
}

/// Per-frame non-negative evidence grid, row-major, indexed (x: column, y: row).
class BlurKernel {
 public:
  BlurKernel() = default;
  BlurKernel(int width, int height);
  BlurKernel(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  double at(int x, int y) const { return values_[index(x, y)]; }
  void set(int x, int y, double v);
  void add(int x, int y, double v);
  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  const std::vector<double>& values() const { return values_; }

  double sum() const;
  double max() const;
  bool is_normalized(double tol = 1e-6) const;

  BlurKernel transposed() const;
  BlurKernel mirrored_x() const;
  void scale(double factor);

  friend bool operator==(const BlurKernel&, const BlurKernel&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

/// Causal per-frame estimate: start = C_t(0), end = C_t(1). When `present` is
/// false the endpoints carry no information.
struct FrameCurve {
  int frame_index = 1;
  bool present = false;
  Point start = Point::Zero();
  Point end = Point::Zero();

  static FrameCurve absent(int frame_index) { return {frame_index, false, {}, {}}; }
  static FrameCurve detected(int frame_index, const Point& start, const Point& end) {
    return {frame_index, true, start, end};
  }
};

enum class Axis { column_wise, row_wise };

/// Discrete path y = rows[x - x_begin] over working-frame columns
/// [x_begin, x_end]. The working frame is the kernel after the optional
/// transpose (row_wise) and left-right flip; `frame_width` is the working
/// width, needed to undo the flip.
struct DiscretePath {
  int x_begin = 0;
  int x_end = 0;
  std::vector<int> rows;
  Axis axis = Axis::column_wise;
  bool flipped = false;
  int frame_width = 1;

  int length() const { return static_cast<int>(rows.size()); }

  // Path pixels in image coordinates, in traversal order (start to end).
  std::vector<Point> image_points() const;

  void validate() const;
};

enum class SegmentKind { fitted, bounce_linear, gap_linear, extrapolated };

std::string to_string(SegmentKind kind);
SegmentKind segment_kind_from_string(const std::string& name);

/// One polynomial piece of the trajectory. Coefficients are stored in the
/// local variable u = (t - origin) / scale; columns of `coeffs` are the
/// per-power (x, y) pairs.
struct SegmentPoly {
  double t_start = 0.0;
  double t_end = 1.0;
  int degree = 1;
  double origin = 0.0;
  double scale = 1.0;
  Eigen::Matrix<double, 2, Eigen::Dynamic> coeffs;
  SegmentKind kind = SegmentKind::fitted;

  Point eval(double t) const;
  Point derivative(double t) const;
  Point second_derivative(double t) const;

  // Same polynomial expanded in powers of global time t.
  Eigen::Matrix<double, 2, Eigen::Dynamic> global_coeffs() const;

  // Degree-1 piece from p0 at t0 to p1 at t1 (t0 < t1).
  static SegmentPoly line(double t0, const Point& p0, double t1, const Point& p1,
                          SegmentKind kind);

  void validate() const;
};

/// Continuous piecewise-polynomial C_f(t) over [0, n_frames].
struct TrajectoryFn {
  int n_frames = 0;
  double exposure = 1.0;
  std::vector<SegmentPoly> segments;

  // Evaluation clamps t to [0, N]; at a breakpoint the right piece is used.
  Point eval(double t) const;
  Point derivative(double t) const;
  std::size_t piece_index(double t) const;

  // Largest |left - right| mismatch over interior breakpoints.
  double max_breakpoint_gap() const;

  void validate(double continuity_tol = 1e-9) const;
};

struct GroundTruth {
  TrajectoryFn trajectory;
  double mask_radius_px = 1.0;

  void validate() const;
};

struct FrameRecord {
  FrameCurve curve;
  std::optional<BlurKernel> kernel;
};

struct SequenceBundle {
  int n_frames = 0;
  double fps = 30.0;
  int image_width = 0;
  int image_height = 0;
  std::optional<double> radius_px;
  std::vector<FrameRecord> frames;
  std::optional<GroundTruth> ground_truth;
  // Unknown top-level keys kept verbatim (JSON text) by lenient reads.
  std::map<std::string, std::string> extra_fields;

  std::vector<FrameCurve> curves() const;

  // `margin_factor` extends the admissible coordinate box by that many image
  // sizes on each side.
  void validate(double margin_factor = 2.0) const;
};

struct DpParams {
  double kappa1 = 0.1;
  double kappa2 = 0.1;
  double kappa3 = 0.1;
  bool exact_state = true;

  void validate() const;
};

struct BounceParams {
  int window_px = 5;
  double angle_threshold_deg = 30.0;
  // Total turn of a bounce-free path above which it is split at its point of
  // maximum curvature (circular motion).
  double circle_split_deg = 120.0;

  void validate() const;
};

}  // namespace tbdnc

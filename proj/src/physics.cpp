#include "tbdnc/physics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tbdnc {

std::string to_string(SpeedUnit unit) {
  switch (unit) {
    case SpeedUnit::px_per_exposure: return "px_per_exposure";
    case SpeedUnit::radii_per_exposure: return "radii_per_exposure";
    case SpeedUnit::meters_per_second: return "meters_per_second";
    case SpeedUnit::mph: return "mph";
  }
  return "px_per_exposure";
}

double SpeedProfile::peak() const {
  double best = 0.0;
  for (const auto& s : samples) best = std::max(best, s.speed);
  return best;
}

double SpeedProfile::median() const {
  if (samples.empty()) throw Error(ErrorKind::empty_input, "speed profile is empty");
  std::vector<double> v;
  v.reserve(samples.size());
  for (const auto& s : samples) v.push_back(s.speed);
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void SpeedProfile::validate() const {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].speed >= 0.0)) throw Error(ErrorKind::argument, "speeds must be non-negative");
    if (i > 0 && !(samples[i].t > samples[i - 1].t)) {
      throw Error(ErrorKind::argument, "speed sample times must increase strictly");
    }
  }
}

void Calibration::validate() const {
  if (!(meters_per_pixel > 0.0 && fps > 0.0 && gravity > 0.0)) {
    throw Error(ErrorKind::argument, "calibration fields must be positive");
  }
}

SpeedProfile speed_profile(const TrajectoryFn& traj, std::optional<double> radius_px,
                           int n_samples) {
  if (n_samples < 2) throw Error(ErrorKind::argument, "speed profile needs at least 2 samples");
  if (radius_px && !(*radius_px > 0.0)) throw Error(ErrorKind::argument, "radius must be positive");
  SpeedProfile out;
  out.units = radius_px ? SpeedUnit::radii_per_exposure : SpeedUnit::px_per_exposure;
  const double n = static_cast<double>(traj.n_frames);
  out.samples.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    const double t = i + 1 == n_samples ? n : n * i / (n_samples - 1);
    double v = traj.derivative(t).norm();
    if (radius_px) v /= *radius_px;
    out.samples.push_back({t, v});
  }
  return out;
}

HitSpeed speed_at_hit(const TrajectoryFn& traj, const Point& hit_point) {
  if (traj.n_frames < 1) throw Error(ErrorKind::argument, "trajectory has no frames");
  auto dist = [&](double t) { return (traj.eval(t) - hit_point).squaredNorm(); };
  const int steps = traj.n_frames * 1000;
  const double n = static_cast<double>(traj.n_frames);
  double best_t = 0.0;
  double best = dist(0.0);
  for (int i = 1; i <= steps; ++i) {
    const double t = n * i / steps;
    const double d = dist(t);
    if (d < best) {
      best = d;
      best_t = t;
    }
  }

  // Golden-section refinement within one grid cell on each side.
  const double h = n / steps;
  double lo = std::max(0.0, best_t - h);
  double hi = std::min(n, best_t + h);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = dist(c), fd = dist(d);
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = dist(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = dist(d);
    }
  }
  const double refined = 0.5 * (lo + hi);
  if (dist(refined) < best) best_t = refined;
  return {best_t, traj.derivative(best_t).norm()};
}

CalibratedSpeed calibrate_speed(double speed_px_per_frame, double meters_per_pixel, double fps) {
  if (!(speed_px_per_frame >= 0.0) || !(meters_per_pixel > 0.0) || !(fps > 0.0)) {
    throw Error(ErrorKind::argument, "calibration inputs must be positive");
  }
  const double mps = speed_px_per_frame * meters_per_pixel * fps;
  return {mps, mps * kMphPerMps};
}

double meters_per_pixel_from_feet(double length_px, double length_feet) {
  if (!(length_px > 0.0 && length_feet > 0.0)) {
    throw Error(ErrorKind::argument, "reference lengths must be positive");
  }
  return length_feet * kMetersPerFoot / length_px;
}

double radius_from_gravity(double quadratic_coeff_a, double fps, double radius_px, double g) {
  if (!(quadratic_coeff_a > 0.0)) {
    throw Error(ErrorKind::gravity_not_dominant,
                "quadratic coefficient must be positive (downward acceleration)");
  }
  if (!(fps > 0.0 && radius_px > 0.0 && g > 0.0)) {
    throw Error(ErrorKind::argument, "fps, radius and gravity must be positive");
  }
  const double meters_per_pixel = g / (2.0 * quadratic_coeff_a * fps * fps);
  return radius_px * meters_per_pixel;
}

double gravity_from_radius(double quadratic_coeff_a, double fps, double radius_px, double radius_m) {
  if (!(quadratic_coeff_a > 0.0)) {
    throw Error(ErrorKind::gravity_not_dominant,
                "quadratic coefficient must be positive (downward acceleration)");
  }
  if (!(fps > 0.0 && radius_px > 0.0 && radius_m > 0.0)) {
    throw Error(ErrorKind::argument, "fps and radii must be positive");
  }
  return 2.0 * quadratic_coeff_a * fps * fps * (radius_m / radius_px);
}

double quadratic_accel(const TrajectoryFn& traj, std::size_t segment_index) {
  if (segment_index >= traj.segments.size()) {
    throw Error(ErrorKind::argument, "segment index out of range");
  }
  const SegmentPoly& seg = traj.segments[segment_index];
  if (seg.degree < 2) throw Error(ErrorKind::no_curvature, "segment has degree below 2");
  const double mid = 0.5 * (seg.t_start + seg.t_end);
  return 0.5 * seg.second_derivative(mid).y();
}

std::size_t longest_fitted_segment(const TrajectoryFn& traj) {
  std::size_t best = traj.segments.size();
  double best_len = -1.0;
  for (std::size_t i = 0; i < traj.segments.size(); ++i) {
    const auto& s = traj.segments[i];
    if (s.kind != SegmentKind::fitted) continue;
    if (s.t_end - s.t_start > best_len) {
      best_len = s.t_end - s.t_start;
      best = i;
    }
  }
  if (best == traj.segments.size()) throw Error(ErrorKind::empty_input, "no fitted segment");
  return best;
}

SpeedProfile speed_from_kernel(const BlurKernel& kernel, const DiscretePath& path, double exposure) {
  if (path.rows.empty()) throw Error(ErrorKind::argument, "path is empty");
  if (!(exposure > 0.0)) throw Error(ErrorKind::argument, "exposure must be positive");
  const std::vector<Point> pts = path.image_points();
  const int n = static_cast<int>(pts.size());
  const bool cross_is_y = path.axis == Axis::column_wise;

  std::vector<double> mass(static_cast<std::size_t>(n), 0.0);
  std::vector<double> step(static_cast<std::size_t>(n), 1.0);
  for (int i = 0; i < n; ++i) {
    const int x = static_cast<int>(pts[static_cast<std::size_t>(i)].x());
    const int y = static_cast<int>(pts[static_cast<std::size_t>(i)].y());
    if (!kernel.contains(x, y)) throw Error(ErrorKind::bounds, "path leaves the kernel");
    for (int d = -1; d <= 1; ++d) {
      const int xx = cross_is_y ? x : x + d;
      const int yy = cross_is_y ? y + d : y;
      if (kernel.contains(xx, yy)) mass[static_cast<std::size_t>(i)] += kernel.at(xx, yy);
    }
    if (n > 1) {
      const int j = i == 0 ? 1 : i;
      const int dy = path.rows[static_cast<std::size_t>(j)] - path.rows[static_cast<std::size_t>(j - 1)];
      step[static_cast<std::size_t>(i)] = std::sqrt(1.0 + static_cast<double>(dy * dy));
    }
  }

  const double peak = *std::max_element(mass.begin(), mass.end());
  if (!(peak > 0.0)) throw Error(ErrorKind::kernel_too_noisy, "no kernel mass along the path");
  const double floor = 1e-3 * peak;
  double total = 0.0;
  for (double m : mass) {
    if (m >= floor) total += m;
  }

  SpeedProfile out;
  out.units = SpeedUnit::px_per_exposure;
  double elapsed = 0.0;
  for (int i = 0; i < n; ++i) {
    const double m = mass[static_cast<std::size_t>(i)];
    if (m < floor) continue;
    const double dt = exposure * m / total;
    out.samples.push_back({elapsed + 0.5 * dt, step[static_cast<std::size_t>(i)] / dt});
    elapsed += dt;
  }
  if (out.samples.empty()) throw Error(ErrorKind::kernel_too_noisy, "all path pixels masked");
  return out;
}

}  // namespace tbdnc

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tbdnc/core_types.hpp"

namespace tbdnc {

enum class SpeedUnit { px_per_exposure, radii_per_exposure, meters_per_second, mph };

std::string to_string(SpeedUnit unit);

struct SpeedSample {
  double t = 0.0;
  double speed = 0.0;
};

struct SpeedProfile {
  std::vector<SpeedSample> samples;
  SpeedUnit units = SpeedUnit::px_per_exposure;

  double peak() const;
  double median() const;
  void validate() const;
};

struct Calibration {
  double meters_per_pixel = 1.0;
  double fps = 30.0;
  double gravity = 9.8;

  void validate() const;
};

// m/s -> mph, fixed for bit-stable output.
inline constexpr double kMphPerMps = 2.2369362920544;
inline constexpr double kMetersPerFoot = 0.3048;

/// |C_f'(t)| at n_samples uniform times over [0, N]; the right derivative is
/// used at breakpoints. Divided by radius_px when given.
SpeedProfile speed_profile(const TrajectoryFn& traj, std::optional<double> radius_px,
                           int n_samples);

struct HitSpeed {
  double t_hit = 0.0;
  double speed = 0.0;  // px per frame
};

/// Time whose trajectory point is closest to `hit_point` (earliest on ties),
/// found on a 1000-per-frame grid and refined by golden-section search.
HitSpeed speed_at_hit(const TrajectoryFn& traj, const Point& hit_point);

struct CalibratedSpeed {
  double mps = 0.0;
  double mph = 0.0;
};

CalibratedSpeed calibrate_speed(double speed_px_per_frame, double meters_per_pixel, double fps);

/// Meters per pixel from a known length in pixels and in feet.
double meters_per_pixel_from_feet(double length_px, double length_feet);

/// Object radius in meters via p = g / (2 a f^2).
double radius_from_gravity(double quadratic_coeff_a, double fps, double radius_px, double g = 9.8);

/// g = 2 a f^2 (radius_m / radius_px).
double gravity_from_radius(double quadratic_coeff_a, double fps, double radius_px, double radius_m);

/// Half the second derivative of a piece's y-polynomial at its midpoint.
double quadratic_accel(const TrajectoryFn& traj, std::size_t segment_index);

/// Index of the fitted piece holding the most time (ties: earliest).
std::size_t longest_fitted_segment(const TrajectoryFn& traj);

/// Speed along a discrete path from the time the object spent on each path
/// pixel. A pixel's time share is its kernel mass (the pixel plus its two
/// cross-axis neighbours) over the total along the path, times exposure.
SpeedProfile speed_from_kernel(const BlurKernel& kernel, const DiscretePath& path, double exposure);

}  // namespace tbdnc

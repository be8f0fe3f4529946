#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tbdnc/core_types.hpp"
#include "tbdnc/physics.hpp"

namespace tbdnc {

enum class PlaneAxis { x, y };

/// Axis-aligned reflecting plane: `axis` = x means the line x = coordinate.
struct BouncePlane {
  PlaneAxis axis = PlaneAxis::y;
  double coordinate = 0.0;
  double restitution = 1.0;  // in (0, 1]
};

/// Ballistic scenario. Motion follows p(t) = p0 + v0 t + gravity_px t^2 * (0, 1)
/// between plane hits, so gravity_px is the quadratic coefficient a
/// (px / frame^2) and the vertical acceleration is 2a.
struct SynthSpec {
  int n_frames = 20;
  double fps = 30.0;
  double exposure = 0.85;
  double gravity_px = 0.0;
  Point initial_position{40.0, 120.0};
  Point initial_velocity{12.0, -3.0};
  std::vector<BouncePlane> bounce_planes;
  double radius_px = 8.0;
  // Kernel noise sigma is relative to each frame's kernel peak.
  double kernel_noise_sigma = 0.0;
  double endpoint_noise_sigma = 0.0;
  std::vector<int> dropout;  // 1-based frames rendered absent
  std::uint64_t seed = 0;
  int image_width = 320;
  int image_height = 240;
  bool render_kernels = true;

  void validate() const;
};

struct SynthOutput {
  SequenceBundle bundle;  // carries ground_truth as well
  GroundTruth ground_truth;
  SpeedProfile speed;     // analytic |C*'|, 20 samples per frame
  std::vector<double> bounce_times;
  std::vector<Point> bounce_points;
};

SynthOutput generate(const SynthSpec& spec);

/// Gaussian source: 64-bit Mersenne Twister (std::mt19937_64) feeding the
/// Box-Muller transform. Uniforms take the top 53 bits of each draw. Both
/// algorithms are fully specified, so streams are portable across platforms.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // in [0, 1)
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Time-proportional rasterisation of c(t), t in [t0, t0 + exposure], with
/// bilinear splatting; the total mass equals `exposure` when the streak stays
/// inside the kernel.
BlurKernel render_streak(const TrajectoryFn& truth, double t0, double exposure, int width,
                         int height);

}  // namespace tbdnc

#include "tbdnc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tbdnc {
namespace {

constexpr int kMaxPlaneHits = 256;
constexpr double kMinHitTime = 1e-9;

struct Arc {
  double t0;
  Point p0;
  Point v0;
};

Point arc_position(const Arc& arc, double a, double s) {
  return arc.p0 + arc.v0 * s + Point(0.0, a * s * s);
}

Point arc_velocity(const Arc& arc, double a, double s) {
  return arc.v0 + Point(0.0, 2.0 * a * s);
}

// Smallest root s > kMinHitTime of q s^2 + l s + c0 = 0, or +inf.
double first_root(double q, double l, double c0) {
  const double inf = std::numeric_limits<double>::infinity();
  auto pick = [&](double r1, double r2) {
    double best = inf;
    for (double r : {r1, r2}) {
      if (std::isfinite(r) && r > kMinHitTime) best = std::min(best, r);
    }
    return best;
  };
  if (q == 0.0) return l == 0.0 ? inf : pick(-c0 / l, inf);
  const double disc = l * l - 4.0 * q * c0;
  if (disc < 0.0) return inf;
  const double sq = std::sqrt(disc);
  const double k = -0.5 * (l + std::copysign(sq, l));
  const double r1 = k / q;
  const double r2 = k != 0.0 ? c0 / k : -l / q;
  return pick(r1, r2);
}

std::vector<Arc> integrate(const SynthSpec& spec, std::vector<double>& hit_times,
                           std::vector<Point>& hit_points) {
  const double a = spec.gravity_px;
  const double end = static_cast<double>(spec.n_frames);
  std::vector<Arc> arcs{{0.0, spec.initial_position, spec.initial_velocity}};
  while (true) {
    const Arc& arc = arcs.back();
    double best = std::numeric_limits<double>::infinity();
    const BouncePlane* hit = nullptr;
    for (const BouncePlane& plane : spec.bounce_planes) {
      const double s = plane.axis == PlaneAxis::x
                           ? first_root(0.0, arc.v0.x(), arc.p0.x() - plane.coordinate)
                           : first_root(a, arc.v0.y(), arc.p0.y() - plane.coordinate);
      if (s < best) {
        best = s;
        hit = &plane;
      }
    }
    if (!hit || arc.t0 + best >= end) break;
    if (static_cast<int>(arcs.size()) > kMaxPlaneHits) {
      throw Error(ErrorKind::spec, "too many plane hits; the object comes to rest");
    }
    Point p = arc_position(arc, a, best);
    Point v = arc_velocity(arc, a, best);
    if (hit->axis == PlaneAxis::x) {
      p.x() = hit->coordinate;
      v.x() = -hit->restitution * v.x();
    } else {
      p.y() = hit->coordinate;
      v.y() = -hit->restitution * v.y();
    }
    const double t = arc.t0 + best;
    hit_times.push_back(t);
    hit_points.push_back(p);
    arcs.push_back({t, p, v});
  }
  return arcs;
}

TrajectoryFn arcs_to_trajectory(const std::vector<Arc>& arcs, double a, int n_frames,
                                double exposure) {
  TrajectoryFn traj;
  traj.n_frames = n_frames;
  traj.exposure = exposure;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    SegmentPoly piece;
    piece.t_start = arcs[i].t0;
    piece.t_end = i + 1 < arcs.size() ? arcs[i + 1].t0 : static_cast<double>(n_frames);
    piece.degree = 2;
    piece.origin = arcs[i].t0;
    piece.scale = 1.0;
    piece.coeffs.resize(2, 3);
    piece.coeffs.col(0) = arcs[i].p0;
    piece.coeffs.col(1) = arcs[i].v0;
    piece.coeffs.col(2) = Point(0.0, a);
    piece.kind = SegmentKind::fitted;
    traj.segments.push_back(std::move(piece));
  }
  return traj;
}

}  // namespace

double GaussianSource::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double GaussianSource::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

void SynthSpec::validate() const {
  if (n_frames < 1) throw Error(ErrorKind::spec, "n_frames must be at least 1");
  if (!(fps > 0.0)) throw Error(ErrorKind::spec, "fps must be positive");
  if (!(exposure > 0.0 && exposure <= 1.0)) throw Error(ErrorKind::spec, "exposure must lie in (0, 1]");
  if (!std::isfinite(gravity_px)) throw Error(ErrorKind::spec, "gravity must be finite");
  if (!initial_position.allFinite() || !initial_velocity.allFinite()) {
    throw Error(ErrorKind::spec, "initial state must be finite");
  }
  if (!(radius_px > 0.0)) throw Error(ErrorKind::spec, "radius must be positive");
  if (!(kernel_noise_sigma >= 0.0 && endpoint_noise_sigma >= 0.0)) {
    throw Error(ErrorKind::spec, "noise levels must be non-negative");
  }
  if (image_width < 1 || image_height < 1) throw Error(ErrorKind::spec, "image size must be positive");
  for (const auto& p : bounce_planes) {
    if (!(p.restitution > 0.0 && p.restitution <= 1.0) || !std::isfinite(p.coordinate)) {
      throw Error(ErrorKind::spec, "bounce plane restitution must lie in (0, 1]");
    }
  }
  for (int f : dropout) {
    if (f < 1 || f > n_frames) throw Error(ErrorKind::spec, "dropout frame out of range");
  }
}

BlurKernel render_streak(const TrajectoryFn& truth, double t0, double exposure, int width,
                         int height) {
  BlurKernel kernel(width, height);
  double length = 0.0;
  Point prev = truth.eval(t0);
  for (int i = 1; i <= 8; ++i) {
    const Point p = truth.eval(t0 + exposure * i / 8.0);
    length += (p - prev).norm();
    prev = p;
  }
  const int samples = std::max(64, 16 * static_cast<int>(std::ceil(length)));
  const double w = exposure / samples;
  std::vector<double> values(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0.0);
  auto splat = [&](int x, int y, double v) {
    if (x < 0 || y < 0 || x >= width || y >= height || v <= 0.0) return;
    values[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] += v;
  };
  for (int i = 0; i < samples; ++i) {
    const Point p = truth.eval(t0 + exposure * (i + 0.5) / samples);
    const double fx0 = std::floor(p.x());
    const double fy0 = std::floor(p.y());
    const double fx = p.x() - fx0;
    const double fy = p.y() - fy0;
    const int x0 = static_cast<int>(fx0);
    const int y0 = static_cast<int>(fy0);
    splat(x0, y0, w * (1.0 - fx) * (1.0 - fy));
    splat(x0 + 1, y0, w * fx * (1.0 - fy));
    splat(x0, y0 + 1, w * (1.0 - fx) * fy);
    splat(x0 + 1, y0 + 1, w * fx * fy);
  }
  return BlurKernel(width, height, std::move(values));
}

SynthOutput generate(const SynthSpec& spec) {
  spec.validate();
  SynthOutput out;
  const std::vector<Arc> arcs = integrate(spec, out.bounce_times, out.bounce_points);
  out.ground_truth.trajectory =
      arcs_to_trajectory(arcs, spec.gravity_px, spec.n_frames, spec.exposure);
  out.ground_truth.mask_radius_px = spec.radius_px;
  const TrajectoryFn& truth = out.ground_truth.trajectory;

  const double W = spec.image_width;
  const double H = spec.image_height;
  const int checks = spec.n_frames * 20;
  for (int i = 0; i <= checks; ++i) {
    const Point p = truth.eval(static_cast<double>(spec.n_frames) * i / checks);
    if (p.x() < -1.5 * W || p.x() > 2.5 * W || p.y() < -1.5 * H || p.y() > 2.5 * H) {
      throw Error(ErrorKind::spec, "object leaves the 4x image bounding box");
    }
  }

  GaussianSource rng(spec.seed);
  SequenceBundle& b = out.bundle;
  b.n_frames = spec.n_frames;
  b.fps = spec.fps;
  b.image_width = spec.image_width;
  b.image_height = spec.image_height;
  b.radius_px = spec.radius_px;
  for (int f = 1; f <= spec.n_frames; ++f) {
    FrameRecord rec;
    if (std::find(spec.dropout.begin(), spec.dropout.end(), f) != spec.dropout.end()) {
      rec.curve = FrameCurve::absent(f);
      b.frames.push_back(std::move(rec));
      continue;
    }
    const double t0 = frame_start_time(f);
    Point start = truth.eval(t0);
    Point end = truth.eval(t0 + spec.exposure);
    if (spec.endpoint_noise_sigma > 0.0) {
      start += spec.endpoint_noise_sigma * Point(rng.normal(), rng.normal());
      end += spec.endpoint_noise_sigma * Point(rng.normal(), rng.normal());
    }
    rec.curve = FrameCurve::detected(f, start, end);
    if (spec.render_kernels) {
      BlurKernel k = render_streak(truth, t0, spec.exposure, spec.image_width, spec.image_height);
      if (spec.kernel_noise_sigma > 0.0) {
        const double sigma = spec.kernel_noise_sigma * k.max();
        std::vector<double> v = k.values();
        for (double& x : v) x = std::max(0.0, x + sigma * rng.normal());
        k = BlurKernel(k.width(), k.height(), std::move(v));
      }
      rec.kernel = std::move(k);
    }
    b.frames.push_back(std::move(rec));
  }
  b.ground_truth = out.ground_truth;
  out.speed = speed_profile(truth, std::nullopt, 20 * spec.n_frames + 1);
  return out;
}

}  // namespace tbdnc

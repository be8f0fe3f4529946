#include "tbdnc/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tbdnc {
namespace {

constexpr double kSignTol = 1e-9;

int sign_of(double v) { return v > kSignTol ? 1 : (v < -kSignTol ? -1 : 0); }

// Tracks whether one axis keeps a single polarity; zero steps fit either.
struct Polarity {
  int sign = 0;
  bool ok = true;

  void push(int s) {
    if (!ok || s == 0) return;
    if (sign == 0) {
      sign = s;
    } else if (s != sign) {
      ok = false;
    }
  }
};

double angle_deg(const Point& a, const Point& b) {
  const double cross = a.x() * b.y() - a.y() * b.x();
  return std::atan2(std::abs(cross), a.dot(b)) * 180.0 / std::numbers::pi;
}

Point mean_direction(const std::vector<Point>& unit_steps, int first, int count) {
  Point acc = Point::Zero();
  for (int j = first; j < first + count; ++j) acc += unit_steps[static_cast<std::size_t>(j)];
  return acc / static_cast<double>(count);
}

Point point_at(const std::vector<Point>& pts, double index) {
  const double clamped = std::clamp(index, 0.0, static_cast<double>(pts.size() - 1));
  const auto lo = static_cast<std::size_t>(std::floor(clamped));
  const std::size_t hi = std::min(lo + 1, pts.size() - 1);
  const double f = clamped - static_cast<double>(lo);
  return (1.0 - f) * pts[lo] + f * pts[hi];
}

std::vector<Point> sub_polyline(const std::vector<Point>& pts, double from, double to) {
  std::vector<Point> out{point_at(pts, from)};
  for (auto i = static_cast<std::size_t>(std::floor(from)) + 1;
       static_cast<double>(i) < to && i < pts.size(); ++i) {
    out.push_back(pts[i]);
  }
  const Point last = point_at(pts, to);
  if ((last - out.back()).norm() > 0.0 || out.size() == 1) out.push_back(last);
  return out;
}

double nearest_index(const Point& p, const std::vector<Point>& pts) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = (pts[i] - p).squaredNorm();
    if (d < best) {
      best = d;
      best_i = i;
    }
  }
  return static_cast<double>(best_i);
}

// Indices of a longest non-decreasing subsequence of `ids`.
std::vector<std::size_t> longest_non_decreasing(const std::vector<int>& ids) {
  const std::size_t n = ids.size();
  std::vector<std::size_t> len(n, 1), prev(n, n);
  std::size_t best_end = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (ids[j] <= ids[i] && len[j] + 1 > len[i]) {
        len[i] = len[j] + 1;
        prev[i] = j;
      }
    }
    if (len[i] > len[best_end]) best_end = i;
  }
  std::vector<std::size_t> out;
  if (n == 0) return out;
  for (std::size_t i = best_end; i != n; i = prev[i]) out.push_back(i);
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<FrameRange> split_nonintersecting(const std::vector<FrameCurve>& frames) {
  std::vector<const FrameCurve*> present;
  for (const auto& f : frames) {
    if (f.present) present.push_back(&f);
  }
  if (present.empty()) throw Error(ErrorKind::empty_input, "sequence has no detections");

  std::vector<FrameRange> parts;
  FrameRange current{present.front()->frame_index, present.front()->frame_index};
  Polarity px, py;
  for (std::size_t i = 1; i < present.size(); ++i) {
    const Point d = present[i]->start - present[i - 1]->start;
    Polarity nx = px, ny = py;
    nx.push(sign_of(d.x()));
    ny.push(sign_of(d.y()));
    if (!nx.ok && !ny.ok) {
      parts.push_back(current);
      current = {present[i]->frame_index, present[i]->frame_index};
      px = {};
      py = {};
      continue;
    }
    px = nx;
    py = ny;
    current.last = present[i]->frame_index;
  }
  parts.push_back(current);
  return parts;
}

std::vector<FrameRange> split_steep_parts(const std::vector<FrameCurve>& frames,
                                          const std::vector<FrameRange>& ranges, double max_slope) {
  if (!(max_slope > 0.0)) throw Error(ErrorKind::argument, "max slope must be positive");
  std::vector<FrameRange> out;
  for (const FrameRange& range : ranges) {
    std::vector<const FrameCurve*> present;
    for (const auto& f : frames) {
      if (f.present && f.frame_index >= range.first && f.frame_index <= range.last) present.push_back(&f);
    }
    if (present.empty()) continue;
    FrameRange current{present.front()->frame_index, present.front()->frame_index};
    Polarity px, py;
    // Steepest chord of the current part measured against x and against y.
    double dy_per_dx = 0.0, dx_per_dy = 0.0;
    auto note = [&](const Point& d) {
      const double ax = std::abs(d.x()), ay = std::abs(d.y());
      if (ax > 0.0 || ay > 0.0) {
        dy_per_dx = std::max(dy_per_dx, ax > 0.0 ? ay / ax : HUGE_VAL);
        dx_per_dy = std::max(dx_per_dy, ay > 0.0 ? ax / ay : HUGE_VAL);
      }
    };
    note(present.front()->end - present.front()->start);
    for (std::size_t i = 1; i < present.size(); ++i) {
      const Point d = present[i]->start - present[i - 1]->start;
      Polarity nx = px, ny = py;
      nx.push(sign_of(d.x()));
      ny.push(sign_of(d.y()));
      note(d);
      note(present[i]->end - present[i]->start);
      const bool too_steep = (nx.ok && !ny.ok && dy_per_dx > max_slope) ||
                             (ny.ok && !nx.ok && dx_per_dy > max_slope);
      if (too_steep) {
        out.push_back(current);
        current = {present[i]->frame_index, present[i]->frame_index};
        px = {};
        py = {};
        dy_per_dx = dx_per_dy = 0.0;
        note(present[i]->end - present[i]->start);
        continue;
      }
      px = nx;
      py = ny;
      current.last = present[i]->frame_index;
    }
    out.push_back(current);
  }
  return out;
}

MonotoneAxes monotone_axes(const std::vector<FrameCurve>& frames, const FrameRange& range) {
  std::vector<Point> pts;
  const FrameCurve* last = nullptr;
  for (const auto& f : frames) {
    if (!f.present || f.frame_index < range.first || f.frame_index > range.last) continue;
    pts.push_back(f.start);
    last = &f;
  }
  if (pts.size() == 1) pts.push_back(last->end);
  Polarity px, py;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    px.push(sign_of(pts[i].x() - pts[i - 1].x()));
    py.push(sign_of(pts[i].y() - pts[i - 1].y()));
  }
  return {px.ok, py.ok};
}

std::vector<Bounce> detect_bounces(const std::vector<Point>& points, const BounceParams& params) {
  params.validate();
  const int w = params.window_px;
  const int n = static_cast<int>(points.size());
  std::vector<Bounce> out;
  if (n < 2 * w + 1) return out;

  std::vector<Point> steps;
  steps.reserve(static_cast<std::size_t>(n - 1));
  for (int j = 0; j + 1 < n; ++j) {
    const Point s = points[static_cast<std::size_t>(j + 1)] - points[static_cast<std::size_t>(j)];
    const double len = s.norm();
    steps.push_back(len > 0.0 ? Point(s / len) : Point(Point::Zero()));
  }

  std::vector<double> angle(static_cast<std::size_t>(n), 0.0);
  for (int i = w; i <= n - 1 - w; ++i) {
    angle[static_cast<std::size_t>(i)] =
        angle_deg(mean_direction(steps, i - w, w), mean_direction(steps, i, w));
  }

  auto make = [&](int first, int last) {
    Bounce b;
    b.path_index = 0.5 * (first + last);
    b.position = point_at(points, b.path_index);
    b.origin = BounceOrigin::within_part;
    return b;
  };

  // Non-maximum suppression, then merge maxima closer than w into one bounce
  // centred on the cluster (keeps the result symmetric under path reversal).
  std::vector<int> kept;
  for (int i = w; i <= n - 1 - w; ++i) {
    const double a = angle[static_cast<std::size_t>(i)];
    if (!(a > params.angle_threshold_deg)) continue;
    bool is_max = true;
    for (int j = std::max(w, i - w); j <= std::min(n - 1 - w, i + w); ++j) {
      if (angle[static_cast<std::size_t>(j)] > a + 1e-12) {
        is_max = false;
        break;
      }
    }
    if (is_max) kept.push_back(i);
  }
  for (std::size_t k = 0; k < kept.size();) {
    std::size_t e = k;
    while (e + 1 < kept.size() && kept[e + 1] - kept[e] <= w) ++e;
    out.push_back(make(kept[k], kept[e]));
    k = e + 1;
  }
  if (!out.empty()) return out;

  // Net turn, summed over consecutive w-step block directions.
  double total = 0.0;
  Point prev = mean_direction(steps, 0, w);
  for (int first = w; first + w <= n - 1; first += w) {
    const Point next = mean_direction(steps, first, w);
    total += std::atan2(prev.x() * next.y() - prev.y() * next.x(), prev.dot(next));
    prev = next;
  }
  total = std::abs(total) * 180.0 / std::numbers::pi;
  if (total > params.circle_split_deg) {
    double best = -1.0;
    for (int i = w; i <= n - 1 - w; ++i) best = std::max(best, angle[static_cast<std::size_t>(i)]);
    int first = -1, last = -1;
    for (int i = w; i <= n - 1 - w; ++i) {
      if (angle[static_cast<std::size_t>(i)] >= best - 1e-12) {
        if (first < 0) first = i;
        last = i;
      }
    }
    out.push_back(make(first, last));
  }
  return out;
}

std::vector<Bounce> detect_bounces(const DiscretePath& path, const BounceParams& params) {
  return detect_bounces(path.image_points(), params);
}

double point_polyline_distance(const Point& p, const std::vector<Point>& polyline) {
  if (polyline.empty()) return std::numeric_limits<double>::infinity();
  double best = (p - polyline.front()).norm();
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    const Point a = polyline[i - 1];
    const Point ab = polyline[i] - a;
    const double len2 = ab.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, (p - (a + t * ab)).norm());
  }
  return best;
}

std::vector<Point> oriented_path_points(const Part& part, const std::vector<FrameCurve>& frames) {
  std::vector<Point> pts = part.path.image_points();
  if (pts.size() < 2) return pts;
  for (int t = part.frame_range.first; t <= part.frame_range.last; ++t) {
    const FrameCurve& f = frames[static_cast<std::size_t>(t - 1)];
    if (!f.present) continue;
    if ((f.start - pts.back()).norm() < (f.start - pts.front()).norm()) {
      std::reverse(pts.begin(), pts.end());
    }
    break;
  }
  return pts;
}

double nearest_endpoint_time(const Point& p, const std::vector<FrameCurve>& frames,
                             const FrameRange& range, double exposure) {
  double best = std::numeric_limits<double>::infinity();
  double best_t = frame_start_time(range.first);
  for (int t = range.first; t <= range.last; ++t) {
    const FrameCurve& f = frames[static_cast<std::size_t>(t - 1)];
    if (!f.present) continue;
    const double ds = (f.start - p).norm();
    const double de = (f.end - p).norm();
    if (ds < best) {
      best = ds;
      best_t = frame_start_time(t);
    }
    if (de < best) {
      best = de;
      best_t = frame_start_time(t) + exposure;
    }
  }
  return best_t;
}

std::vector<Segment> assign_frames(const std::vector<FrameCurve>& frames,
                                   const std::vector<std::vector<Bounce>>& bounces,
                                   const std::vector<Part>& parts) {
  if (bounces.size() != parts.size()) {
    throw Error(ErrorKind::argument, "one bounce list per part is required");
  }
  std::vector<Segment> segments;
  std::vector<std::size_t> first_segment_of_part;
  for (std::size_t pi = 0; pi < parts.size(); ++pi) {
    first_segment_of_part.push_back(segments.size());
    const std::vector<Point> pts = oriented_path_points(parts[pi], frames);
    std::vector<double> cuts{0.0};
    for (const Bounce& b : bounces[pi]) {
      cuts.push_back(b.path_index >= 0.0 ? b.path_index : nearest_index(b.position, pts));
    }
    cuts.push_back(static_cast<double>(pts.size() - 1));
    std::sort(cuts.begin() + 1, cuts.end() - 1);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      Segment seg;
      seg.part_index = static_cast<int>(pi);
      seg.polyline = sub_polyline(pts, cuts[k], cuts[k + 1]);
      seg.boundary_start = seg.polyline.front();
      seg.boundary_end = seg.polyline.back();
      segments.push_back(std::move(seg));
    }
  }
  first_segment_of_part.push_back(segments.size());

  // Nearest segment among the frame's own part and its neighbours.
  auto nearest_segment = [&](const Point& p, std::size_t pi) {
    const std::size_t lo = first_segment_of_part[pi == 0 ? 0 : pi - 1];
    const std::size_t hi = first_segment_of_part[std::min(pi + 2, parts.size())];
    double best = std::numeric_limits<double>::infinity();
    int best_s = -1;
    for (std::size_t s = lo; s < hi; ++s) {
      const double d = point_polyline_distance(p, segments[s].polyline);
      if (d < best) {
        best = d;
        best_s = static_cast<int>(s);
      }
    }
    return best_s;
  };

  std::vector<int> frame_ids, seg_ids;
  for (std::size_t pi = 0; pi < parts.size(); ++pi) {
    for (int t = parts[pi].frame_range.first; t <= parts[pi].frame_range.last; ++t) {
      const FrameCurve& f = frames[static_cast<std::size_t>(t - 1)];
      if (!f.present) continue;
      const int a = nearest_segment(f.start, pi);
      const int b = nearest_segment(f.end, pi);
      if (a >= 0 && a == b) {
        frame_ids.push_back(t);
        seg_ids.push_back(a);
      }
    }
  }
  for (std::size_t i : longest_non_decreasing(seg_ids)) {
    segments[static_cast<std::size_t>(seg_ids[i])].frame_list.push_back(frame_ids[i]);
  }
  return segments;
}

}  // namespace tbdnc

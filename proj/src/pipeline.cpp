#include "tbdnc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>

namespace tbdnc {
namespace {

struct FittedSlot {
  std::size_t segment = 0;
  int part = 0;
  int local_index = 0;  // index of the segment within its part
  FitOutcome fit;

  double t_begin() const { return fit.poly.t_start; }
  double t_finish() const { return fit.poly.t_end; }
};

std::vector<FrameRecord> prepared_records(const SequenceBundle& seq, bool normalize_peak) {
  std::vector<FrameRecord> records = seq.frames;
  if (!normalize_peak) return records;
  for (auto& rec : records) {
    if (!rec.kernel) continue;
    const double peak = rec.kernel->max();
    if (peak > 0.0) rec.kernel->scale(1.0 / peak);
  }
  return records;
}

// Piecewise-linear trajectory through every detected endpoint and DP bounce,
// for sequences where no frame lies fully inside a segment.
std::vector<SegmentPoly> polyline_fallback(const std::vector<FrameCurve>& curves,
                                           const std::vector<std::vector<Bounce>>& bounces,
                                           double exposure) {
  std::vector<std::pair<double, Point>> knots;
  for (const auto& f : curves) {
    if (!f.present) continue;
    knots.emplace_back(frame_start_time(f.frame_index), f.start);
    knots.emplace_back(frame_start_time(f.frame_index) + exposure, f.end);
  }
  for (const auto& part : bounces) {
    for (const auto& b : part) knots.emplace_back(b.time_hint, b.position);
  }
  std::stable_sort(knots.begin(), knots.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<SegmentPoly> out;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first)) continue;
    const Point from = out.empty() ? knots[i - 1].second : out.back().eval(out.back().t_end);
    const double t0 = out.empty() ? knots[i - 1].first : out.back().t_end;
    out.push_back(SegmentPoly::line(t0, from, knots[i].first, knots[i].second,
                                    SegmentKind::gap_linear));
  }
  if (out.empty()) {
    // Single knot time: hold the position for one unit of time.
    const auto& k = knots.front();
    out.push_back(SegmentPoly::line(k.first, k.second, k.first + exposure, k.second,
                                    SegmentKind::gap_linear));
  }
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  dp.validate();
  bounce.validate();
  if (max_degree < 1 || max_degree > 6) {
    throw Error(ErrorKind::argument, "max degree must lie in [1, 6]");
  }
  if (!(single_frame_exposure > 0.0 && single_frame_exposure <= 1.0)) {
    throw Error(ErrorKind::argument, "single-frame exposure must lie in (0, 1]");
  }
  if (!(exposure_search_radius > 0.0 && exposure_search_radius <= 1.0)) {
    throw Error(ErrorKind::argument, "exposure search radius must lie in (0, 1]");
  }
}

Point closest_approach(const SegmentPoly& a, const SegmentPoly& b, double t0, double t1,
                       double* distance) {
  constexpr int kGrid = 48;
  double lo_a = t0, hi_a = t1, lo_b = t0, hi_b = t1;
  double best = std::numeric_limits<double>::infinity();
  double best_ta = t0, best_tb = t1;
  for (int round = 0; round < 5; ++round) {
    const double step_a = (hi_a - lo_a) / kGrid;
    const double step_b = (hi_b - lo_b) / kGrid;
    for (int i = 0; i <= kGrid; ++i) {
      const double ta = lo_a + step_a * i;
      const Point pa = a.eval(ta);
      for (int j = 0; j <= kGrid; ++j) {
        const double tb = lo_b + step_b * j;
        const double d = (pa - b.eval(tb)).squaredNorm();
        if (d < best) {
          best = d;
          best_ta = ta;
          best_tb = tb;
        }
      }
    }
    lo_a = std::max(t0, best_ta - 2.0 * step_a);
    hi_a = std::min(t1, best_ta + 2.0 * step_a);
    lo_b = std::max(t0, best_tb - 2.0 * step_b);
    hi_b = std::min(t1, best_tb + 2.0 * step_b);
  }
  if (distance) *distance = std::sqrt(best);
  return 0.5 * (a.eval(best_ta) + b.eval(best_tb));
}

StitchResult stitch(const SequenceBundle& seq, const PipelineConfig& config) {
  config.validate();
  seq.validate();
  const std::vector<FrameCurve> curves = seq.curves();
  std::vector<FrameRange> ranges = split_nonintersecting(curves);
  if (config.split_steep_parts) ranges = split_steep_parts(curves, ranges);

  StitchResult result;
  const auto n_present = std::count_if(curves.begin(), curves.end(),
                                       [](const FrameCurve& f) { return f.present; });
  result.exposure = n_present == 1 ? config.single_frame_exposure : estimate_exposure(curves);
  double eps = result.exposure;

  const std::vector<FrameRecord> records = prepared_records(seq, config.normalize_kernel_peak);
  for (const FrameRange& r : ranges) {
    const BlurKernel kernel =
        accumulate_kernels(records, r.first, r.last, seq.image_width, seq.image_height);
    const Point start = curves[static_cast<std::size_t>(r.first - 1)].start;
    const Point end = curves[static_cast<std::size_t>(r.last - 1)].end;
    auto [col, row] = make_problems(kernel, start, end, config.dp);
    const MonotoneAxes mono = monotone_axes(curves, r);
    DiscretePath path;
    if (mono.x && !mono.y) {
      path = solve(col).path;
    } else if (mono.y && !mono.x) {
      path = solve(row).path;
    } else {
      path = solve_best_orientation(col, row).path;
    }
    result.parts.push_back({r, std::move(path)});
  }

  std::vector<std::vector<Bounce>> within(result.parts.size());
  for (std::size_t p = 0; p < result.parts.size(); ++p) {
    within[p] = detect_bounces(oriented_path_points(result.parts[p], curves), config.bounce);
    for (Bounce& b : within[p]) {
      b.time_hint = nearest_endpoint_time(b.position, curves, result.parts[p].frame_range, eps);
    }
  }
  result.segments = assign_frames(curves, within, result.parts);

  std::set<int> trimmed;
  std::map<int, std::pair<std::size_t, bool>> trimmed_from;  // frame -> (segment, from its end)
  if (config.trim_straddling_frames) {
    const double cos_max = std::cos(config.bounce.angle_threshold_deg * std::numbers::pi / 180.0);
    auto chord = [&](int f) {
      const FrameCurve& c = curves[static_cast<std::size_t>(f - 1)];
      return Point(c.end - c.start);
    };
    // Frame f against its in-segment neighbour g: turned away, or folded
    // back onto itself so that its chord is under half as long.
    auto straddles = [&](int f, int g) {
      const Point a = chord(f), b = chord(g);
      const double n = a.norm() * b.norm();
      return n > 0.0 && (a.dot(b) < cos_max * n || a.norm() < 0.5 * b.norm());
    };
    // Leave-one-out: fitted to `list`, the curve passes the near endpoint of
    // the adjacent frame f but misses its far endpoint.
    auto off_curve = [&](const std::vector<int>& list, int f) {
      FitProblem fp;
      for (int g : list) fp.frames.push_back(curves[static_cast<std::size_t>(g - 1)]);
      fp.first_frame = list.front();
      fp.last_frame = list.back();
      fp.degree = std::min(segment_degree(fp.last_frame - fp.first_frame + 1), config.max_degree);
      fp.exposure = eps;
      fp.anchor_start = fp.frames.front().start;
      fp.anchor_end = fp.frames.back().end;
      const SegmentPoly poly = fit_segment(fp).poly;
      const bool after = f > list.back();
      const FrameCurve& c = curves[static_cast<std::size_t>(f - 1)];
      const double tau = frame_start_time(f);
      const double near = ((after ? c.start : c.end) - poly.eval(after ? tau : tau + eps)).norm();
      const double far = ((after ? c.end : c.start) - poly.eval(after ? tau + eps : tau)).norm();
      return far > std::max(3.0, 3.0 * near);
    };
    for (std::size_t si = 0; si < result.segments.size(); ++si) {
      std::vector<int>& fl = result.segments[si].frame_list;
      for (int k = 0; k < 2 && fl.size() >= 3 && straddles(fl[fl.size() - 1], fl[fl.size() - 2]); ++k) {
        trimmed.insert(fl.back());
        trimmed_from[fl.back()] = {si, true};
        fl.pop_back();
      }
      for (int k = 0; k < 2 && fl.size() >= 3 && straddles(fl[0], fl[1]); ++k) {
        trimmed.insert(fl.front());
        trimmed_from[fl.front()] = {si, false};
        fl.erase(fl.begin());
      }
      auto misses = [&](bool last) {
        if (fl.size() < 4) return false;
        const std::vector<int> rest(fl.begin() + (last ? 0 : 1), fl.end() - (last ? 1 : 0));
        return off_curve(rest, last ? fl.back() : fl.front());
      };
      if (misses(true)) {
        trimmed.insert(fl.back());
        trimmed_from[fl.back()] = {si, true};
        fl.pop_back();
      }
      if (misses(false)) {
        trimmed.insert(fl.front());
        trimmed_from[fl.front()] = {si, false};
        fl.erase(fl.begin());
      }
    }
    // A lone frame that straddles the hit next to a longer segment.
    for (std::size_t si = 0; si < result.segments.size(); ++si) {
      std::vector<int>& fl = result.segments[si].frame_list;
      if (fl.size() != 1) continue;
      const int f = fl.front();
      for (std::size_t sj : {si + 1, si - 1}) {
        if (sj >= result.segments.size()) continue;
        const std::vector<int>& other = result.segments[sj].frame_list;
        if (other.size() < 3 || (other.front() != f + 1 && other.back() != f - 1)) continue;
        if (off_curve(other, f)) {
          trimmed.insert(f);
          trimmed_from[f] = {sj, other.front() == f + 1 ? false : true};
          fl.clear();
          break;
        }
      }
    }
    // A trimmed frame that lies wholly past the hit moves to the adjacent
    // segment it runs along with.
    auto& segs = result.segments;
    for (auto it = trimmed_from.rbegin(); it != trimmed_from.rend(); ++it) {
      const auto [f, origin] = *it;
      const std::size_t next = origin.first + 1;
      if (origin.second && next < segs.size() && !segs[next].frame_list.empty() &&
          segs[next].frame_list.front() == f + 1 && !straddles(f, f + 1)) {
        segs[next].frame_list.insert(segs[next].frame_list.begin(), f);
        trimmed.erase(f);
      }
    }
    for (const auto& [f, origin] : trimmed_from) {
      if (origin.second || origin.first == 0) continue;
      std::vector<int>& fl = segs[origin.first - 1].frame_list;
      if (!fl.empty() && fl.back() == f - 1 && !straddles(f, f - 1)) {
        fl.push_back(f);
        trimmed.erase(f);
      }
    }
  }

  // The curve still runs into a trimmed frame, so it counts towards the
  // segment's span in the degree rule.
  std::vector<int> span_extra(result.segments.size(), 0);
  for (int f : trimmed) ++span_extra[trimmed_from.at(f).first];

  std::vector<int> local_index(result.segments.size(), 0);
  for (std::size_t s = 1; s < result.segments.size(); ++s) {
    if (result.segments[s].part_index == result.segments[s - 1].part_index) {
      local_index[s] = local_index[s - 1] + 1;
    }
  }

  // Constrained fits, in time order. A segment that starts exactly where the
  // previous one ends inherits its end anchor, keeping the curve continuous.
  auto fit_all = [&](double exposure) {
    std::vector<FittedSlot> out;
    for (std::size_t s = 0; s < result.segments.size(); ++s) {
      const Segment& seg = result.segments[s];
      if (seg.frame_list.empty()) continue;
      FitProblem fp;
      fp.first_frame = seg.frame_list.front();
      fp.last_frame = seg.frame_list.back();
      for (int t : seg.frame_list) fp.frames.push_back(curves[static_cast<std::size_t>(t - 1)]);
      fp.degree =
          std::min(segment_degree(fp.last_frame - fp.first_frame + 1 + span_extra[s]), config.max_degree);
      fp.exposure = exposure;
      fp.anchor_start = curves[static_cast<std::size_t>(fp.first_frame - 1)].start;
      fp.anchor_end = curves[static_cast<std::size_t>(fp.last_frame - 1)].end;
      if (!out.empty() && out.back().t_finish() == frame_start_time(fp.first_frame)) {
        fp.anchor_start = out.back().fit.poly.eval(out.back().t_finish());
      }
      out.push_back({s, seg.part_index, local_index[s], fit_segment(fp)});
    }
    return out;
  };
  auto residual = [&](const std::vector<FittedSlot>& slots, double exposure) {
    double sq = 0.0;
    for (const FittedSlot& f : slots) {
      for (int t : result.segments[f.segment].frame_list) {
        const FrameCurve& c = curves[static_cast<std::size_t>(t - 1)];
        const double tau = frame_start_time(t);
        sq += (f.fit.poly.eval(tau) - c.start).squaredNorm();
        sq += (f.fit.poly.eval(tau + exposure) - c.end).squaredNorm();
      }
    }
    return sq;
  };

  std::vector<FittedSlot> fitted = fit_all(eps);
  if (config.refine_exposure && !fitted.empty() && n_present > 1) {
    // Golden-section search on the total fit residual around the estimate.
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = std::max(1e-3, eps - config.exposure_search_radius);
    double hi = std::min(1.0, eps + config.exposure_search_radius);
    auto cost = [&](double e) { return residual(fit_all(e), e); };
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = cost(x1), f2 = cost(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = cost(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = cost(x2);
      }
    }
    const double best = 0.5 * (lo + hi);
    if (cost(best) < residual(fitted, eps)) {
      eps = best;
      result.exposure = best;
      fitted = fit_all(eps);
      for (std::size_t p = 0; p < within.size(); ++p) {
        for (Bounce& b : within[p]) {
          b.time_hint = nearest_endpoint_time(b.position, curves, result.parts[p].frame_range, eps);
        }
      }
    }
  }
  result.fitted_segments = static_cast<int>(fitted.size());

  std::map<int, Bounce> between;  // keyed by the index of the later part
  auto junction = [&](std::size_t p) -> Point {
    const FrameRange& a = result.parts[p - 1].frame_range;
    const FrameRange& b = result.parts[p].frame_range;
    return 0.5 * (curves[static_cast<std::size_t>(a.last - 1)].end +
                  curves[static_cast<std::size_t>(b.first - 1)].start);
  };
  // Bounces and part junctions strictly between segment slot (pa, la) and
  // (pb, lb); slot l of a part lies between its bounces l - 1 and l.
  auto kinks_between = [&](int pa, int la, int pb, int lb, const Point* meet) {
    std::vector<Point> kinks;
    for (int p = pa; p <= pb; ++p) {
      const auto& list = within[static_cast<std::size_t>(p)];
      if (p > pa) kinks.push_back(p == pb && meet ? *meet : junction(static_cast<std::size_t>(p)));
      const int from = p == pa ? la : 0;
      const int to = p == pb ? lb : static_cast<int>(list.size());
      for (int i = from; i < to; ++i) kinks.push_back(list[static_cast<std::size_t>(i)].position);
    }
    return kinks;
  };

  std::vector<SegmentPoly> pieces;
  if (fitted.empty()) {
    pieces = polyline_fallback(curves, within, eps);
  } else {
    const auto first_present = std::find_if(curves.begin(), curves.end(),
                                            [](const FrameCurve& f) { return f.present; });
    const auto last_present = std::find_if(curves.rbegin(), curves.rend(),
                                           [](const FrameCurve& f) { return f.present; });

    // A trimmed frame next to a fitted segment: follow that segment's curve
    // into the frame up to the time where a straight run at the same speed
    // reaches the frame's far endpoint.
    auto hit_time = [&](const SegmentPoly& poly, double from, double to, const Point& far) {
      double best_t = from, best = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= 200; ++i) {
        const double t = from + (to - from) * i / 200.0;
        const double mismatch =
            std::abs(poly.derivative(t).norm() * std::abs(to - t) - (far - poly.eval(t)).norm());
        if (mismatch < best) {
          best = mismatch;
          best_t = t;
        }
      }
      return best_t;
    };
    std::vector<double> reach_end(fitted.size(), 0.0), reach_begin(fitted.size(), 0.0);
    for (int f : trimmed) {
      const FrameCurve& c = curves[static_cast<std::size_t>(f - 1)];
      const double t0 = frame_start_time(f);
      for (std::size_t k = 0; k < fitted.size(); ++k) {
        const std::vector<int>& fl = result.segments[fitted[k].segment].frame_list;
        SegmentPoly& poly = fitted[k].fit.poly;
        if (fl.back() == f - 1) {
          poly.t_end = hit_time(poly, t0, t0 + eps, c.end);
          reach_end[k] = std::max<double>(config.bounce.window_px, (c.end - c.start).norm());
          break;
        }
        if (fl.front() == f + 1 && (k == 0 || fitted[k - 1].t_finish() < t0)) {
          poly.t_start = hit_time(poly, t0 + eps, t0, c.start);
          reach_begin[k] = std::max<double>(config.bounce.window_px, (c.end - c.start).norm());
          break;
        }
      }
    }
    // Drop kinks already accounted for by an extension into a trimmed frame.
    auto prune = [](std::vector<Point> kinks, const Point& from, double from_reach, const Point& to,
                    double to_reach) {
      if (!kinks.empty() && from_reach > 0.0 && (kinks.front() - from).norm() <= from_reach) {
        kinks.erase(kinks.begin());
      }
      if (!kinks.empty() && to_reach > 0.0 && (kinks.back() - to).norm() <= to_reach) kinks.pop_back();
      return kinks;
    };

    // Linear chain across a gap. Observed endpoints of frames outside every
    // segment are passed at their own times and replace the path kinks.
    std::set<int> unfitted;
    for (const FrameCurve& c : curves) {
      if (c.present) unfitted.insert(c.frame_index);
    }
    for (const Segment& seg : result.segments) {
      for (int f : seg.frame_list) unfitted.erase(f);
    }
    auto chain = [&](const Point& from, const std::vector<Point>& kinks, const Point& to, double t0,
                     double t1, SegmentKind kind) {
      std::vector<std::pair<double, Point>> knots;
      for (int f : unfitted) {
        const FrameCurve& c = curves[static_cast<std::size_t>(f - 1)];
        const double tau = frame_start_time(f);
        if (tau > t0 && tau < t1) knots.push_back({tau, c.start});
        if (tau + eps > t0 && tau + eps < t1) knots.push_back({tau + eps, c.end});
      }
      if (knots.empty()) return interpolate_chain(from, kinks, to, t0, t1, kind);
      std::sort(knots.begin(), knots.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      knots.insert(knots.begin(), {t0, from});
      knots.push_back({t1, to});
      // Each kink goes to the span whose straight run passes nearest to it.
      std::vector<std::vector<Point>> held(knots.size());
      std::size_t lo = 1;
      for (const Point& k : kinks) {
        std::size_t best_i = lo;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = lo; i < knots.size(); ++i) {
          const Point a = knots[i - 1].second, d = knots[i].second - a;
          const double u = d.squaredNorm() > 0.0 ? std::clamp((k - a).dot(d) / d.squaredNorm(), 0.0, 1.0) : 0.0;
          const double dist = (a + u * d - k).norm();
          if (dist < best) {
            best = dist;
            best_i = i;
          }
        }
        held[best_i].push_back(k);
        lo = best_i;
      }
      std::vector<SegmentPoly> out;
      for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!(knots[i].first > knots[i - 1].first)) continue;
        const Point p0 = out.empty() ? from : out.back().eval(knots[i - 1].first);
        auto part = interpolate_chain(p0, held[i], knots[i].second, knots[i - 1].first, knots[i].first, kind);
        out.insert(out.end(), part.begin(), part.end());
      }
      return out;
    };

    // Detections before the first fitted segment: linear chain from the
    // first detected start through the bounces in between.
    const FittedSlot& head = fitted.front();
    const double t_first = frame_start_time(first_present->frame_index);
    if (t_first < head.t_begin()) {
      const Point to = head.fit.poly.eval(head.t_begin());
      auto pts = chain(first_present->start,
                                     prune(kinks_between(0, 0, head.part, head.local_index, nullptr),
                                           first_present->start, 0.0, to, reach_begin.front()),
                                     to, t_first, head.t_begin(),
                                     SegmentKind::bounce_linear);
      pieces.insert(pieces.end(), pts.begin(), pts.end());
    }

    for (std::size_t k = 0; k < fitted.size(); ++k) {
      const FittedSlot& cur = fitted[k];
      if (k > 0) {
        const FittedSlot& prev = fitted[k - 1];
        const double e = prev.t_finish();
        const double s = cur.t_begin();
        if (s > e) {
          SegmentKind kind = SegmentKind::bounce_linear;
          std::vector<Point> kinks;
          if (prev.part == cur.part) {
            auto& list = within[static_cast<std::size_t>(cur.part)];
            const int from = prev.local_index;
            if (config.refine_bounces && cur.local_index - from == 1) {
              double gap = 0.0;
              const Point meet = closest_approach(prev.fit.poly, cur.fit.poly, e, s, &gap);
              Bounce& b = list[static_cast<std::size_t>(from)];
              const double w = config.bounce.window_px;
              if (gap <= w && (meet - b.position).norm() <= w) b.position = meet;
            }
            kinks = kinks_between(cur.part, from, cur.part, cur.local_index, nullptr);
          } else {
            kind = SegmentKind::gap_linear;
            std::optional<Point> meet;
            if (cur.part == prev.part + 1) {
              Bounce b;
              b.origin = BounceOrigin::between_parts;
              b.position = closest_approach(prev.fit.poly, cur.fit.poly, e, s);
              between[cur.part] = b;
              meet = b.position;
            }
            kinks = kinks_between(prev.part, prev.local_index, cur.part, cur.local_index,
                                  meet ? &*meet : nullptr);
          }
          const Point from = prev.fit.poly.eval(e), to = cur.fit.poly.eval(s);
          kinks = prune(std::move(kinks), from, reach_end[k - 1], to, reach_begin[k]);
          auto pts = chain(from, kinks, to, e, s, kind);
          pieces.insert(pieces.end(), pts.begin(), pts.end());
        }
      }
      pieces.push_back(cur.fit.poly);
    }

    // Detections after the last fitted segment, symmetric to the head.
    const FittedSlot& tail = fitted.back();
    const double t_last = frame_start_time(last_present->frame_index) + eps;
    if (t_last > tail.t_finish()) {
      const int last_part = static_cast<int>(result.parts.size()) - 1;
      const Point from = tail.fit.poly.eval(tail.t_finish());
      auto pts = chain(
          from,
          prune(kinks_between(tail.part, tail.local_index, last_part,
                              static_cast<int>(within[static_cast<std::size_t>(last_part)].size()), nullptr),
                from, reach_end.back(), last_present->end, 0.0),
          last_present->end, tail.t_finish(), t_last, SegmentKind::bounce_linear);
      pieces.insert(pieces.end(), pts.begin(), pts.end());
    }
  }

  TrajectoryFn& traj = result.trajectory;
  traj.n_frames = seq.n_frames;
  traj.exposure = eps;
  traj.segments = extrapolate_ends(std::move(pieces), seq.n_frames);

  // Part boundaries always count as bounces.
  for (std::size_t p = 1; p < result.parts.size(); ++p) {
    const FrameRange& a = result.parts[p - 1].frame_range;
    const FrameRange& b = result.parts[p].frame_range;
    Bounce bounce;
    if (auto it = between.find(static_cast<int>(p)); it != between.end()) {
      bounce = it->second;
    } else {
      bounce.origin = BounceOrigin::between_parts;
      bounce.position = junction(p);
    }
    bounce.time_hint = nearest_endpoint_time(bounce.position, curves, {a.first, b.last}, eps);
    result.bounces.push_back(bounce);
  }
  for (const auto& list : within) result.bounces.insert(result.bounces.end(), list.begin(), list.end());
  std::stable_sort(result.bounces.begin(), result.bounces.end(),
                   [](const Bounce& x, const Bounce& y) { return x.time_hint < y.time_hint; });

  traj.validate();
  return result;
}

TrajectoryFn build_trajectory(const SequenceBundle& sequence, const PipelineConfig& config) {
  return stitch(sequence, config).trajectory;
}

}  // namespace tbdnc

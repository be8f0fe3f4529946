#include "tbdnc/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tbdnc/io.hpp"

namespace tbdnc {
namespace {

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  return s == "-0.000" ? "0.000" : s;
}

std::vector<Point> sample(const TrajectoryFn& traj) {
  const int n = kPlotSamplesPerFrame * traj.n_frames;
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) pts.push_back(traj.eval(static_cast<double>(traj.n_frames) * i / n));
  return pts;
}

std::string points_attr(const std::vector<Point>& pts) {
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += fixed3(pts[i].x()) + ',' + fixed3(pts[i].y());
  }
  return out;
}

// Blue (slow) to red (fast).
std::string ramp(double f) {
  f = std::clamp(f, 0.0, 1.0);
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(255 * f)), 64,
                static_cast<int>(std::lround(255 * (1.0 - f))));
  return buf;
}

}  // namespace

std::string render_svg(const TrajectoryFn& traj, const PlotOverlays& overlays) {
  traj.validate();
  const std::vector<Point> pts = sample(traj);
  std::vector<Point> gt_pts;
  if (overlays.ground_truth) gt_pts = sample(*overlays.ground_truth);

  double x0, y0, w, h;
  if (overlays.image_size) {
    x0 = 0.0;
    y0 = 0.0;
    w = overlays.image_size->first;
    h = overlays.image_size->second;
  } else {
    Point lo = pts.front(), hi = pts.front();
    for (const std::vector<Point>* set :
         std::initializer_list<const std::vector<Point>*>{&pts, &gt_pts, &overlays.bounces}) {
      for (const Point& p : *set) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
      }
    }
    x0 = std::floor(lo.x()) - 10.0;
    y0 = std::floor(lo.y()) - 10.0;
    w = std::ceil(hi.x()) + 10.0 - x0;
    h = std::ceil(hi.y()) + 10.0 - y0;
  }

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + fixed3(x0) + ' ' + fixed3(y0) +
         ' ' + fixed3(w) + ' ' + fixed3(h) + "\" width=\"" + fixed3(w) + "\" height=\"" +
         fixed3(h) + "\">\n";
  out += "<rect x=\"" + fixed3(x0) + "\" y=\"" + fixed3(y0) + "\" width=\"" + fixed3(w) +
         "\" height=\"" + fixed3(h) + "\" fill=\"white\"/>\n";

  if (!gt_pts.empty()) {
    std::string d;
    for (std::size_t i = 0; i < gt_pts.size(); ++i) {
      d += (i ? " L" : "M") + fixed3(gt_pts[i].x()) + ',' + fixed3(gt_pts[i].y());
    }
    out += "<path class=\"ground-truth\" d=\"" + d +
           "\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"1\" stroke-dasharray=\"4 2\"/>\n";
  }

  out += "<polyline class=\"trajectory\" points=\"" + points_attr(pts) +
         "\" fill=\"none\" stroke=\"#1f1f1f\" stroke-width=\"1.5\"/>\n";

  if (overlays.speed_colormap && pts.size() > 1) {
    const int n = static_cast<int>(pts.size()) - 1;
    std::vector<double> speed(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double t = traj.n_frames * (i + 0.5) / n;
      speed[static_cast<std::size_t>(i)] = traj.derivative(t).norm();
    }
    const auto [mn, mx] = std::minmax_element(speed.begin(), speed.end());
    const double span = *mx - *mn;
    out += "<g class=\"speed\" stroke-width=\"3\">\n";
    for (int i = 0; i < n; ++i) {
      const double f = span > 0.0 ? (speed[static_cast<std::size_t>(i)] - *mn) / span : 0.0;
      const Point& a = pts[static_cast<std::size_t>(i)];
      const Point& b = pts[static_cast<std::size_t>(i) + 1];
      out += "<line x1=\"" + fixed3(a.x()) + "\" y1=\"" + fixed3(a.y()) + "\" x2=\"" +
             fixed3(b.x()) + "\" y2=\"" + fixed3(b.y()) + "\" stroke=\"" + ramp(f) + "\"/>\n";
    }
    out += "</g>\n";
  }

  for (const Point& b : overlays.bounces) {
    out += "<circle class=\"bounce\" cx=\"" + fixed3(b.x()) + "\" cy=\"" + fixed3(b.y()) +
           "\" r=\"3.000\" fill=\"#d62728\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

void plot_svg(const TrajectoryFn& traj, const PlotOverlays& overlays,
              const std::filesystem::path& path) {
  io::write_text_atomic(path, render_svg(traj, overlays));
}

}  // namespace tbdnc

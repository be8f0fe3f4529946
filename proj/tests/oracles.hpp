// Independent reference computations shared by the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "tbdnc/core_types.hpp"

namespace oracle {

// Minimum of the path energy by exhaustive enumeration of every path with
// |dy| <= 2 per column, every start column and every end column. The kernel
// is mirrored when the causal start lies right of the causal end.
inline double brute_force_min_energy(const tbdnc::BlurKernel& k, double causal_start_x,
                                     double causal_end_x, double k1, double k2, double k3) {
  const int w = k.width();
  const int h = k.height();
  const bool mirror = causal_start_x > causal_end_x;
  auto value = [&](int x, int y) { return mirror ? k.at(w - 1 - x, y) : k.at(x, y); };
  auto column = [&](double x) {
    const int c = static_cast<int>(std::round(x));
    return mirror ? w - 1 - c : c;
  };
  const int cs = column(causal_start_x);
  const int ce = column(causal_end_x);

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> rows;
  // rows holds the path so far, starting at column xb.
  auto dfs = [&](auto&& self, int xb, double data, double curv) -> void {
    const int xe = xb + static_cast<int>(rows.size()) - 1;
    best = std::min(best, -data + k1 * curv + k2 * (cs - xb) + k3 * (xe - ce));
    if (xe + 1 >= w) return;
    const int y = rows.back();
    for (int dy = -2; dy <= 2; ++dy) {
      const int ny = y + dy;
      if (ny < 0 || ny >= h) continue;
      double c = curv;
      if (rows.size() >= 2) c += std::abs(dy - (y - rows[rows.size() - 2]));
      rows.push_back(ny);
      self(self, xb, data + value(xe + 1, ny), c);
      rows.pop_back();
    }
  };
  for (int xb = 0; xb < w; ++xb) {
    for (int y = 0; y < h; ++y) {
      rows.assign(1, y);
      dfs(dfs, xb, value(xb, y), 0.0);
    }
  }
  return best;
}

// Disk IoU by counting cell centres of an n x n grid over the union's
// bounding box.
inline double raster_disk_iou(const tbdnc::Point& c1, const tbdnc::Point& c2, double r, int n = 512) {
  const double x0 = std::min(c1.x(), c2.x()) - r;
  const double y0 = std::min(c1.y(), c2.y()) - r;
  const double x1 = std::max(c1.x(), c2.x()) + r;
  const double y1 = std::max(c1.y(), c2.y()) + r;
  long inter = 0, uni = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const tbdnc::Point p(x0 + (x1 - x0) * (i + 0.5) / n, y0 + (y1 - y0) * (j + 0.5) / n);
      const bool a = (p - c1).squaredNorm() <= r * r;
      const bool b = (p - c2).squaredNorm() <= r * r;
      inter += a && b;
      uni += a || b;
    }
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

inline tbdnc::BlurKernel random_kernel(std::mt19937_64& rng, int w, int h, double density = 0.6) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  tbdnc::BlurKernel k(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (u(rng) < density) k.set(x, y, u(rng));
    }
  }
  if (k.max() == 0.0) k.set(w / 2, h / 2, 0.5);
  return k;
}

// Unit-intensity anti-aliased drawing of y = f(x): each column splits one
// unit between the two rows around f(x).
template <typename F>
tbdnc::BlurKernel draw_curve(int w, int h, F&& f) {
  tbdnc::BlurKernel k(w, h);
  for (int x = 0; x < w; ++x) {
    const double y = f(static_cast<double>(x));
    const int y0 = static_cast<int>(std::floor(y));
    const double frac = y - y0;
    if (y0 >= 0 && y0 < h) k.add(x, y0, 1.0 - frac);
    if (y0 + 1 >= 0 && y0 + 1 < h) k.add(x, y0 + 1, frac);
  }
  return k;
}

}  // namespace oracle

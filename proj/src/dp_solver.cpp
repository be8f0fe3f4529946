#include "tbdnc/dp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace tbdnc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Steps in tie-break preference: smaller |dy| first, then negative before positive.
constexpr int kStepOrder[5] = {0, -1, 1, -2, 2};
constexpr int step_slot(int dy) { return dy + 2; }

// Problem in its working frame: causal start left of (or at) the causal end.
struct WorkingFrame {
  const BlurKernel* kernel;
  bool flipped;
  int start_col;
  int end_col;

  int width() const { return kernel->width(); }
  int height() const { return kernel->height(); }
  double value(int x, int y) const {
    return flipped ? kernel->at(kernel->width() - 1 - x, y) : kernel->at(x, y);
  }
};

WorkingFrame working_frame(const DpProblem& problem) {
  const BlurKernel& k = problem.accumulated_kernel;
  if (k.empty()) throw Error(ErrorKind::dimension, "dp kernel is empty");
  if (!std::isfinite(problem.causal_start_x) || !std::isfinite(problem.causal_end_x)) {
    throw Error(ErrorKind::argument, "causal endpoints must be finite");
  }
  const bool flipped = problem.causal_start_x > problem.causal_end_x;
  auto col = [&](double x) {
    const auto r = static_cast<int>(std::lround(x));
    return flipped ? k.width() - 1 - r : r;
  };
  return {&k, flipped, col(problem.causal_start_x), col(problem.causal_end_x)};
}

DiscretePath make_path(const WorkingFrame& wf, const DpProblem& problem, int x_begin,
                       std::vector<int> rows) {
  DiscretePath path;
  path.x_begin = x_begin;
  path.x_end = x_begin + static_cast<int>(rows.size()) - 1;
  path.rows = std::move(rows);
  path.axis = problem.axis;
  path.flipped = wf.flipped;
  path.frame_width = wf.width();
  return path;
}

DpResult degenerate_point(const WorkingFrame& wf, const DpProblem& problem) {
  const int col = std::clamp(wf.start_col, 0, wf.width() - 1);
  int row = wf.height() / 2;
  if (problem.causal_start_row && std::isfinite(*problem.causal_start_row)) {
    row = std::clamp(static_cast<int>(std::lround(*problem.causal_start_row)), 0,
                     wf.height() - 1);
  }
  DpResult r{make_path(wf, problem, col, {row}), 0.0};
  r.energy = energy(r.path, problem);
  return r;
}

DpResult solve_exact(const WorkingFrame& wf, const DpProblem& problem) {
  const int W = wf.width();
  const int H = wf.height();
  const double k1 = problem.params.kappa1;
  const double k2 = problem.params.kappa2;
  const double k3 = problem.params.kappa3;

  // State (x, y, incoming step). pred = -1: predecessor is a start pixel;
  // otherwise the predecessor's incoming step slot.
  const std::size_t n = static_cast<std::size_t>(W) * static_cast<std::size_t>(H) * 5;
  std::vector<double> cost(n, kInf);
  std::vector<std::int8_t> pred(n, -1);
  auto idx = [H](int x, int y, int slot) {
    return (static_cast<std::size_t>(x) * static_cast<std::size_t>(H) +
            static_cast<std::size_t>(y)) * 5 + static_cast<std::size_t>(slot);
  };
  auto start_cost = [&](int x, int y) {
    return -wf.value(x, y) + k2 * (wf.start_col - x);
  };

  for (int x = 1; x < W; ++x) {
    for (int y = 0; y < H; ++y) {
      const double data = -wf.value(x, y);
      for (int dy = -2; dy <= 2; ++dy) {
        const int py = y - dy;
        if (py < 0 || py >= H) continue;
        double best = kInf;
        std::int8_t best_pred = -1;
        if (x - 1 >= 1) {
          for (int pdy : kStepOrder) {
            const double c = cost[idx(x - 1, py, step_slot(pdy))];
            if (c == kInf) continue;
            const double cand = c + k1 * std::abs(dy - pdy);
            if (cand < best) {
              best = cand;
              best_pred = static_cast<std::int8_t>(step_slot(pdy));
            }
          }
        }
        const double from_start = start_cost(x - 1, py);
        if (from_start < best) {
          best = from_start;
          best_pred = -1;
        }
        cost[idx(x, y, step_slot(dy))] = data + best;
        pred[idx(x, y, step_slot(dy))] = best_pred;
      }
    }
  }

  double best = kInf;
  int end_x = 0, end_y = 0, end_slot = -1;
  for (int x = 0; x < W; ++x) {
    const double tail = k3 * (x - wf.end_col);
    for (int y = 0; y < H; ++y) {
      for (int dy : kStepOrder) {
        const double c = cost[idx(x, y, step_slot(dy))];
        if (c == kInf) continue;
        if (c + tail < best) {
          best = c + tail;
          end_x = x;
          end_y = y;
          end_slot = step_slot(dy);
        }
      }
      const double c = start_cost(x, y) + tail;
      if (c < best) {
        best = c;
        end_x = x;
        end_y = y;
        end_slot = -1;
      }
    }
  }

  std::vector<int> rows{end_y};
  int x = end_x, y = end_y, slot = end_slot;
  while (slot >= 0) {
    const int dy = slot - 2;
    const int next_slot = pred[idx(x, y, slot)];
    y -= dy;
    x -= 1;
    rows.push_back(y);
    slot = next_slot;
  }
  std::reverse(rows.begin(), rows.end());
  return {make_path(wf, problem, x, std::move(rows)), best};
}

// Two tables only (cost, decision) per pixel; the curvature term uses the
// predecessor's stored incoming step, so the result is not always optimal.
DpResult solve_two_table(const WorkingFrame& wf, const DpProblem& problem) {
  const int W = wf.width();
  const int H = wf.height();
  const double k1 = problem.params.kappa1;
  const double k2 = problem.params.kappa2;
  const double k3 = problem.params.kappa3;
  constexpr int kStart = 99;

  const std::size_t n = static_cast<std::size_t>(W) * static_cast<std::size_t>(H);
  std::vector<double> cost(n, kInf);
  std::vector<int> decision(n, kStart);
  auto idx = [H](int x, int y) {
    return static_cast<std::size_t>(x) * static_cast<std::size_t>(H) + static_cast<std::size_t>(y);
  };

  for (int x = 0; x < W; ++x) {
    for (int y = 0; y < H; ++y) {
      double best = kInf;
      int best_dec = kStart;
      if (x > 0) {
        for (int dy : kStepOrder) {
          const int py = y - dy;
          if (py < 0 || py >= H) continue;
          const int prev = decision[idx(x - 1, py)];
          const double curv = prev == kStart ? 0.0 : k1 * std::abs(dy - prev);
          const double cand = cost[idx(x - 1, py)] + curv;
          if (cand < best) {
            best = cand;
            best_dec = dy;
          }
        }
      }
      const double from_start = k2 * (wf.start_col - x);
      if (from_start < best) {
        best = from_start;
        best_dec = kStart;
      }
      cost[idx(x, y)] = -wf.value(x, y) + best;
      decision[idx(x, y)] = best_dec;
    }
  }

  double best = kInf;
  int end_x = 0, end_y = 0;
  for (int x = 0; x < W; ++x) {
    for (int y = 0; y < H; ++y) {
      const double c = cost[idx(x, y)] + k3 * (x - wf.end_col);
      if (c < best) {
        best = c;
        end_x = x;
        end_y = y;
      }
    }
  }

  std::vector<int> rows{end_y};
  int x = end_x, y = end_y;
  while (decision[idx(x, y)] != kStart) {
    y -= decision[idx(x, y)];
    x -= 1;
    rows.push_back(y);
  }
  std::reverse(rows.begin(), rows.end());
  DpResult r{make_path(wf, problem, x, std::move(rows)), 0.0};
  r.energy = energy(r.path, problem);
  return r;
}

}  // namespace

BlurKernel accumulate_kernels(const std::vector<FrameRecord>& frames, int t_a, int t_b,
                              int fallback_width, int fallback_height) {
  if (t_a > t_b || t_a < 1 || t_b > static_cast<int>(frames.size())) {
    throw Error(ErrorKind::argument, "invalid frame range for kernel accumulation");
  }
  std::optional<BlurKernel> acc;
  for (int t = t_a; t <= t_b; ++t) {
    const auto& rec = frames[static_cast<std::size_t>(t - 1)];
    if (!rec.kernel) continue;
    const BlurKernel& k = *rec.kernel;
    if (!acc) {
      acc = k;
      continue;
    }
    if (k.width() != acc->width() || k.height() != acc->height()) {
      throw Error(ErrorKind::dimension, "kernels of one part must share their dimensions");
    }
    std::vector<double> sum = acc->values();
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += k.values()[i];
    acc = BlurKernel(acc->width(), acc->height(), std::move(sum));
  }
  if (acc) return *acc;
  if (fallback_width < 1 || fallback_height < 1) {
    throw Error(ErrorKind::dimension, "no kernel in range and no fallback size given");
  }
  return BlurKernel(fallback_width, fallback_height);
}

double energy(const DiscretePath& path, const DpProblem& problem) {
  const WorkingFrame wf = working_frame(problem);
  if (path.flipped != wf.flipped) {
    throw Error(ErrorKind::argument, "path orientation does not match the problem");
  }
  if (path.x_begin > path.x_end || path.length() != path.x_end - path.x_begin + 1) {
    throw Error(ErrorKind::argument, "malformed discrete path");
  }
  if (path.x_begin < 0 || path.x_end >= wf.width()) {
    throw Error(ErrorKind::bounds, "path columns outside the kernel");
  }
  double data = 0.0;
  for (int i = 0; i < path.length(); ++i) {
    const int y = path.rows[static_cast<std::size_t>(i)];
    if (y < 0 || y >= wf.height()) throw Error(ErrorKind::bounds, "path rows outside the kernel");
    data += wf.value(path.x_begin + i, y);
  }
  double curvature = 0.0;
  for (int i = 2; i < path.length(); ++i) {
    const int d1 = path.rows[static_cast<std::size_t>(i)] - path.rows[static_cast<std::size_t>(i - 1)];
    const int d0 = path.rows[static_cast<std::size_t>(i - 1)] - path.rows[static_cast<std::size_t>(i - 2)];
    curvature += std::abs(d1 - d0);
  }
  const auto& p = problem.params;
  return -data + p.kappa1 * curvature + p.kappa2 * (wf.start_col - path.x_begin) +
         p.kappa3 * (path.x_end - wf.end_col);
}

DpResult solve(const DpProblem& problem) {
  problem.params.validate();
  const WorkingFrame wf = working_frame(problem);
  if (problem.accumulated_kernel.max() == 0.0) return degenerate_point(wf, problem);
  return problem.params.exact_state ? solve_exact(wf, problem)
                                    : solve_two_table(wf, problem);
}

DpResult solve_best_orientation(const DpProblem& problem_colwise,
                                const DpProblem& problem_rowwise) {
  DpProblem col = problem_colwise;
  DpProblem row = problem_rowwise;
  col.axis = Axis::column_wise;
  row.axis = Axis::row_wise;
  DpResult a = solve(col);
  DpResult b = solve(row);
  return b.energy < a.energy ? b : a;
}

std::pair<DpProblem, DpProblem> make_problems(const BlurKernel& kernel, const Point& start,
                                              const Point& end, const DpParams& params) {
  DpProblem col{kernel, start.x(), end.x(), params, Axis::column_wise, start.y()};
  DpProblem row{kernel.transposed(), start.y(), end.y(), params, Axis::row_wise, start.x()};
  return {std::move(col), std::move(row)};
}

}  // namespace tbdnc

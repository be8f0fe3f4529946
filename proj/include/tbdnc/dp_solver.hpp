#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tbdnc/core_types.hpp"

namespace tbdnc {

/// One orientation of the path-extraction problem for a non-intersecting part.
///
/// `accumulated_kernel` is already in the problem's orientation (transposed for
/// row_wise). The causal x values are rounded to integer columns before use.
/// If the causal start lies right of the causal end, the solver works on the
/// left-right mirrored kernel and marks the returned path as flipped.
struct DpProblem {
  BlurKernel accumulated_kernel;
  double causal_start_x = 0.0;
  double causal_end_x = 0.0;
  DpParams params;
  Axis axis = Axis::column_wise;
  // Cross-axis coordinate of the causal start; only used to place the
  // single-point answer on an all-zero kernel.
  std::optional<double> causal_start_row;
};

struct DpResult {
  DiscretePath path;
  double energy = 0.0;
};

/// Element-wise sum of the kernels of frames t_a..t_b (1-based, inclusive).
/// Frames without a kernel contribute nothing; if none has one, the result is
/// an all-zero kernel of `fallback_width` x `fallback_height`.
BlurKernel accumulate_kernels(const std::vector<FrameRecord>& frames, int t_a, int t_b,
                              int fallback_width = 0, int fallback_height = 0);

/// E(P) of a path expressed in the problem's working frame.
double energy(const DiscretePath& path, const DpProblem& problem);

DpResult solve(const DpProblem& problem);

/// Solves both orientations and keeps the lower energy (column-wise on ties).
DpResult solve_best_orientation(const DpProblem& problem_colwise,
                                const DpProblem& problem_rowwise);

/// Builds the column-wise and row-wise problems for a kernel in image
/// coordinates and the causal start/end points of the part.
std::pair<DpProblem, DpProblem> make_problems(const BlurKernel& kernel, const Point& start,
                                              const Point& end, const DpParams& params);

}  // namespace tbdnc

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tbdnc/core_types.hpp"

namespace tbdnc {

inline constexpr int kPlotSamplesPerFrame = 20;

struct PlotOverlays {
  std::optional<TrajectoryFn> ground_truth;  // drawn as a dashed path
  std::vector<Point> bounces;                // one circle marker each
  bool speed_colormap = false;               // colour segments by |C'(t)|
  std::optional<std::pair<int, int>> image_size;
};

/// Standalone SVG document. The estimate is the only <polyline>; output is
/// deterministic (fixed three-decimal coordinates).
std::string render_svg(const TrajectoryFn& traj, const PlotOverlays& overlays = {});

void plot_svg(const TrajectoryFn& traj, const PlotOverlays& overlays,
              const std::filesystem::path& path);

}  // namespace tbdnc

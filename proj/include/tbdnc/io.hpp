#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tbdnc/core_types.hpp"
#include "tbdnc/evaluation.hpp"
#include "tbdnc/pipeline.hpp"

namespace tbdnc::io {

inline constexpr const char* kBundleFormat = "tbdnc-bundle/1";
inline constexpr const char* kTrajectoryFormat = "tbdnc-trajectory/1";

enum class ReadMode {
  strict,   // unknown keys are an error
  lenient,  // unknown top-level keys are kept in SequenceBundle::extra_fields
};

/// Bounce markers stored next to a trajectory: position and time hint.
struct BounceMark {
  Point position = Point::Zero();
  double time = 0.0;

  friend bool operator==(const BounceMark&, const BounceMark&) = default;
};

struct TrajectoryFile {
  TrajectoryFn trajectory;
  std::vector<BounceMark> bounces;
};

// Text forms. Output is canonical: sorted keys, shortest round-trip floats,
// one frame or segment per line, sparse kernels when that is smaller.
std::string bundle_to_text(const SequenceBundle& bundle);
SequenceBundle bundle_from_text(const std::string& text, ReadMode mode = ReadMode::strict);

std::string trajectory_to_text(const TrajectoryFn& traj, const std::vector<BounceMark>& bounces = {});
TrajectoryFile trajectory_from_text(const std::string& text, ReadMode mode = ReadMode::strict);

std::vector<BounceMark> bounce_marks(const StitchResult& result);

// File forms. Writes go to a temporary sibling and are renamed into place.
void write_bundle(const SequenceBundle& bundle, const std::filesystem::path& path);
SequenceBundle read_bundle(const std::filesystem::path& path, ReadMode mode = ReadMode::strict);

void write_trajectory(const TrajectoryFn& traj, const std::filesystem::path& path,
                      const std::vector<BounceMark>& bounces = {});
TrajectoryFile read_trajectory(const std::filesystem::path& path, ReadMode mode = ReadMode::strict);

void write_text_atomic(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// "key=value" record; reals use 17 significant digits.
std::string report_line(const EvalReport& report);
std::string format_real(double v);

}  // namespace tbdnc::io

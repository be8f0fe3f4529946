// tbdnc: command-line front end for trajectory reconstruction.
//
//   tbdnc synth  --frames 20 --seed 7 --out b.bundle
//   tbdnc stitch b.bundle --out b.traj
//   tbdnc eval   b.traj b.bundle
//   tbdnc speed  b.traj --hit-point 120,80 --fps 29.97 --court-px 1519 --court-feet 78
//   tbdnc plot   b.traj --bundle b.bundle --out b.svg

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "tbdnc/errors.hpp"
#include "tbdnc/evaluation.hpp"
#include "tbdnc/io.hpp"
#include "tbdnc/physics.hpp"
#include "tbdnc/pipeline.hpp"
#include "tbdnc/svg_plot.hpp"
#include "tbdnc/synth.hpp"

namespace fs = std::filesystem;
using namespace tbdnc;

namespace {

enum Exit : int { kOk = 0, kUsage = 2, kPipeline = 3, kIo = 4 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io:
      return kIo;
    case ErrorKind::empty_input:
    case ErrorKind::exposure_undefined:
    case ErrorKind::gravity_not_dominant:
    case ErrorKind::no_curvature:
    case ErrorKind::kernel_too_noisy:
    case ErrorKind::empty_report:
      return kPipeline;
    default:
      return kUsage;
  }
}

// Runs `body`, mapping library errors to exit codes and messages on stderr.
template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPipeline;
  }
}

Point parse_point(const std::string& text) {
  double x = 0.0, y = 0.0;
  char sep = 0;
  std::istringstream is(text);
  is.imbue(std::locale::classic());
  if (!(is >> x >> sep >> y) || sep != ',' || !is.eof()) {
    throw Error(ErrorKind::argument, "expected a point as x,y, got '" + text + "'");
  }
  return {x, y};
}

// "y:200" or "x:300:0.8" (axis, coordinate, optional restitution).
BouncePlane parse_plane(const std::string& text) {
  BouncePlane plane;
  std::istringstream is(text);
  is.imbue(std::locale::classic());
  std::string axis;
  if (!std::getline(is, axis, ':') || (axis != "x" && axis != "y")) {
    throw Error(ErrorKind::argument, "plane axis must be x or y in '" + text + "'");
  }
  plane.axis = axis == "x" ? PlaneAxis::x : PlaneAxis::y;
  if (!(is >> plane.coordinate)) throw Error(ErrorKind::argument, "bad plane coordinate in '" + text + "'");
  if (is.peek() == ':') {
    is.get();
    if (!(is >> plane.restitution)) {
      throw Error(ErrorKind::argument, "bad plane restitution in '" + text + "'");
    }
  }
  if (!is.eof()) throw Error(ErrorKind::argument, "trailing characters in plane '" + text + "'");
  return plane;
}

struct SynthArgs {
  SynthSpec spec;
  std::vector<double> position{spec.initial_position.x(), spec.initial_position.y()};
  std::vector<double> velocity{spec.initial_velocity.x(), spec.initial_velocity.y()};
  std::vector<std::string> planes;
  bool no_kernels = false;
  std::string out;
};

int cmd_synth(SynthArgs& a) {
  return guarded([&] {
    a.spec.initial_position = {a.position[0], a.position[1]};
    a.spec.initial_velocity = {a.velocity[0], a.velocity[1]};
    a.spec.render_kernels = !a.no_kernels;
    for (const auto& p : a.planes) a.spec.bounce_planes.push_back(parse_plane(p));
    try {
      a.spec.validate();
    } catch (const Error& e) {
      std::cerr << "error: invalid scenario: " << e.what() << '\n';
      return int{kUsage};
    }
    const SynthOutput out = generate(a.spec);
    io::write_bundle(out.bundle, a.out);
    std::cout << "frames=" << a.spec.n_frames << " bounces=" << out.bounce_times.size()
              << " out=" << a.out << '\n';
    return int{kOk};
  });
}

struct StitchArgs {
  std::vector<std::string> bundles;
  std::string out;
  std::string out_dir;
  int jobs = 1;
  bool lenient = false;
  bool two_table = false;
  bool no_normalize = false;
  bool no_refine = false;
  bool no_steep_split = false;
  bool fixed_exposure = false;
  bool no_trim = false;
  PipelineConfig config;
};

std::string stitch_line(const StitchResult& r) {
  return "exposure=" + io::format_real(r.exposure) + " segments=" + std::to_string(r.segments.size()) +
         " bounces=" + std::to_string(r.bounces.size()) +
         " pieces=" + std::to_string(r.trajectory.segments.size());
}

int cmd_stitch(StitchArgs& a) {
  a.config.dp.exact_state = !a.two_table;
  a.config.normalize_kernel_peak = !a.no_normalize;
  a.config.refine_bounces = !a.no_refine;
  a.config.split_steep_parts = !a.no_steep_split;
  a.config.refine_exposure = !a.fixed_exposure;
  a.config.trim_straddling_frames = !a.no_trim;
  const bool batch = a.bundles.size() > 1;
  if (batch && a.out_dir.empty()) {
    std::cerr << "error: several bundles need --out-dir\n";
    return kUsage;
  }
  if (!batch && a.out.empty() && a.out_dir.empty()) {
    std::cerr << "error: --out or --out-dir is required\n";
    return kUsage;
  }
  if (int rc = guarded([&] { a.config.validate(); return int{kOk}; }); rc != kOk) return rc;
  if (!a.out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(a.out_dir, ec);
    if (ec) {
      std::cerr << "error: cannot create '" << a.out_dir << "'\n";
      return kIo;
    }
  }

  const std::size_t n = a.bundles.size();
  std::vector<std::string> lines(n), errors(n);
  std::vector<int> codes(n, kOk);
  // Workers never print; lines and messages are emitted in input order.
  auto run_one = [&](std::size_t i) {
    const fs::path in = a.bundles[i];
    const fs::path dst = a.out.empty() || batch ? fs::path(a.out_dir) / (in.stem().string() + ".traj")
                                                : fs::path(a.out);
    codes[i] = [&] {
      try {
        const SequenceBundle bundle =
            io::read_bundle(in, a.lenient ? io::ReadMode::lenient : io::ReadMode::strict);
        const StitchResult r = stitch(bundle, a.config);
        io::write_trajectory(r.trajectory, dst, io::bounce_marks(r));
        lines[i] = (batch ? "bundle=" + in.string() + " " : std::string()) + stitch_line(r);
        return int{kOk};
      } catch (const Error& e) {
        errors[i] = "error: " + in.string() + ": " + e.what();
        return exit_code(e.kind());
      } catch (const std::exception& e) {
        errors[i] = "error: " + in.string() + ": " + e.what();
        return int{kPipeline};
      }
    }();
  };

  const int jobs = std::clamp(a.jobs, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) run_one(i);
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int rc = kOk;
  for (std::size_t i = 0; i < n; ++i) {
    if (codes[i] == kOk) {
      std::cout << lines[i] << '\n';
    } else {
      std::cerr << errors[i] << '\n';
      rc = std::max(rc, codes[i]);
    }
  }
  return rc;
}

struct EvalArgs {
  std::string trajectory;
  std::string bundle;
  bool speed = false;
};

int cmd_eval(const EvalArgs& a) {
  return guarded([&] {
    const io::TrajectoryFile est = io::read_trajectory(a.trajectory);
    const SequenceBundle bundle = io::read_bundle(a.bundle);
    if (!bundle.ground_truth) throw Error(ErrorKind::argument, "bundle carries no ground truth");
    std::optional<SpeedProfile> speed_gt;
    if (a.speed) {
      const TrajectoryFn& gt = bundle.ground_truth->trajectory;
      speed_gt = speed_profile(gt, std::nullopt, kPlotSamplesPerFrame * gt.n_frames + 1);
    }
    std::cout << io::report_line(sequence_report(est.trajectory, *bundle.ground_truth, speed_gt)) << '\n';
    return int{kOk};
  });
}

struct SpeedArgs {
  std::string trajectory;
  std::optional<double> radius;
  int samples_per_frame = kPlotSamplesPerFrame;
  std::string hit_point;
  double fps = 30.0;
  std::optional<double> meters_per_pixel;
  std::optional<double> court_px;
  std::optional<double> court_feet;
};

int cmd_speed(const SpeedArgs& a) {
  return guarded([&] {
    if (a.samples_per_frame < 1) throw Error(ErrorKind::argument, "--samples-per-frame must be positive");
    const TrajectoryFn traj = io::read_trajectory(a.trajectory).trajectory;
    std::optional<double> mpp = a.meters_per_pixel;
    if (a.court_px || a.court_feet) {
      if (!a.court_px || !a.court_feet) {
        throw Error(ErrorKind::argument, "--court-px and --court-feet go together");
      }
      mpp = meters_per_pixel_from_feet(*a.court_px, *a.court_feet);
    }
    std::optional<HitSpeed> hit;
    std::optional<CalibratedSpeed> cal;
    if (!a.hit_point.empty()) {
      if (!mpp) throw Error(ErrorKind::argument, "--hit-point needs --meters-per-pixel or --court-px/--court-feet");
      hit = speed_at_hit(traj, parse_point(a.hit_point));
      cal = calibrate_speed(hit->speed, *mpp, a.fps);
    }
    const SpeedProfile profile =
        speed_profile(traj, a.radius, a.samples_per_frame * traj.n_frames + 1);
    std::cout << "t,speed," << to_string(profile.units) << '\n';
    for (const auto& s : profile.samples) {
      std::cout << io::format_real(s.t) << ',' << io::format_real(s.speed) << '\n';
    }
    if (hit) {
      std::cout << "t_hit=" << io::format_real(hit->t_hit) << " speed_px=" << io::format_real(hit->speed)
                << " meters_per_pixel=" << io::format_real(*mpp) << " mps=" << io::format_real(cal->mps)
                << " mph=" << io::format_real(cal->mph) << '\n';
    }
    return int{kOk};
  });
}

struct PlotArgs {
  std::string trajectory;
  std::string bundle;
  std::string out;
  bool speed_colormap = false;
};

int cmd_plot(const PlotArgs& a) {
  return guarded([&] {
    const io::TrajectoryFile file = io::read_trajectory(a.trajectory);
    PlotOverlays overlays;
    for (const auto& b : file.bounces) overlays.bounces.push_back(b.position);
    overlays.speed_colormap = a.speed_colormap;
    if (!a.bundle.empty()) {
      const SequenceBundle bundle = io::read_bundle(a.bundle);
      if (bundle.ground_truth) overlays.ground_truth = bundle.ground_truth->trajectory;
      overlays.image_size = std::make_pair(bundle.image_width, bundle.image_height);
    }
    plot_svg(file.trajectory, overlays, a.out);
    return int{kOk};
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Piecewise-polynomial trajectories of fast-moving objects from blur kernels"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", "tbdnc 1.0.0");

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic bundle with ground truth");
  s->add_option("--frames", synth.spec.n_frames, "Number of frames");
  s->add_option("--fps", synth.spec.fps, "Frame rate");
  s->add_option("--exposure", synth.spec.exposure, "Exposure fraction in (0, 1]");
  s->add_option("--gravity", synth.spec.gravity_px, "Quadratic coefficient of y(t), px/frame^2");
  s->add_option("--position", synth.position, "Initial position x y")->expected(2);
  s->add_option("--velocity", synth.velocity, "Initial velocity x y, px/frame")->expected(2);
  s->add_option("--plane", synth.planes, "Reflecting plane axis:coordinate[:restitution], repeatable");
  s->add_option("--radius", synth.spec.radius_px, "Object radius, px");
  s->add_option("--kernel-noise", synth.spec.kernel_noise_sigma, "Kernel noise sigma, relative to peak");
  s->add_option("--endpoint-noise", synth.spec.endpoint_noise_sigma, "Endpoint noise sigma, px");
  s->add_option("--dropout", synth.spec.dropout, "Frames rendered as missing detections");
  s->add_option("--seed", synth.spec.seed, "Random seed");
  s->add_option("--width", synth.spec.image_width, "Image width, px");
  s->add_option("--height", synth.spec.image_height, "Image height, px");
  s->add_flag("--no-kernels", synth.no_kernels, "Omit blur kernels");
  s->add_option("--out", synth.out, "Output bundle")->required();

  StitchArgs st;
  auto* t = app.add_subcommand("stitch", "Reconstruct a trajectory from one or more bundles");
  t->add_option("bundles", st.bundles, "Input bundles")->required();
  t->add_option("--out", st.out, "Output trajectory (single bundle)");
  t->add_option("--out-dir", st.out_dir, "Output directory; files are named <stem>.traj");
  t->add_option("--jobs", st.jobs, "Bundles processed in parallel");
  t->add_option("--kappa1", st.config.dp.kappa1, "Curvature penalty");
  t->add_option("--kappa2", st.config.dp.kappa2, "Penalty for starting before the causal start");
  t->add_option("--kappa3", st.config.dp.kappa3, "Penalty for ending after the causal end");
  t->add_flag("--two-table", st.two_table, "Two-table recursion instead of the exact state");
  t->add_option("--bounce-window", st.config.bounce.window_px, "Bounce detection window, path steps");
  t->add_option("--bounce-angle", st.config.bounce.angle_threshold_deg, "Bounce angle threshold, degrees");
  t->add_option("--circle-split", st.config.bounce.circle_split_deg, "Total turn that splits a smooth path, degrees");
  t->add_option("--max-degree", st.config.max_degree, "Upper bound on segment degree");
  t->add_option("--single-frame-exposure", st.config.single_frame_exposure, "Exposure when one frame is detected");
  t->add_flag("--no-normalize", st.no_normalize, "Use raw kernel values in the path search");
  t->add_flag("--no-refine", st.no_refine, "Keep bounces at their path positions");
  t->add_flag("--no-steep-split", st.no_steep_split, "Keep parts whose monotone axis is too steep to trace");
  t->add_flag("--fixed-exposure", st.fixed_exposure, "Keep the chord-ratio exposure, skip residual refinement");
  t->add_flag("--no-trim", st.no_trim, "Fit edge frames that straddle a bounce like any other");
  t->add_flag("--lenient", st.lenient, "Accept and ignore unknown bundle keys");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "TIoU and recall against the bundle's ground truth");
  e->add_option("trajectory", ev.trajectory, "Estimated trajectory")->required();
  e->add_option("bundle", ev.bundle, "Bundle with ground truth")->required();
  e->add_flag("--speed", ev.speed, "Also report mean absolute speed error, px/frame");

  SpeedArgs sp;
  auto* v = app.add_subcommand("speed", "Speed profile and calibrated hit speed");
  v->add_option("trajectory", sp.trajectory, "Trajectory file")->required();
  v->add_option("--radius", sp.radius, "Report speed in radii per frame");
  v->add_option("--samples-per-frame", sp.samples_per_frame, "Profile samples per frame");
  v->add_option("--hit-point", sp.hit_point, "Image point x,y of the hit");
  v->add_option("--fps", sp.fps, "Frame rate for calibration");
  v->add_option("--meters-per-pixel", sp.meters_per_pixel, "Image scale");
  v->add_option("--court-px", sp.court_px, "Known length in pixels");
  v->add_option("--court-feet", sp.court_feet, "Same length in feet");

  PlotArgs pl;
  auto* p = app.add_subcommand("plot", "Render a trajectory as SVG");
  p->add_option("trajectory", pl.trajectory, "Trajectory file")->required();
  p->add_option("--bundle", pl.bundle, "Bundle for ground truth and image size");
  p->add_option("--out", pl.out, "Output SVG")->required();
  p->add_flag("--speed-colormap", pl.speed_colormap, "Colour the path by speed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? kOk : kUsage;
  }

  if (*s) return cmd_synth(synth);
  if (*t) return cmd_stitch(st);
  if (*e) return cmd_eval(ev);
  if (*v) return cmd_speed(sp);
  return cmd_plot(pl);
}

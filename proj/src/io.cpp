#include "tbdnc/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace tbdnc::io {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorKind::parse, what);
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("malformed document", line, column);
  }
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) schema_error(where + " must be an object");
  for (const auto& item : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* k) { return item.key() == k; })) {
      schema_error("unknown key '" + item.key() + "' in " + where);
    }
  }
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error("missing key '" + std::string(key) + "' in " + where);
  return *it;
}

double real(const json& v, const std::string& what) {
  if (!v.is_number()) schema_error(what + " must be a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) schema_error(what + " must be an integer");
  return v.get<int>();
}

json point_json(const Point& p) { return json::array({p.x(), p.y()}); }

Point point_from(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 2) schema_error(what + " must be [x, y]");
  return {real(v[0], what), real(v[1], what)};
}

json kernel_json(const BlurKernel& k) {
  const auto& vals = k.values();
  const auto nnz = static_cast<std::size_t>(
      std::count_if(vals.begin(), vals.end(), [](double v) { return v != 0.0; }));
  json out = {{"width", k.width()}, {"height", k.height()}};
  if (3 * nnz < vals.size()) {
    json entries = json::array();
    for (int y = 0; y < k.height(); ++y) {
      for (int x = 0; x < k.width(); ++x) {
        if (k.at(x, y) != 0.0) entries.push_back(json::array({x, y, k.at(x, y)}));
      }
    }
    out["encoding"] = "sparse";
    out["entries"] = std::move(entries);
  } else {
    out["encoding"] = "dense";
    out["values"] = vals;
  }
  return out;
}

BlurKernel kernel_from(const json& v, ReadMode mode) {
  const std::string where = "kernel";
  if (mode == ReadMode::strict) check_keys(v, {"width", "height", "encoding", "values", "entries"}, where);
  const int w = integer(field(v, "width", where), "kernel width");
  const int h = integer(field(v, "height", where), "kernel height");
  if (w < 1 || h < 1) schema_error("kernel size must be positive");
  const json& enc = field(v, "encoding", where);
  if (enc == "dense") {
    const json& vals = field(v, "values", where);
    if (!vals.is_array()) schema_error("kernel values must be an array");
    std::vector<double> out;
    out.reserve(vals.size());
    for (const auto& x : vals) out.push_back(real(x, "kernel value"));
    return BlurKernel(w, h, std::move(out));
  }
  if (enc == "sparse") {
    BlurKernel k(w, h);
    const json& entries = field(v, "entries", where);
    if (!entries.is_array()) schema_error("kernel entries must be an array");
    for (const auto& e : entries) {
      if (!e.is_array() || e.size() != 3) schema_error("sparse entries must be [x, y, value]");
      k.add(integer(e[0], "entry x"), integer(e[1], "entry y"), real(e[2], "entry value"));
    }
    return k;
  }
  schema_error("kernel encoding must be 'dense' or 'sparse'");
}

json trajectory_body(const TrajectoryFn& traj) {
  json segs = json::array();
  for (const auto& s : traj.segments) {
    std::vector<double> xs, ys;
    for (int k = 0; k < s.coeffs.cols(); ++k) {
      xs.push_back(s.coeffs(0, k));
      ys.push_back(s.coeffs(1, k));
    }
    segs.push_back({{"t_start", s.t_start},
                    {"t_end", s.t_end},
                    {"degree", s.degree},
                    {"kind", to_string(s.kind)},
                    {"origin", s.origin},
                    {"scale", s.scale},
                    {"x", xs},
                    {"y", ys}});
  }
  return {{"n_frames", traj.n_frames}, {"exposure", traj.exposure}, {"segments", segs}};
}

TrajectoryFn trajectory_from(const json& v, ReadMode mode, bool with_format) {
  const std::string where = "trajectory";
  if (mode == ReadMode::strict) {
    if (with_format) {
      check_keys(v, {"format", "n_frames", "exposure", "segments", "bounces"}, where);
    } else {
      check_keys(v, {"n_frames", "exposure", "segments"}, where);
    }
  }
  TrajectoryFn traj;
  traj.n_frames = integer(field(v, "n_frames", where), "n_frames");
  traj.exposure = real(field(v, "exposure", where), "exposure");
  const json& segs = field(v, "segments", where);
  if (!segs.is_array()) schema_error("segments must be an array");
  for (const auto& s : segs) {
    if (mode == ReadMode::strict) {
      check_keys(s, {"t_start", "t_end", "degree", "kind", "origin", "scale", "x", "y"}, "segment");
    }
    SegmentPoly p;
    p.t_start = real(field(s, "t_start", "segment"), "t_start");
    p.t_end = real(field(s, "t_end", "segment"), "t_end");
    p.degree = integer(field(s, "degree", "segment"), "degree");
    const json& kind = field(s, "kind", "segment");
    if (!kind.is_string()) schema_error("segment kind must be a string");
    p.kind = segment_kind_from_string(kind.get<std::string>());
    p.origin = real(field(s, "origin", "segment"), "origin");
    p.scale = real(field(s, "scale", "segment"), "scale");
    const json& xs = field(s, "x", "segment");
    const json& ys = field(s, "y", "segment");
    if (!xs.is_array() || !ys.is_array() || xs.size() != ys.size()) {
      schema_error("segment x/y coefficient arrays must have equal length");
    }
    p.coeffs.resize(2, static_cast<Eigen::Index>(xs.size()));
    for (std::size_t k = 0; k < xs.size(); ++k) {
      p.coeffs(0, static_cast<Eigen::Index>(k)) = real(xs[k], "coefficient");
      p.coeffs(1, static_cast<Eigen::Index>(k)) = real(ys[k], "coefficient");
    }
    traj.segments.push_back(std::move(p));
  }
  try {
    traj.validate();
  } catch (const Error& e) {
    schema_error(std::string("invalid trajectory: ") + e.what());
  }
  return traj;
}

void check_format(const json& doc, const char* expected) {
  if (!doc.is_object()) schema_error("document must be an object");
  auto it = doc.find("format");
  if (it == doc.end() || !it->is_string()) {
    throw Error(ErrorKind::version, std::string("missing format tag, expected ") + expected);
  }
  if (it->get<std::string>() != expected) {
    throw Error(ErrorKind::version, "unsupported format '" + it->get<std::string>() +
                                        "', expected " + expected);
  }
}

// Top-level keys one per line; arrays of objects one element per line.
std::string layout(const json& doc) {
  std::string out = "{\n";
  std::size_t i = 0;
  for (const auto& item : doc.items()) {
    out += "  " + json(item.key()).dump() + ": ";
    const json& v = item.value();
    if (v.is_array() && !v.empty() && v.front().is_object()) {
      out += "[\n";
      for (std::size_t k = 0; k < v.size(); ++k) {
        out += "    " + v[k].dump() + (k + 1 < v.size() ? ",\n" : "\n");
      }
      out += "  ]";
    } else {
      out += v.dump();
    }
    out += ++i < doc.size() ? ",\n" : "\n";
  }
  out += "}\n";
  return out;
}

}  // namespace

std::string bundle_to_text(const SequenceBundle& bundle) {
  json doc;
  for (const auto& [key, text] : bundle.extra_fields) doc[key] = json::parse(text);
  doc["format"] = kBundleFormat;
  doc["n_frames"] = bundle.n_frames;
  doc["fps"] = bundle.fps;
  doc["image_size"] = json::array({bundle.image_width, bundle.image_height});
  doc["radius_px"] = bundle.radius_px ? json(*bundle.radius_px) : json(nullptr);
  json frames = json::array();
  for (const auto& rec : bundle.frames) {
    json f = {{"index", rec.curve.frame_index}, {"present", rec.curve.present}};
    if (rec.curve.present) {
      f["start"] = point_json(rec.curve.start);
      f["end"] = point_json(rec.curve.end);
    }
    if (rec.kernel) f["kernel"] = kernel_json(*rec.kernel);
    frames.push_back(std::move(f));
  }
  doc["frames"] = std::move(frames);
  if (bundle.ground_truth) {
    doc["ground_truth"] = {{"mask_radius_px", bundle.ground_truth->mask_radius_px},
                           {"trajectory", trajectory_body(bundle.ground_truth->trajectory)}};
  }
  return layout(doc);
}

SequenceBundle bundle_from_text(const std::string& text, ReadMode mode) {
  const json doc = parse_document(text);
  check_format(doc, kBundleFormat);
  static constexpr const char* kKnown[] = {"format", "n_frames", "fps", "image_size",
                                           "radius_px", "frames", "ground_truth"};
  SequenceBundle b;
  for (const auto& item : doc.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), item.key()) != std::end(kKnown)) continue;
    if (mode == ReadMode::strict) schema_error("unknown key '" + item.key() + "' in bundle");
    b.extra_fields[item.key()] = item.value().dump();
  }
  const std::string where = "bundle";
  b.n_frames = integer(field(doc, "n_frames", where), "n_frames");
  b.fps = real(field(doc, "fps", where), "fps");
  const json& size = field(doc, "image_size", where);
  if (!size.is_array() || size.size() != 2) schema_error("image_size must be [width, height]");
  b.image_width = integer(size[0], "image width");
  b.image_height = integer(size[1], "image height");
  const json& radius = field(doc, "radius_px", where);
  if (!radius.is_null()) b.radius_px = real(radius, "radius_px");
  const json& frames = field(doc, "frames", where);
  if (!frames.is_array()) schema_error("frames must be an array");
  for (const auto& f : frames) {
    if (mode == ReadMode::strict) check_keys(f, {"index", "present", "start", "end", "kernel"}, "frame");
    FrameRecord rec;
    rec.curve.frame_index = integer(field(f, "index", "frame"), "frame index");
    const json& present = field(f, "present", "frame");
    if (!present.is_boolean()) schema_error("frame 'present' must be a boolean");
    rec.curve.present = present.get<bool>();
    if (rec.curve.present) {
      rec.curve.start = point_from(field(f, "start", "frame"), "frame start");
      rec.curve.end = point_from(field(f, "end", "frame"), "frame end");
    }
    if (auto it = f.find("kernel"); it != f.end()) rec.kernel = kernel_from(*it, mode);
    b.frames.push_back(std::move(rec));
  }
  if (auto it = doc.find("ground_truth"); it != doc.end()) {
    if (mode == ReadMode::strict) check_keys(*it, {"mask_radius_px", "trajectory"}, "ground_truth");
    GroundTruth gt;
    gt.mask_radius_px = real(field(*it, "mask_radius_px", "ground_truth"), "mask_radius_px");
    gt.trajectory = trajectory_from(field(*it, "trajectory", "ground_truth"), mode, false);
    b.ground_truth = std::move(gt);
  }
  try {
    b.validate();
  } catch (const Error& e) {
    schema_error(std::string("invalid bundle: ") + e.what());
  }
  return b;
}

std::string trajectory_to_text(const TrajectoryFn& traj, const std::vector<BounceMark>& bounces) {
  json doc = trajectory_body(traj);
  doc["format"] = kTrajectoryFormat;
  json marks = json::array();
  for (const auto& b : bounces) marks.push_back(json::array({b.position.x(), b.position.y(), b.time}));
  doc["bounces"] = std::move(marks);
  return layout(doc);
}

TrajectoryFile trajectory_from_text(const std::string& text, ReadMode mode) {
  const json doc = parse_document(text);
  check_format(doc, kTrajectoryFormat);
  TrajectoryFile out;
  out.trajectory = trajectory_from(doc, mode, true);
  if (auto it = doc.find("bounces"); it != doc.end()) {
    if (!it->is_array()) schema_error("bounces must be an array");
    for (const auto& b : *it) {
      if (!b.is_array() || b.size() != 3) schema_error("bounce marks must be [x, y, t]");
      out.bounces.push_back({{real(b[0], "bounce x"), real(b[1], "bounce y")}, real(b[2], "bounce t")});
    }
  }
  return out;
}

std::vector<BounceMark> bounce_marks(const StitchResult& result) {
  std::vector<BounceMark> out;
  for (const auto& b : result.bounces) out.push_back({b.position, b.time_hint});
  return out;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorKind::io, "cannot open '" + tmp.string() + "' for writing");
    os << text;
    os.flush();
    if (!os) throw Error(ErrorKind::io, "failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::io, "cannot move output into '" + path.string() + "'");
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_bundle(const SequenceBundle& bundle, const std::filesystem::path& path) {
  write_text_atomic(path, bundle_to_text(bundle));
}

SequenceBundle read_bundle(const std::filesystem::path& path, ReadMode mode) {
  return bundle_from_text(read_text(path), mode);
}

void write_trajectory(const TrajectoryFn& traj, const std::filesystem::path& path,
                      const std::vector<BounceMark>& bounces) {
  write_text_atomic(path, trajectory_to_text(traj, bounces));
}

TrajectoryFile read_trajectory(const std::filesystem::path& path, ReadMode mode) {
  return trajectory_from_text(read_text(path), mode);
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string report_line(const EvalReport& report) {
  std::string out = "tiou=" + format_real(report.tiou) + " recall=" + format_real(report.recall) +
                    " frames=" + std::to_string(report.per_frame_tiou.size());
  if (report.mean_speed_abs_error) {
    out += " speed_error=" + format_real(*report.mean_speed_abs_error);
  }
  return out;
}

}  // namespace tbdnc::io

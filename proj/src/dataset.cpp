#include "dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "error.hpp"
#include "image.hpp"
#include "seeding.hpp"
#include "text.hpp"

namespace fs = std::filesystem;

namespace votkit {

namespace {

constexpr std::array<std::string_view, 6> kAttributeNames{"camera_motion", "illumination_change", "occlusion",
                                                          "size_change",   "motion_change",       "neutral"};

std::string frame_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%08zu.ppm", index + 1);
  return buf;
}

std::vector<fs::path> list_frames(const fs::path& dir) {
  std::vector<fs::path> frames;
  if (!fs::is_directory(dir)) raise(ErrorKind::Format, "missing frames directory " + dir.string());
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".ppm" || ext == ".pgm") frames.push_back(fs::absolute(entry.path()));
  }
  std::sort(frames.begin(), frames.end());
  return frames;
}

std::vector<std::uint8_t> read_tag_file(const fs::path& file, std::size_t expected) {
  const auto lines = read_lines(file);
  if (lines.size() != expected)
    raise(ErrorKind::Format, file.string() + ": " + std::to_string(lines.size()) + " lines but " +
                                 std::to_string(expected) + " frames");
  std::vector<std::uint8_t> channel(expected);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i] == "0") channel[i] = 0;
    else if (lines[i] == "1") channel[i] = 1;
    else raise(ErrorKind::Format, file.string() + ":" + std::to_string(i + 1) + ": expected 0 or 1");
  }
  return channel;
}

std::uint8_t hash_byte(std::uint64_t seed, std::int64_t a, std::int64_t b, std::uint64_t salt) {
  return static_cast<std::uint8_t>(
      splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(a) * 0x9E3779B1u + salt) ^
                 splitmix64(static_cast<std::uint64_t>(b) + (salt << 32))) >>
      56);
}

std::int64_t floor_div(double v, double d) { return static_cast<std::int64_t>(std::floor(v / d)); }

bool point_in_convex(const std::array<Point, 4>& c, double x, double y) {
  int sign = 0;
  for (int i = 0; i < 4; ++i) {
    const Point a = c[i], b = c[(i + 1) % 4];
    const double cr = (b.x - a.x) * (y - a.y) - (b.y - a.y) * (x - a.x);
    if (cr == 0.0) continue;
    const int s = cr > 0 ? 1 : -1;
    if (sign != 0 && s != sign) return false;
    sign = s;
  }
  return true;
}

Region scaled_about_center(const Region& r, double scale) {
  if (scale == 1.0) return r;
  const Point c = r.center();
  if (const auto* a = r.as<AxisAligned>())
    return Region::axis_aligned(c.x - a->w * scale / 2.0, c.y - a->h * scale / 2.0, a->w * scale, a->h * scale);
  if (const auto* ro = r.as<Rotated>()) return Region::rotated(ro->cx, ro->cy, ro->w * scale, ro->h * scale, ro->theta);
  auto q = r.corners();
  for (auto& p : q) p = {c.x + (p.x - c.x) * scale, c.y + (p.y - c.y) * scale};
  return Region::quad(q);
}

struct FrameState {
  double camera_offset = 0.0;
  double scale = 1.0;
  double occlusion = 0.0;
  double brightness = 1.0;
};

std::vector<FrameState> frame_states(const SynthScript& s) {
  std::vector<FrameState> states(s.length);
  double offset = 0.0;
  for (int t = 0; t < s.length; ++t) {
    FrameState st;
    for (const auto& e : s.events) {
      const bool inside = t >= e.begin && t < e.end;
      switch (e.kind) {
        case SynthEventKind::ShiftCamera:
          if (inside) offset += e.magnitude;
          break;
        case SynthEventKind::Deform:
          if (t >= e.begin) st.scale *= 1.0 + e.magnitude * std::min(1.0, double(t - e.begin + 1) / (e.end - e.begin));
          break;
        case SynthEventKind::Occlude:
          if (inside) st.occlusion = std::max(st.occlusion, e.magnitude);
          break;
        case SynthEventKind::Brighten:
          if (inside) st.brightness *= 1.0 + e.magnitude;
          break;
      }
    }
    st.camera_offset = offset;
    states[t] = st;
  }
  return states;
}

}  // namespace

std::string_view attribute_name(Attribute a) { return kAttributeNames[static_cast<int>(a)]; }

std::optional<Attribute> attribute_from_name(std::string_view name) {
  for (auto a : kAllAttributes)
    if (attribute_name(a) == name) return a;
  return std::nullopt;
}

void SequenceRecord::derive_neutral() {
  const std::size_t n = groundtruth.size();
  for (int a = 0; a < kStoredAttributeCount; ++a)
    if (attributes[a].size() != n) attributes[a].assign(n, 0);
  auto& neutral = attributes[static_cast<int>(Attribute::Neutral)];
  neutral.assign(n, 1);
  for (std::size_t t = 0; t < n; ++t)
    for (int a = 0; a < kStoredAttributeCount; ++a)
      if (attributes[a][t]) neutral[t] = 0;
}

void SequenceRecord::validate() const {
  const std::size_t n = groundtruth.size();
  if (!frames.empty() && frames.size() != n)
    raise(ErrorKind::Format, name + ": " + std::to_string(frames.size()) + " frames but " + std::to_string(n) +
                                 " ground-truth entries");
  for (const auto& ch : attributes)
    if (ch.size() != n) raise(ErrorKind::Format, name + ": attribute channel length mismatch");
  for (std::size_t t = 0; t < n; ++t) {
    bool any = false;
    for (int a = 0; a < kStoredAttributeCount; ++a) any = any || attributes[a][t];
    if (any == bool(attributes[static_cast<int>(Attribute::Neutral)][t]))
      raise(ErrorKind::Format, name + ": neutral channel inconsistent at frame " + std::to_string(t + 1));
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) raise(ErrorKind::Format, name + ": gamma outside [0,1]");
}

SequenceRecord make_record(std::string name, std::vector<Region> groundtruth) {
  SequenceRecord seq;
  seq.name = std::move(name);
  seq.groundtruth = std::move(groundtruth);
  seq.derive_neutral();
  return seq;
}

std::string format_gamma(double gamma) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", gamma);
  return buf;
}

SequenceRecord load_sequence(const fs::path& dir) {
  SequenceRecord seq;
  seq.name = dir.filename().string();
  if (seq.name.empty()) seq.name = dir.parent_path().filename().string();
  const fs::path gt_file = dir / "groundtruth.txt";
  if (!fs::exists(gt_file)) raise(ErrorKind::Io, "missing ground truth file " + gt_file.string());
  const auto lines = read_lines(gt_file);
  seq.frames = list_frames(dir / "frames");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      seq.groundtruth.push_back(parse_region(lines[i]));
    } catch (const Error& e) {
      raise(ErrorKind::Format, gt_file.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  if (seq.groundtruth.size() != seq.frames.size())
    raise(ErrorKind::Format, gt_file.string() + ":" + std::to_string(std::min(lines.size(), seq.frames.size()) + 1) +
                                 ": " + std::to_string(lines.size()) + " ground-truth lines but " +
                                 std::to_string(seq.frames.size()) + " frames");
  const std::size_t n = seq.groundtruth.size();
  for (int a = 0; a < kStoredAttributeCount; ++a) {
    const fs::path tag = dir / "attributes" / (std::string(kAttributeNames[a]) + ".tag");
    seq.attributes[a] = fs::exists(tag) ? read_tag_file(tag, n) : std::vector<std::uint8_t>(n, 0);
  }
  seq.derive_neutral();
  const fs::path gamma_file = dir / "gamma.txt";
  if (fs::exists(gamma_file)) {
    const auto g = read_lines(gamma_file);
    if (g.size() != 1) raise(ErrorKind::Format, gamma_file.string() + ": expected a single value");
    seq.gamma = parse_double(g[0], gamma_file.string() + ":1");
  }
  seq.validate();
  return seq;
}

void write_sequence(const SequenceRecord& seq, const fs::path& dir) {
  fs::create_directories(dir / "attributes");
  std::string gt;
  for (const auto& r : seq.groundtruth) gt += format_region(r) + '\n';
  write_file_atomic(dir / "groundtruth.txt", gt);
  for (int a = 0; a < kStoredAttributeCount; ++a) {
    std::string body;
    body.reserve(seq.size() * 2);
    for (auto v : seq.attributes[a]) body += v ? "1\n" : "0\n";
    write_file_atomic(dir / "attributes" / (std::string(kAttributeNames[a]) + ".tag"), body);
  }
  write_file_atomic(dir / "gamma.txt", format_gamma(seq.gamma) + "\n");
}

std::vector<SequenceRecord> load_dataset(const fs::path& root) {
  std::vector<fs::path> dirs;
  const fs::path list = root / "list.txt";
  if (fs::exists(list)) {
    for (const auto& name : read_lines(list))
      if (!name.empty()) dirs.push_back(root / name);
  } else {
    if (!fs::is_directory(root)) raise(ErrorKind::Io, "dataset root not found: " + root.string());
    for (const auto& entry : fs::directory_iterator(root))
      if (entry.is_directory() && fs::exists(entry.path() / "groundtruth.txt")) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
  }
  std::vector<SequenceRecord> out;
  for (const auto& d : dirs) out.push_back(load_sequence(d));
  return out;
}

// ---------------------------------------------------------------------------

std::uint64_t gamma_sample_count(std::uint64_t frames, std::uint64_t n) {
  if (n < 3) return 0;
  return frames * (n * ((n - 1) * (n - 1) - n + 1) / 2);
}

double estimate_gamma(const AnnotatorBoxes& annotations) {
  if (annotations.boxes.empty()) raise(ErrorKind::InsufficientData, "no annotated frames");
  double sum = 0.0;
  std::uint64_t count = 0;
  for (const auto& boxes : annotations.boxes) {
    const std::size_t n = boxes.size();
    if (n < 3) raise(ErrorKind::InsufficientData, "at least 3 annotations per frame are required");
    std::vector<double> overlaps;
    overlaps.reserve(n - 1);
    for (std::size_t g = 0; g < n; ++g) {
      overlaps.clear();
      for (std::size_t j = 0; j < n; ++j)
        if (j != g) overlaps.push_back(overlap(boxes[g], boxes[j]));
      for (std::size_t a = 0; a < overlaps.size(); ++a)
        for (std::size_t b = a + 1; b < overlaps.size(); ++b) {
          sum += std::abs(overlaps[a] - overlaps[b]);
          ++count;
        }
    }
  }
  return sum / static_cast<double>(count);
}

AnnotatorBoxes read_annotations(const fs::path& file) {
  const auto lines = read_lines(file);
  std::map<int, std::size_t> index;
  AnnotatorBoxes out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string where = file.string() + ":" + std::to_string(i + 1);
    if (lines[i].empty()) continue;
    const auto space = lines[i].find(' ');
    if (space == std::string::npos) raise(ErrorKind::Format, where + ": expected '<frame> <region>'");
    const int frame = static_cast<int>(parse_int(lines[i].substr(0, space), where));
    Region r;
    try {
      r = parse_region(lines[i].substr(space + 1));
    } catch (const Error& e) {
      raise(ErrorKind::Format, where + ": " + e.what());
    }
    if (r.is_absent()) raise(ErrorKind::Format, where + ": annotations cannot be absent");
    auto [it, inserted] = index.emplace(frame, out.frames.size());
    if (inserted) {
      out.frames.push_back(frame);
      out.boxes.emplace_back();
    }
    out.boxes[it->second].push_back(r);
  }
  for (const auto& b : out.boxes)
    if (b.size() != out.boxes.front().size())
      raise(ErrorKind::Format, file.string() + ": every frame needs the same number of boxes");
  return out;
}

// ---------------------------------------------------------------------------

std::string_view synth_event_name(SynthEventKind k) {
  switch (k) {
    case SynthEventKind::Occlude: return "occlude";
    case SynthEventKind::Brighten: return "brighten";
    case SynthEventKind::ShiftCamera: return "shift_camera";
    case SynthEventKind::Deform: return "deform";
  }
  return "?";
}

void SynthScript::validate() const {
  if (length <= 0 || width <= 0 || height <= 0) raise(ErrorKind::Parameter, "script length and canvas must be positive");
  if (static_cast<int>(path.size()) != length) raise(ErrorKind::Parameter, "script path must have one region per frame");
  for (const auto& r : path)
    if (r.is_absent()) raise(ErrorKind::Parameter, "script path regions must be present");
  for (const auto& e : events) {
    if (e.begin < 0 || e.end > length || e.begin >= e.end)
      raise(ErrorKind::Parameter, "event interval outside [0, length)");
    if (!std::isfinite(e.magnitude)) raise(ErrorKind::Parameter, "event magnitude must be finite");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) raise(ErrorKind::Parameter, "gamma outside [0,1]");
}

std::vector<Region> linear_path(const Region& start, int length, double vx, double vy) {
  std::vector<Region> path;
  path.reserve(length);
  for (int t = 0; t < length; ++t) path.push_back(start.translated(vx * t, vy * t));
  return path;
}

SynthScript read_synth_script(const fs::path& file) {
  SynthScript s;
  s.path.clear();
  std::optional<Region> start;
  double vx = 0.0, vy = 0.0;
  const auto lines = read_lines(file);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string where = file.string() + ":" + std::to_string(i + 1);
    std::string line = trim(strip_comment(lines[i]));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) raise(ErrorKind::Format, where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "name") s.name = value;
    else if (key == "length") s.length = static_cast<int>(parse_int(value, where));
    else if (key == "canvas") {
      const auto x = value.find('x');
      if (x == std::string::npos) raise(ErrorKind::Format, where + ": canvas must be WIDTHxHEIGHT");
      s.width = static_cast<int>(parse_int(value.substr(0, x), where));
      s.height = static_cast<int>(parse_int(value.substr(x + 1), where));
    } else if (key == "start") {
      start = parse_region(value);
    } else if (key == "velocity") {
      const auto parts = split(value, ',');
      if (parts.size() != 2) raise(ErrorKind::Format, where + ": velocity must be vx,vy");
      vx = parse_double(parts[0], where);
      vy = parse_double(parts[1], where);
    } else if (key == "seed") {
      s.seed = static_cast<std::uint64_t>(parse_int(value, where));
    } else if (key == "gamma") {
      s.gamma = parse_double(value, where);
    } else if (key == "event") {
      const auto parts = split_ws(value);
      if (parts.size() != 4) raise(ErrorKind::Format, where + ": event must be '<kind> <begin> <end> <magnitude>'");
      SynthEvent e;
      if (parts[0] == "occlude") e.kind = SynthEventKind::Occlude;
      else if (parts[0] == "brighten") e.kind = SynthEventKind::Brighten;
      else if (parts[0] == "shift_camera") e.kind = SynthEventKind::ShiftCamera;
      else if (parts[0] == "deform") e.kind = SynthEventKind::Deform;
      else raise(ErrorKind::Format, where + ": unknown event kind '" + parts[0] + "'");
      e.begin = static_cast<int>(parse_int(parts[1], where));
      e.end = static_cast<int>(parse_int(parts[2], where));
      e.magnitude = parse_double(parts[3], where);
      s.events.push_back(e);
    } else {
      raise(ErrorKind::Format, where + ": unknown key '" + key + "'");
    }
  }
  if (!start) raise(ErrorKind::Format, file.string() + ": missing 'start' region");
  s.path = linear_path(*start, s.length, vx, vy);
  s.validate();
  return s;
}

SynthScript random_script(std::string name, int length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto uint = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  SynthScript s;
  s.name = std::move(name);
  s.length = length;
  s.seed = seed;
  const double w = std::round(uni(22, 34)), h = std::round(uni(22, 34));

  // Piecewise-linear path through a few waypoints kept away from the canvas border.
  const int legs = 3;
  std::vector<Point> way;
  for (int i = 0; i <= legs; ++i) way.push_back({uni(30, s.width - 30), uni(30, s.height - 30)});
  s.path.reserve(length);
  for (int t = 0; t < length; ++t) {
    const double pos = double(t) / std::max(1, length - 1) * legs;
    const int leg = std::min(legs - 1, static_cast<int>(pos));
    const double f = pos - leg;
    const double cx = way[leg].x + f * (way[leg + 1].x - way[leg].x);
    const double cy = way[leg].y + f * (way[leg + 1].y - way[leg].y);
    s.path.push_back(Region::axis_aligned(std::round((cx - w / 2) * 4) / 4, std::round((cy - h / 2) * 4) / 4, w, h));
  }

  auto interval = [&](int min_len, int max_len) {
    const int len = uint(min_len, max_len);
    const int b = uint(length / 10, std::max(length / 10, length - len - 1));
    return std::pair{b, std::min(length, b + len)};
  };
  auto [ob, oe] = interval(5, 12);
  s.events.push_back({ob, oe, SynthEventKind::Occlude, uni(0.3, 0.6)});
  auto [bb, be] = interval(10, 25);
  s.events.push_back({bb, be, SynthEventKind::Brighten, uni(0.2, 0.4)});
  auto [cb, ce] = interval(5, 10);
  s.events.push_back({cb, ce, SynthEventKind::ShiftCamera, uni(-2.0, 2.0)});
  auto [db, de] = interval(10, 20);
  s.events.push_back({db, de, SynthEventKind::Deform, uni(-0.25, 0.3)});
  s.validate();
  return s;
}

SequenceRecord script_record(const SynthScript& script) {
  script.validate();
  const auto states = frame_states(script);
  SequenceRecord seq;
  seq.name = script.name;
  seq.gamma = script.gamma;
  const std::size_t n = script.length;
  for (int a = 0; a < kStoredAttributeCount; ++a) seq.attributes[a].assign(n, 0);
  for (std::size_t t = 0; t < n; ++t) {
    const auto& st = states[t];
    if (st.occlusion >= 1.0) {
      seq.groundtruth.push_back(Region::absent());
    } else {
      seq.groundtruth.push_back(scaled_about_center(script.path[t], st.scale).translated(st.camera_offset, 0.0));
    }
  }
  auto tag = [&seq](Attribute a, std::size_t t) { seq.attributes[static_cast<int>(a)][t] = 1; };
  for (const auto& e : script.events) {
    for (int t = e.begin; t < e.end; ++t) {
      switch (e.kind) {
        case SynthEventKind::Occlude: tag(Attribute::Occlusion, t); break;
        case SynthEventKind::Brighten: tag(Attribute::IlluminationChange, t); break;
        case SynthEventKind::ShiftCamera: tag(Attribute::CameraMotion, t); break;
        case SynthEventKind::Deform: tag(Attribute::SizeChange, t); break;
      }
    }
  }
  // Motion change: abrupt change of the scripted target velocity.
  for (std::size_t t = 2; t < n; ++t) {
    const Point c0 = script.path[t - 2].center(), c1 = script.path[t - 1].center(), c2 = script.path[t].center();
    const double ax = (c2.x - c1.x) - (c1.x - c0.x), ay = (c2.y - c1.y) - (c1.y - c0.y);
    if (std::hypot(ax, ay) > 0.5) tag(Attribute::MotionChange, t);
  }
  seq.derive_neutral();
  return seq;
}

SequenceRecord synthesize(const SynthScript& script, const fs::path& out_dir) {
  SequenceRecord seq = script_record(script);
  const auto states = frame_states(script);
  const fs::path frames_dir = out_dir / "frames";
  std::error_code ec;
  fs::create_directories(frames_dir, ec);
  if (ec) raise(ErrorKind::Io, "cannot create " + frames_dir.string() + ": " + ec.message());

  const std::uint64_t seed = script.seed;
  for (int t = 0; t < script.length; ++t) {
    const auto& st = states[t];
    Image img(script.width, script.height, 3);
    const auto cam = static_cast<std::int64_t>(std::lround(st.camera_offset));
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        // Background lives in world coordinates so camera motion is an exact pixel shift.
        const std::int64_t wx = x - cam, wy = y;
        const std::int64_t bx = floor_div(double(wx), 8.0), by = floor_div(double(wy), 8.0);
        const int base = 50 + hash_byte(seed, bx, by, 1) / 2;
        const int fine = hash_byte(seed, wx, wy, 2) / 16 - 8;
        img.at(x, y, 0) = static_cast<std::uint8_t>(std::clamp(base / 2 + fine, 0, 255));
        img.at(x, y, 1) = static_cast<std::uint8_t>(std::clamp(base + fine, 0, 255));
        img.at(x, y, 2) = static_cast<std::uint8_t>(std::clamp(base + 30 + hash_byte(seed, bx, by, 3) / 4, 0, 255));
      }
    }
    const Region target = scaled_about_center(script.path[t], st.scale).translated(st.camera_offset, 0.0);
    const auto c = target.corners();
    const double tw = target.width(), th = target.height();
    const Point ex{(c[1].x - c[0].x) / tw, (c[1].y - c[0].y) / tw};
    const Point ey{(c[3].x - c[0].x) / th, (c[3].y - c[0].y) / th};
    double minx = c[0].x, maxx = c[0].x, miny = c[0].y, maxy = c[0].y;
    for (const auto& p : c) {
      minx = std::min(minx, p.x), maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y), maxy = std::max(maxy, p.y);
    }
    const int x0 = std::max(0, static_cast<int>(std::floor(minx))), x1 = std::min(img.width - 1, static_cast<int>(std::ceil(maxx)));
    const int y0 = std::max(0, static_cast<int>(std::floor(miny))), y1 = std::min(img.height - 1, static_cast<int>(std::ceil(maxy)));
    const double occluded_until = minx + st.occlusion * (maxx - minx);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double px = x + 0.5, py = y + 0.5;
        if (!point_in_convex(c, px, py)) continue;
        // Texture in the target's own frame, normalized so deformation stretches it.
        const double u = ((px - c[0].x) * ex.x + (py - c[0].y) * ex.y) / tw * 8.0;
        const double v = ((px - c[0].x) * ey.x + (py - c[0].y) * ey.y) / th * 8.0;
        const auto cu = static_cast<std::int64_t>(std::floor(u)), cv = static_cast<std::int64_t>(std::floor(v));
        const int shade = hash_byte(seed, cu, cv, 7);
        img.at(x, y, 0) = static_cast<std::uint8_t>(150 + shade * 105 / 255);
        img.at(x, y, 1) = static_cast<std::uint8_t>(40 + ((cu + cv) % 2 == 0 ? shade / 3 : 0));
        img.at(x, y, 2) = static_cast<std::uint8_t>(30 + shade / 8);
      }
    }
    if (st.occlusion > 0.0) {
      for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1 && x + 0.5 <= occluded_until; ++x) {
          const std::uint8_t g = static_cast<std::uint8_t>((y / 3) % 2 ? 200 : 170);
          img.at(x, y, 0) = img.at(x, y, 1) = img.at(x, y, 2) = g;
        }
    }
    if (st.brightness != 1.0)
      for (auto& p : img.pixels) p = static_cast<std::uint8_t>(std::clamp(std::lround(p * st.brightness), 0L, 255L));
    const fs::path file = frames_dir / frame_file_name(t);
    write_pnm(file, img);
    seq.frames.push_back(fs::absolute(file));
  }
  write_sequence(seq, out_dir);
  seq.validate();
  return seq;
}

}  // namespace votkit

#include "geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "error.hpp"

namespace votkit {

namespace {

double normalize_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t <= -std::numbers::pi) t += two_pi;
  if (t > std::numbers::pi) t -= two_pi;
  return t;
}

void require_finite(std::initializer_list<double> values) {
  for (double v : values)
    if (!std::isfinite(v)) raise(ErrorKind::InvalidRegion, "region coordinate is not finite");
}

double cross(Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

std::vector<Point> ccw_polygon(const Region& r) {
  auto c = r.corners();
  std::vector<Point> poly(c.begin(), c.end());
  if (polygon_signed_area(poly) < 0) std::reverse(poly.begin(), poly.end());
  return poly;
}

double axis_overlap(const AxisAligned& a, const AxisAligned& b) {
  const double iw = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double ih = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.w * a.h + b.w * b.h - inter);
}

double unit_draw(std::mt19937_64& rng) {
  // [-1, 1)
  return 2.0 * std::generate_canonical<double, 53>(rng) - 1.0;
}

}  // namespace

Region Region::axis_aligned(double x, double y, double w, double h) {
  require_finite({x, y, w, h});
  if (w <= 0.0 || h <= 0.0) raise(ErrorKind::InvalidRegion, "region width and height must be positive");
  return Region(AxisAligned{x, y, w, h});
}

Region Region::rotated(double cx, double cy, double w, double h, double theta) {
  require_finite({cx, cy, w, h, theta});
  if (w <= 0.0 || h <= 0.0) raise(ErrorKind::InvalidRegion, "region width and height must be positive");
  return Region(Rotated{cx, cy, w, h, normalize_angle(theta)});
}

Region Region::quad(const std::array<Point, 4>& corners) {
  for (const auto& p : corners) require_finite({p.x, p.y});
  int sign = 0;
  for (int i = 0; i < 4; ++i) {
    const double c = cross(corners[i], corners[(i + 1) % 4], corners[(i + 2) % 4]);
    if (c == 0.0) continue;
    const int s = c > 0 ? 1 : -1;
    if (sign != 0 && s != sign) raise(ErrorKind::InvalidRegion, "quadrilateral is not convex");
    sign = s;
  }
  std::vector<Point> poly(corners.begin(), corners.end());
  if (std::abs(polygon_signed_area(poly)) <= 0.0) raise(ErrorKind::InvalidRegion, "quadrilateral has zero area");
  return Region(Quad{corners});
}

std::array<Point, 4> Region::corners() const {
  if (const auto* a = as<AxisAligned>())
    return {{{a->x, a->y}, {a->x + a->w, a->y}, {a->x + a->w, a->y + a->h}, {a->x, a->y + a->h}}};
  if (const auto* r = as<Rotated>()) {
    const double c = std::cos(r->theta), s = std::sin(r->theta);
    const double hw = r->w / 2.0, hh = r->h / 2.0;
    const std::array<Point, 4> local{{{-hw, -hh}, {hw, -hh}, {hw, hh}, {-hw, hh}}};
    std::array<Point, 4> out;
    for (int i = 0; i < 4; ++i)
      out[i] = {r->cx + local[i].x * c - local[i].y * s, r->cy + local[i].x * s + local[i].y * c};
    return out;
  }
  if (const auto* q = as<Quad>()) return q->corners;
  raise(ErrorKind::InvalidRegion, "absent region has no corners");
}

Point Region::center() const {
  if (const auto* a = as<AxisAligned>()) return {a->x + a->w / 2.0, a->y + a->h / 2.0};
  if (const auto* r = as<Rotated>()) return {r->cx, r->cy};
  auto c = corners();
  return {(c[0].x + c[1].x + c[2].x + c[3].x) / 4.0, (c[0].y + c[1].y + c[2].y + c[3].y) / 4.0};
}

double Region::area() const {
  if (is_absent()) return 0.0;
  if (const auto* a = as<AxisAligned>()) return a->w * a->h;
  if (const auto* r = as<Rotated>()) return r->w * r->h;
  auto c = corners();
  return std::abs(polygon_signed_area({c.begin(), c.end()}));
}

double Region::width() const {
  if (const auto* a = as<AxisAligned>()) return a->w;
  if (const auto* r = as<Rotated>()) return r->w;
  auto c = corners();
  return std::hypot(c[1].x - c[0].x, c[1].y - c[0].y);
}

double Region::height() const {
  if (const auto* a = as<AxisAligned>()) return a->h;
  if (const auto* r = as<Rotated>()) return r->h;
  auto c = corners();
  return std::hypot(c[2].x - c[1].x, c[2].y - c[1].y);
}

Region Region::translated(double dx, double dy) const {
  if (is_absent()) return *this;
  if (const auto* a = as<AxisAligned>()) return axis_aligned(a->x + dx, a->y + dy, a->w, a->h);
  if (const auto* r = as<Rotated>()) return rotated(r->cx + dx, r->cy + dy, r->w, r->h, r->theta);
  auto c = corners();
  for (auto& p : c) p = {p.x + dx, p.y + dy};
  return quad(c);
}

double polygon_signed_area(const std::vector<Point>& poly) {
  double sum = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    sum += p.x * q.y - q.x * p.y;
  }
  return sum / 2.0;
}

std::vector<Point> clip_convex(const std::vector<Point>& subject, const std::vector<Point>& clip) {
  std::vector<Point> output = subject;
  const std::size_t m = clip.size();
  for (std::size_t e = 0; e < m && !output.empty(); ++e) {
    const Point a = clip[e];
    const Point b = clip[(e + 1) % m];
    std::vector<Point> input;
    input.swap(output);
    const std::size_t n = input.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point cur = input[i];
      const Point prev = input[(i + n - 1) % n];
      const double dc = cross(a, b, cur);
      const double dp = cross(a, b, prev);
      if (dc >= 0.0) {
        if (dp < 0.0) {
          const double t = dp / (dp - dc);
          output.push_back({prev.x + t * (cur.x - prev.x), prev.y + t * (cur.y - prev.y)});
        }
        output.push_back(cur);
      } else if (dp >= 0.0) {
        const double t = dp / (dp - dc);
        output.push_back({prev.x + t * (cur.x - prev.x), prev.y + t * (cur.y - prev.y)});
      }
    }
  }
  return output;
}

double overlap(const Region& a, const Region& b) {
  if (a.is_absent() || b.is_absent()) return 0.0;
  const auto* aa = a.as<AxisAligned>();
  const auto* ba = b.as<AxisAligned>();
  if (aa && ba) return axis_overlap(*aa, *ba);

  const auto pa = ccw_polygon(a);
  const auto pb = ccw_polygon(b);
  const double area_a = polygon_signed_area(pa);
  const double area_b = polygon_signed_area(pb);
  const auto inter_poly = clip_convex(pa, pb);
  if (inter_poly.size() < 3) return 0.0;
  const double inter = std::abs(polygon_signed_area(inter_poly));
  if (inter <= 1e-12 * (area_a + area_b)) return 0.0;
  const double iou = inter / (area_a + area_b - inter);
  return std::clamp(iou, 0.0, 1.0);
}

Region perturb(const Region& r, const PerturbationSpec& spec, std::mt19937_64& rng) {
  if (r.is_absent()) raise(ErrorKind::InvalidRegion, "cannot perturb an absent region");
  if (spec.position_amplitude < 0 || spec.size_amplitude < 0 || spec.rotation_amplitude < 0)
    raise(ErrorKind::Parameter, "perturbation amplitudes must be non-negative");
  const double ux = unit_draw(rng), uy = unit_draw(rng);
  const double uw = unit_draw(rng), uh = unit_draw(rng);
  const double ut = unit_draw(rng);
  if (spec.is_identity()) return r;

  const double w = r.width(), h = r.height();
  const Point c = r.center();
  const double ncx = c.x + ux * spec.position_amplitude * w;
  const double ncy = c.y + uy * spec.position_amplitude * h;
  const double sw = 1.0 + uw * spec.size_amplitude;
  const double sh = 1.0 + uh * spec.size_amplitude;
  const double dtheta = ut * spec.rotation_amplitude;

  if (r.as<AxisAligned>() && spec.rotation_amplitude == 0.0)
    return Region::axis_aligned(ncx - w * sw / 2.0, ncy - h * sh / 2.0, w * sw, h * sh);
  if (r.as<AxisAligned>()) return Region::rotated(ncx, ncy, w * sw, h * sh, dtheta);
  if (const auto* rr = r.as<Rotated>()) return Region::rotated(ncx, ncy, w * sw, h * sh, rr->theta + dtheta);

  // Quad: scale along its own edge axes about the centroid, rotate, translate.
  auto q = r.corners();
  const double ex = q[1].x - q[0].x, ey = q[1].y - q[0].y;
  const double len = std::hypot(ex, ey);
  const Point u{ex / len, ey / len};
  const Point v{-u.y, u.x};
  const double cs = std::cos(dtheta), sn = std::sin(dtheta);
  std::array<Point, 4> out;
  for (int i = 0; i < 4; ++i) {
    const double dx = q[i].x - c.x, dy = q[i].y - c.y;
    const double lu = (dx * u.x + dy * u.y) * sw;
    const double lv = (dx * v.x + dy * v.y) * sh;
    const double px = lu * u.x + lv * v.x, py = lu * u.y + lv * v.y;
    out[i] = {ncx + px * cs - py * sn, ncy + px * sn + py * cs};
  }
  return Region::quad(out);
}

Region perturb(const Region& r, const PerturbationSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  return perturb(r, spec, rng);
}

std::string format_decimal(double v) {
  double rounded = std::round(v * 1e4) / 1e4;
  if (rounded == 0.0) rounded = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", rounded);
  return buf;
}

std::string format_region(const Region& r) {
  if (r.is_absent()) return "absent";
  std::string out;
  auto append = [&out](double v) {
    if (!out.empty()) out += ',';
    out += format_decimal(v);
  };
  if (const auto* a = r.as<AxisAligned>()) {
    append(a->x);
    append(a->y);
    append(a->w);
    append(a->h);
    return out;
  }
  for (const auto& p : r.corners()) {
    append(p.x);
    append(p.y);
  }
  return out;
}

Region parse_region(std::string_view text) {
  if (text == "absent") return Region::absent();
  std::vector<double> values;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view token = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    if (token.empty()) raise(ErrorKind::Format, "empty field in region '" + std::string(text) + "'");
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
      raise(ErrorKind::Format, "malformed number '" + std::string(token) + "' in region");
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (values.size() == 4) return Region::axis_aligned(values[0], values[1], values[2], values[3]);
  if (values.size() == 8)
    return Region::quad({{{values[0], values[1]}, {values[2], values[3]}, {values[4], values[5]}, {values[6], values[7]}}});
  raise(ErrorKind::Format, "region must have 4 or 8 fields, got " + std::to_string(values.size()));
}

bool regions_close(const Region& a, const Region& b, double tol) {
  if (a.is_absent() || b.is_absent()) return a.is_absent() && b.is_absent();
  const auto ca = a.corners(), cb = b.corners();
  for (int i = 0; i < 4; ++i)
    if (std::abs(ca[i].x - cb[i].x) > tol || std::abs(ca[i].y - cb[i].y) > tol) return false;
  return true;
}

}  // namespace votkit

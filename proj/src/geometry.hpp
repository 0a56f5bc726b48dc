#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace votkit {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Left/top corner plus extent, in pixels.
struct AxisAligned {
  double x, y, w, h;
};

/// Center, extent and orientation (radians, normalized to (-pi, pi]).
struct Rotated {
  double cx, cy, w, h, theta;
};

/// Arbitrary convex quadrilateral, corners in file order.
struct Quad {
  std::array<Point, 4> corners;
};

struct Absent {};

/// Target extent in one frame. Non-absent shapes are validated on construction.
class Region {
 public:
  using Shape = std::variant<Absent, AxisAligned, Rotated, Quad>;

  Region() = default;

  static Region absent() { return Region(); }
  static Region axis_aligned(double x, double y, double w, double h);
  static Region rotated(double cx, double cy, double w, double h, double theta);
  static Region quad(const std::array<Point, 4>& corners);

  const Shape& shape() const noexcept { return shape_; }
  bool is_absent() const noexcept { return std::holds_alternative<Absent>(shape_); }

  template <typename T>
  const T* as() const noexcept {
    return std::get_if<T>(&shape_);
  }

  /// Corner polygon; AxisAligned and Rotated corners are clockwise on screen.
  std::array<Point, 4> corners() const;
  Point center() const;
  double area() const;

  /// Width and height along the region's own axes (quad: first two edges).
  double width() const;
  double height() const;

  Region translated(double dx, double dy) const;

 private:
  explicit Region(Shape s) : shape_(std::move(s)) {}
  Shape shape_;
};

/// Intersection-over-union of two regions; Absent on either side gives 0.
double overlap(const Region& a, const Region& b);

/// Signed shoelace area; positive for counter-clockwise in a y-up frame.
double polygon_signed_area(const std::vector<Point>& poly);

/// Clips `subject` against convex `clip` (both counter-clockwise).
std::vector<Point> clip_convex(const std::vector<Point>& subject, const std::vector<Point>& clip);

struct PerturbationSpec {
  double position_amplitude = 0.10;
  double size_amplitude = 0.10;
  double rotation_amplitude = 0.1;
  std::uint64_t seed = 0;

  bool is_identity() const noexcept {
    return position_amplitude == 0.0 && size_amplitude == 0.0 && rotation_amplitude == 0.0;
  }
};

/// Uniform position/size/rotation noise, drawn from `rng` (five draws per call).
Region perturb(const Region& r, const PerturbationSpec& spec, std::mt19937_64& rng);
/// Same, seeded from `spec.seed`.
Region perturb(const Region& r, const PerturbationSpec& spec);

/// `x,y,w,h` or eight comma-separated corner coordinates, 4 fractional digits; `absent`.
std::string format_region(const Region& r);
Region parse_region(std::string_view text);

/// Equality of corner polygons to within `tol` per coordinate (Absent equals only Absent).
bool regions_close(const Region& a, const Region& b, double tol);

std::string format_decimal(double v);

}  // namespace votkit

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "error.hpp"
#include "geometry.hpp"
#include "support.hpp"

namespace votkit {
namespace {

TEST(Overlap, IdentityIsOne) {
  const auto a = Region::axis_aligned(0, 0, 1, 1);
  EXPECT_DOUBLE_EQ(overlap(a, a), 1.0);
}

TEST(Overlap, DisjointIsZero) {
  EXPECT_EQ(overlap(Region::axis_aligned(0, 0, 1, 1), Region::axis_aligned(5, 5, 1, 1)), 0.0);
}

TEST(Overlap, AxisAlignedArithmetic) {
  EXPECT_NEAR(overlap(Region::axis_aligned(0, 0, 2, 2), Region::axis_aligned(1, 0, 2, 2)), 1.0 / 3.0, 1e-12);
}

TEST(Overlap, TouchingEdgesGiveZero) {
  EXPECT_EQ(overlap(Region::axis_aligned(0, 0, 1, 1), Region::axis_aligned(1, 0, 1, 1)), 0.0);
  EXPECT_EQ(overlap(Region::axis_aligned(0, 0, 1, 1), Region::axis_aligned(1, 1, 1, 1)), 0.0);
}

TEST(Overlap, AbsentGivesZero) {
  const auto a = Region::axis_aligned(0, 0, 4, 4);
  EXPECT_EQ(overlap(a, Region::absent()), 0.0);
  EXPECT_EQ(overlap(Region::absent(), a), 0.0);
  EXPECT_EQ(overlap(Region::absent(), Region::absent()), 0.0);
}

TEST(Overlap, RotatedSquareMatchesOctagonClosedForm) {
  const auto a = Region::rotated(0.5, 0.5, 1, 1, 0);
  const auto b = Region::rotated(0.5, 0.5, 1, 1, std::numbers::pi / 4);
  const double inter = 2 * (std::sqrt(2.0) - 1);
  EXPECT_NEAR(overlap(a, b), inter / (2 - inter), 1e-12);
  EXPECT_NEAR(overlap(a, b), 0.7071, 1e-3);
  EXPECT_NEAR(test::rasterize(a, b).iou(), 0.7071, 1e-3);
}

TEST(Overlap, QuadAndRotatedAgree) {
  const auto r = Region::rotated(10, 20, 8, 4, 0.3);
  const auto q = Region::quad(r.corners());
  const auto other = Region::axis_aligned(8, 18, 5, 5);
  EXPECT_NEAR(overlap(r, other), overlap(q, other), 1e-12);
}

TEST(Overlap, MatchesRasterizationOnRandomRotatedPairs) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> pos(40, 60), size(5, 40), angle(-std::numbers::pi, std::numbers::pi);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = Region::rotated(pos(rng), pos(rng), size(rng), size(rng), angle(rng));
    const auto b = Region::rotated(pos(rng), pos(rng), size(rng), size(rng), angle(rng));
    worst = std::max(worst, std::abs(overlap(a, b) - test::rasterize(a, b).iou()));
  }
  EXPECT_LT(worst, 1e-3);
}

TEST(Overlap, SymmetricAndBounded) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> pos(0, 50), size(0.5, 30), angle(-3, 3);
  for (int i = 0; i < 10000; ++i) {
    const auto a = Region::rotated(pos(rng), pos(rng), size(rng), size(rng), angle(rng));
    const auto b = Region::rotated(pos(rng), pos(rng), size(rng), size(rng), angle(rng));
    const double ab = overlap(a, b);
    ASSERT_GE(ab, 0.0);
    ASSERT_LE(ab, 1.0);
    ASSERT_NEAR(ab, overlap(b, a), 1e-12);
    ASSERT_NEAR(overlap(a, a), 1.0, 1e-12);
  }
}

TEST(Region, DegenerateExtentIsRejected) {
  try {
    Region::axis_aligned(0, 0, 0, 1);
    FAIL() << "expected InvalidRegion";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidRegion);
  }
  EXPECT_THROW(Region::rotated(0, 0, 1, -1, 0), Error);
  EXPECT_THROW(Region::axis_aligned(NAN, 0, 1, 1), Error);
}

TEST(Region, RotationIsNormalized) {
  const auto r = Region::rotated(0, 0, 2, 1, 3 * std::numbers::pi);
  ASSERT_NE(r.as<Rotated>(), nullptr);
  EXPECT_NEAR(r.as<Rotated>()->theta, std::numbers::pi, 1e-12);
  const auto s = Region::rotated(0, 0, 2, 1, -std::numbers::pi);
  EXPECT_NEAR(s.as<Rotated>()->theta, std::numbers::pi, 1e-12);
}

TEST(RegionText, ParsesAxisAligned) {
  const auto r = parse_region("10.0000,20.0000,30.0000,40.0000");
  const auto* a = r.as<AxisAligned>();
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(a->x, 10);
  EXPECT_EQ(a->y, 20);
  EXPECT_EQ(a->w, 30);
  EXPECT_EQ(a->h, 40);
  EXPECT_EQ(format_region(r), "10.0000,20.0000,30.0000,40.0000");
}

TEST(RegionText, EightNumbersAreAQuad) {
  const auto r = parse_region("0,0,4,0,4,2,0,2");
  ASSERT_NE(r.as<Quad>(), nullptr);
  EXPECT_NEAR(r.area(), 8.0, 1e-12);
  EXPECT_EQ(format_region(r), "0.0000,0.0000,4.0000,0.0000,4.0000,2.0000,0.0000,2.0000");
}

TEST(RegionText, AbsentRoundTrips) {
  EXPECT_TRUE(parse_region("absent").is_absent());
  EXPECT_EQ(format_region(Region::absent()), "absent");
}

TEST(RegionText, RotatedFormatsAsCorners) {
  const auto r = Region::rotated(5, 5, 4, 2, 0.25);
  const auto back = parse_region(format_region(r));
  EXPECT_TRUE(regions_close(r, back, 1e-4));
  EXPECT_NEAR(overlap(r, back), 1.0, 1e-4);
}

TEST(RegionText, RejectsMalformedInput) {
  for (const char* bad : {"", "1,2,3", "1,2,3,4,5", "1, 2,3,4", "a,b,c,d", "1,2,3,0", "1,2,3,4,", "nan,0,1,1", "Absent"})
    EXPECT_THROW(parse_region(bad), Error) << bad;
}

TEST(RegionText, FourFractionalDigits) {
  EXPECT_EQ(format_region(Region::axis_aligned(1.23456, -0.5, 2.00004, 3)), "1.2346,-0.5000,2.0000,3.0000");
}

TEST(Perturb, ZeroAmplitudeIsIdentity) {
  const auto r = Region::rotated(50, 40, 20, 10, 0.2);
  const auto p = perturb(r, PerturbationSpec{0, 0, 0, 5});
  EXPECT_TRUE(regions_close(r, p, 1e-12));
}

TEST(Perturb, CenterStaysWithinAmplitude) {
  const auto r = Region::axis_aligned(0, 0, 100, 50);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const auto p = perturb(r, PerturbationSpec{}, rng);
    const auto c = p.center();
    ASSERT_LE(std::abs(c.x - 50), 10 + 1e-9);
    ASSERT_LE(std::abs(c.y - 25), 5 + 1e-9);
    const auto* rot = p.as<Rotated>();
    ASSERT_NE(rot, nullptr);
    ASSERT_LE(std::abs(rot->theta), 0.1 + 1e-12);
    ASSERT_LE(std::abs(rot->w / 100 - 1), 0.1 + 1e-12);
    ASSERT_LE(std::abs(rot->h / 50 - 1), 0.1 + 1e-12);
  }
}

TEST(Perturb, SameSeedSameOutput) {
  const auto r = Region::axis_aligned(10, 10, 30, 20);
  PerturbationSpec spec;
  spec.seed = 42;
  EXPECT_TRUE(regions_close(perturb(r, spec), perturb(r, spec), 0.0));
  spec.seed = 43;
  EXPECT_FALSE(regions_close(perturb(r, PerturbationSpec{0.1, 0.1, 0.1, 42}), perturb(r, spec), 1e-9));
}

TEST(Perturb, RotationStaysNearInputAngle) {
  const auto r = Region::rotated(0, 0, 10, 10, 1.0);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 500; ++i) {
    const auto p = perturb(r, PerturbationSpec{}, rng);
    ASSERT_NE(p.as<Rotated>(), nullptr);
    ASSERT_LE(std::abs(p.as<Rotated>()->theta - 1.0), 0.1 + 1e-12);
  }
}

}  // namespace
}  // namespace votkit

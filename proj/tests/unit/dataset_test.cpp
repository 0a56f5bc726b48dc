#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "dataset.hpp"
#include "error.hpp"
#include "image.hpp"
#include "support.hpp"
#include "text.hpp"

namespace votkit {
namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& p, const std::string& s) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << s;
}

fs::path tiny_sequence(const fs::path& dir, int frames, const std::string& gt) {
  fs::create_directories(dir / "frames");
  for (int i = 1; i <= frames; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%08d.ppm", i);
    write_pnm(dir / "frames" / name, Image(8, 8, 3));
  }
  write_text(dir / "groundtruth.txt", gt);
  return dir;
}

TEST(LoadSequence, DefaultsToNeutral) {
  const auto dir = tiny_sequence(test::scratch_dir() / "seq", 3, "1,1,2,2\n1,1,2,2\n1,1,2,2\n");
  const auto seq = load_sequence(dir);
  EXPECT_EQ(seq.name, "seq");
  ASSERT_EQ(seq.size(), 3u);
  EXPECT_EQ(seq.frames.size(), 3u);
  for (std::size_t t = 0; t < 3; ++t) EXPECT_TRUE(seq.has(Attribute::Neutral, t));
  EXPECT_EQ(seq.gamma, 0.0);
}

TEST(LoadSequence, CountMismatchNamesFile) {
  const auto dir = tiny_sequence(test::scratch_dir() / "seq", 3, "1,1,2,2\n1,1,2,2\n");
  try {
    load_sequence(dir);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Format);
    EXPECT_NE(std::string(e.what()).find("groundtruth.txt"), std::string::npos) << e.what();
  }
}

TEST(LoadSequence, BadRegionLineNamesLine) {
  const auto dir = tiny_sequence(test::scratch_dir() / "seq", 3, "1,1,2,2\n1,1,banana\n1,1,2,2\n");
  try {
    load_sequence(dir);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Format);
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
  }
}

TEST(LoadSequence, AbsentAndTagsAndGamma) {
  const auto dir = tiny_sequence(test::scratch_dir() / "seq", 3, "1,1,2,2\nabsent\n1,1,2,2\n");
  write_text(dir / "attributes" / "occlusion.tag", "0\n1\n0\n");
  write_text(dir / "gamma.txt", "0.0420\n");
  const auto seq = load_sequence(dir);
  EXPECT_TRUE(seq.groundtruth[1].is_absent());
  EXPECT_TRUE(seq.has(Attribute::Occlusion, 1));
  EXPECT_FALSE(seq.has(Attribute::Neutral, 1));
  EXPECT_TRUE(seq.has(Attribute::Neutral, 0));
  EXPECT_DOUBLE_EQ(seq.gamma, 0.042);
}

TEST(LoadSequence, WriteLoadRoundTripIsByteExact) {
  const auto root = test::scratch_dir();
  SynthScript s = random_script("rt", 40, 11);
  s.gamma = 0.05;
  const auto rec = synthesize(s, root / "rt");
  const auto gt1 = read_file(root / "rt" / "groundtruth.txt");
  const auto occ1 = read_file(root / "rt" / "attributes" / "occlusion.tag");
  const auto loaded = load_sequence(root / "rt");
  write_sequence(loaded, root / "rt");
  EXPECT_EQ(read_file(root / "rt" / "groundtruth.txt"), gt1);
  EXPECT_EQ(read_file(root / "rt" / "attributes" / "occlusion.tag"), occ1);
  const auto again = load_sequence(root / "rt");
  ASSERT_EQ(again.size(), rec.size());
  for (std::size_t t = 0; t < rec.size(); ++t) {
    EXPECT_EQ(format_region(again.groundtruth[t]), format_region(rec.groundtruth[t]));
    for (auto a : kAllAttributes) EXPECT_EQ(again.has(a, t), rec.has(a, t));
  }
  EXPECT_DOUBLE_EQ(again.gamma, 0.05);
}

TEST(Gamma, SampleCountOfReportedStudy) { EXPECT_EQ(gamma_sample_count(4, 21), 15960u); }

TEST(Gamma, SampleCountIdentity) {
  for (std::uint64_t n = 3; n <= 50; ++n) EXPECT_EQ(gamma_sample_count(1, n), n * (n - 1) * (n - 2) / 2) << n;
}

TEST(Gamma, IdenticalBoxesGiveZero) {
  AnnotatorBoxes a;
  a.frames = {0, 5};
  a.boxes = {std::vector<Region>(4, Region::axis_aligned(0, 0, 10, 10)),
             std::vector<Region>(4, Region::axis_aligned(3, 3, 5, 5))};
  EXPECT_EQ(estimate_gamma(a), 0.0);
}

TEST(Gamma, HandEnumeratedThreeBoxes) {
  // Overlaps: A-B 1.0, A-C 0.8, B-C 0.8; per ground-truth choice the differences are 0.2, 0.2, 0.
  AnnotatorBoxes a;
  a.frames = {0};
  a.boxes = {{Region::axis_aligned(0, 0, 10, 10), Region::axis_aligned(0, 0, 10, 10), Region::axis_aligned(0, 0, 10, 8)}};
  EXPECT_NEAR(estimate_gamma(a), 0.4 / 3.0, 1e-12);
}

TEST(Gamma, PermutationInvariant) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> jitter(-2, 2);
  AnnotatorBoxes a;
  a.frames = {0, 1, 2};
  for (int f = 0; f < 3; ++f) {
    std::vector<Region> boxes;
    for (int i = 0; i < 6; ++i) boxes.push_back(Region::axis_aligned(20 + jitter(rng), 20 + jitter(rng), 30 + jitter(rng), 20 + jitter(rng)));
    a.boxes.push_back(boxes);
  }
  const double g = estimate_gamma(a);
  auto b = a;
  for (auto& boxes : b.boxes) std::shuffle(boxes.begin(), boxes.end(), rng);
  std::swap(b.boxes[0], b.boxes[2]);
  std::swap(b.frames[0], b.frames[2]);
  EXPECT_NEAR(estimate_gamma(b), g, 1e-12);
  EXPECT_GT(g, 0.0);
}

TEST(Gamma, TooFewBoxesIsError) {
  AnnotatorBoxes a;
  a.frames = {0};
  a.boxes = {{Region::axis_aligned(0, 0, 1, 1), Region::axis_aligned(0, 0, 1, 1)}};
  try {
    estimate_gamma(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
  }
}

TEST(Gamma, ReadsInterleavedAnnotationFile) {
  const auto f = test::scratch_dir() / "ann.txt";
  write_text(f, "3 0,0,10,10\n7 1,1,4,4\n3 0,0,10,10\n7 1,1,4,4\n3 0,0,10,8\n7 1,1,4,4\n");
  const auto a = read_annotations(f);
  ASSERT_EQ(a.frames.size(), 2u);
  EXPECT_EQ(a.boxes[0].size(), 3u);
  EXPECT_NEAR(estimate_gamma(a), (0.4 / 3.0 + 0.0) / 2.0, 1e-12);
}

TEST(Synthesize, NoEventsIsNeutral) {
  SynthScript s;
  s.name = "plain";
  s.length = 20;
  s.path = linear_path(Region::axis_aligned(40, 40, 20, 20), 20, 0, 0);
  const auto rec = synthesize(s, test::scratch_dir() / "plain");
  for (std::size_t t = 0; t < rec.size(); ++t) EXPECT_TRUE(rec.has(Attribute::Neutral, t));
  rec.validate();
}

TEST(Synthesize, OcclusionTagsExactInterval) {
  SynthScript s;
  s.length = 30;
  s.path = linear_path(Region::axis_aligned(40, 40, 20, 20), 30, 1, 0);
  s.events.push_back({10, 15, SynthEventKind::Occlude, 0.5});
  const auto rec = script_record(s);
  for (std::size_t t = 0; t < rec.size(); ++t)
    EXPECT_EQ(rec.has(Attribute::Occlusion, t), t >= 10 && t < 15) << t;
}

TEST(Synthesize, DeterministicFrames) {
  const auto root = test::scratch_dir();
  const auto s = random_script("det", 25, 99);
  synthesize(s, root / "a");
  synthesize(s, root / "b");
  for (int i = 1; i <= 25; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%08d.ppm", i);
    ASSERT_EQ(read_file(root / "a" / "frames" / name), read_file(root / "b" / "frames" / name)) << name;
  }
  EXPECT_EQ(read_file(root / "a" / "groundtruth.txt"), read_file(root / "b" / "groundtruth.txt"));
}

TEST(Synthesize, RandomScriptsSatisfyInvariants) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rec = script_record(random_script("r", 120, seed));
    EXPECT_NO_THROW(rec.validate());
    for (std::size_t t = 0; t < rec.size(); ++t) {
      bool any = false;
      for (int a = 0; a < kStoredAttributeCount; ++a) any = any || rec.attributes[a][t];
      EXPECT_EQ(rec.has(Attribute::Neutral, t), !any);
    }
  }
}

TEST(LoadDataset, HonoursListFile) {
  const auto root = test::scratch_dir();
  tiny_sequence(root / "b", 2, "1,1,2,2\n1,1,2,2\n");
  tiny_sequence(root / "a", 2, "1,1,2,2\n1,1,2,2\n");
  EXPECT_EQ(load_dataset(root).front().name, "a");
  write_text(root / "list.txt", "b\na\n");
  const auto ds = load_dataset(root);
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds[0].name, "b");
}

TEST(Image, PnmRoundTrip) {
  const auto dir = test::scratch_dir();
  Image rgb(5, 3, 3), gray(4, 2, 1);
  for (std::size_t i = 0; i < rgb.pixels.size(); ++i) rgb.pixels[i] = static_cast<std::uint8_t>(i * 7);
  for (std::size_t i = 0; i < gray.pixels.size(); ++i) gray.pixels[i] = static_cast<std::uint8_t>(i * 31);
  write_pnm(dir / "a.ppm", rgb);
  write_pnm(dir / "b.pgm", gray);
  EXPECT_EQ(read_pnm(dir / "a.ppm").pixels, rgb.pixels);
  const auto g = read_pnm(dir / "b.pgm");
  EXPECT_EQ(g.channels, 1);
  EXPECT_EQ(g.pixels, gray.pixels);
  write_text(dir / "bad.ppm", "P3\n1 1\n255\n0 0 0\n");
  EXPECT_THROW(read_pnm(dir / "bad.ppm"), Error);
}

}  // namespace
}  // namespace votkit

#include "attributes.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>

#include "error.hpp"
#include "seeding.hpp"
#include "text.hpp"

namespace votkit {

namespace {

constexpr int kHistBins = 16;
constexpr int kGrid = 8;
constexpr int kCellSamples = 4;
constexpr int kPatchRadius = 4;  // 9x9 matching patches
constexpr double kMatchRadius = 40.0;

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

bool inside_convex(const std::array<Point, 4>& c, double x, double y) {
  // Works for either winding: all edge cross products share a sign.
  int sign = 0;
  for (int i = 0; i < 4; ++i) {
    const Point a = c[i], b = c[(i + 1) % 4];
    const double cr = (b.x - a.x) * (y - a.y) - (b.y - a.y) * (x - a.x);
    if (cr == 0.0) continue;
    const int s = cr > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    else if (s != sign) return false;
  }
  return true;
}

double bilinear(const std::vector<double>& gray, int w, int h, double x, double y) {
  // Pixel (i, j) covers [i, i+1) x [j, j+1); its value sits at the center.
  x -= 0.5;
  y -= 0.5;
  x = std::clamp(x, 0.0, static_cast<double>(w - 1));
  y = std::clamp(y, 0.0, static_cast<double>(h - 1));
  const int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
  const double fx = x - x0, fy = y - y0;
  const auto at = [&](int xx, int yy) { return gray[static_cast<std::size_t>(yy) * w + xx]; };
  return (1 - fx) * (1 - fy) * at(x0, y0) + fx * (1 - fy) * at(x1, y0) + (1 - fx) * fy * at(x0, y1) +
         fx * fy * at(x1, y1);
}

std::array<double, kGrid * kGrid> cell_means(const std::vector<double>& gray, int w, int h, const Region& r) {
  const auto c = r.corners();
  std::array<double, kGrid * kGrid> out{};
  for (int gy = 0; gy < kGrid; ++gy) {
    for (int gx = 0; gx < kGrid; ++gx) {
      double sum = 0.0;
      for (int sy = 0; sy < kCellSamples; ++sy) {
        for (int sx = 0; sx < kCellSamples; ++sx) {
          const double u = (gx + (sx + 0.5) / kCellSamples) / kGrid;
          const double v = (gy + (sy + 0.5) / kCellSamples) / kGrid;
          const double px = (1 - u) * (1 - v) * c[0].x + u * (1 - v) * c[1].x + u * v * c[2].x + (1 - u) * v * c[3].x;
          const double py = (1 - u) * (1 - v) * c[0].y + u * (1 - v) * c[1].y + u * v * c[2].y + (1 - u) * v * c[3].y;
          sum += bilinear(gray, w, h, px, py);
        }
      }
      out[gy * kGrid + gx] = sum / (kCellSamples * kCellSamples);
    }
  }
  return out;
}

Region enlarged(const Region& r, double factor) {
  const Point ctr = r.center();
  auto c = r.corners();
  for (auto& p : c) p = {ctr.x + factor * (p.x - ctr.x), ctr.y + factor * (p.y - ctr.y)};
  return Region::quad(c);
}

/// Mean L1 distance between per-channel normalized histograms of the target and its surrounding ring.
std::optional<double> clutter_distance(const Image& img, const Region& gt) {
  const auto inner = region_pixels(gt, img.width, img.height);
  auto outer = region_pixels(enlarged(gt, 1.5), img.width, img.height);
  const auto inner_sorted = [&] {
    auto v = inner;
    std::sort(v.begin(), v.end());
    return v;
  }();
  std::vector<std::pair<int, int>> ring;
  for (const auto& p : outer)
    if (!std::binary_search(inner_sorted.begin(), inner_sorted.end(), p)) ring.push_back(p);
  if (inner.empty() || ring.empty()) return std::nullopt;
  double total = 0.0;
  for (int ch = 0; ch < img.channels; ++ch) {
    std::array<double, kHistBins> hi{}, ho{};
    for (auto [x, y] : inner) hi[img.at(x, y, ch) * kHistBins / 256] += 1.0;
    for (auto [x, y] : ring) ho[img.at(x, y, ch) * kHistBins / 256] += 1.0;
    double d = 0.0;
    for (int b = 0; b < kHistBins; ++b) d += std::abs(hi[b] / inner.size() - ho[b] / ring.size());
    total += d;
  }
  return total / img.channels;
}

double mean_intensity(const std::vector<double>& gray, int w, const std::vector<std::pair<int, int>>& pixels) {
  double s = 0.0;
  for (auto [x, y] : pixels) s += gray[static_cast<std::size_t>(y) * w + x];
  return s / static_cast<double>(pixels.size());
}

/// Circular mean hue of the chromatic pixels inside a region (turns), nullopt if there are none.
std::optional<double> mean_hue(const Image& img, const Region& r) {
  if (img.channels < 3) return std::nullopt;
  double sx = 0.0, sy = 0.0;
  std::size_t n = 0;
  for (auto [x, y] : region_pixels(r, img.width, img.height)) {
    const auto h = hue_of(img.at(x, y, 0), img.at(x, y, 1), img.at(x, y, 2));
    if (!h) continue;
    sx += std::cos(2 * std::numbers::pi * *h);
    sy += std::sin(2 * std::numbers::pi * *h);
    ++n;
  }
  if (n == 0 || (sx == 0.0 && sy == 0.0)) return std::nullopt;
  double turns = std::atan2(sy, sx) / (2 * std::numbers::pi);
  if (turns < 0) turns += 1.0;
  return turns;
}

struct Corner {
  int x, y;
  double response;
};

std::vector<Corner> harris_corners(const std::vector<double>& g, int w, int h, int max_corners) {
  const auto at = [&](int x, int y) { return g[static_cast<std::size_t>(y) * w + x]; };
  std::vector<double> ixx(g.size(), 0.0), iyy(g.size(), 0.0), ixy(g.size(), 0.0);
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      const double gx = (at(x + 1, y - 1) + 2 * at(x + 1, y) + at(x + 1, y + 1) - at(x - 1, y - 1) -
                         2 * at(x - 1, y) - at(x - 1, y + 1)) / 8.0;
      const double gy = (at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1) - at(x - 1, y - 1) -
                         2 * at(x, y - 1) - at(x + 1, y - 1)) / 8.0;
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      ixx[i] = gx * gx;
      iyy[i] = gy * gy;
      ixy[i] = gx * gy;
    }
  }
  std::vector<double> resp(g.size(), 0.0);
  const int win = 2;
  for (int y = win; y + win < h; ++y) {
    for (int x = win; x + win < w; ++x) {
      double a = 0, b = 0, c = 0;
      for (int dy = -win; dy <= win; ++dy)
        for (int dx = -win; dx <= win; ++dx) {
          const std::size_t i = static_cast<std::size_t>(y + dy) * w + (x + dx);
          a += ixx[i];
          b += iyy[i];
          c += ixy[i];
        }
      resp[static_cast<std::size_t>(y) * w + x] = a * b - c * c - 0.04 * (a + b) * (a + b);
    }
  }
  const int border = kPatchRadius + 2;
  std::vector<Corner> corners;
  for (int y = border; y + border < h; ++y) {
    for (int x = border; x + border < w; ++x) {
      const double r = resp[static_cast<std::size_t>(y) * w + x];
      if (r <= 1e-6) continue;
      bool is_max = true;
      for (int dy = -2; dy <= 2 && is_max; ++dy)
        for (int dx = -2; dx <= 2; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const double o = resp[static_cast<std::size_t>(y + dy) * w + (x + dx)];
          // Ties go to the first pixel in scan order.
          if (o > r || (o == r && (dy < 0 || (dy == 0 && dx < 0)))) {
            is_max = false;
            break;
          }
        }
      if (is_max) corners.push_back({x, y, r});
    }
  }
  std::stable_sort(corners.begin(), corners.end(), [](const Corner& a, const Corner& b) { return a.response > b.response; });
  if (corners.size() > static_cast<std::size_t>(max_corners)) corners.resize(max_corners);
  return corners;
}

double patch_ssd(const std::vector<double>& a, const std::vector<double>& b, int w, Corner ca, Corner cb) {
  double s = 0.0;
  for (int dy = -kPatchRadius; dy <= kPatchRadius; ++dy)
    for (int dx = -kPatchRadius; dx <= kPatchRadius; ++dx) {
      const double d = a[static_cast<std::size_t>(ca.y + dy) * w + ca.x + dx] -
                       b[static_cast<std::size_t>(cb.y + dy) * w + cb.x + dx];
      s += d * d;
    }
  return s;
}

double median(std::vector<double> v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::array<double, kAttributeCount> AttributeVector::values() const {
  return {illumination_change, size_change,      object_motion,       clutter,      camera_motion,
          blur,                aspect_ratio_change, color_change,     deformation,  scene_complexity};
}

std::array<std::string_view, kAttributeCount> AttributeVector::names() {
  return {"illumination_change", "size_change",         "object_motion", "clutter",     "camera_motion",
          "blur",                "aspect_ratio_change", "color_change",  "deformation", "scene_complexity"};
}

std::vector<std::pair<int, int>> region_pixels(const Region& r, int width, int height) {
  std::vector<std::pair<int, int>> out;
  if (r.is_absent()) return out;
  const auto c = r.corners();
  double x0 = c[0].x, x1 = c[0].x, y0 = c[0].y, y1 = c[0].y;
  for (const auto& p : c) {
    x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
  }
  const int xa = std::max(0, static_cast<int>(std::floor(x0))), xb = std::min(width - 1, static_cast<int>(std::ceil(x1)));
  const int ya = std::max(0, static_cast<int>(std::floor(y0))), yb = std::min(height - 1, static_cast<int>(std::ceil(y1)));
  for (int y = ya; y <= yb; ++y)
    for (int x = xa; x <= xb; ++x)
      if (inside_convex(c, x + 0.5, y + 0.5)) out.emplace_back(x, y);
  return out;
}

std::optional<double> hue_of(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
  const double mx = std::max({r, g, b}), mn = std::min({r, g, b}), d = mx - mn;
  if (d <= 0.0) return std::nullopt;
  double h;
  if (mx == r) h = std::fmod((g - b) / d, 6.0);
  else if (mx == g) h = (b - r) / d + 2.0;
  else h = (r - g) / d + 4.0;
  h /= 6.0;
  if (h < 0) h += 1.0;
  return h;
}

double count_entropy(const std::vector<std::uint8_t>& gray) {
  std::array<double, 256> counts{};
  for (auto v : gray) counts[v] += 1.0;
  double e = 0.0;
  for (double b : counts)
    if (b > 0) e += b * std::log(b);
  return e;
}

double spectral_negentropy(const std::vector<double>& gray, int width, int height) {
  if (width <= 0 || height <= 0 || gray.size() != static_cast<std::size_t>(width) * height)
    raise(ErrorKind::Shape, "image buffer does not match its size");
  const int half = width / 2 + 1;
  std::vector<double> in(gray);
  fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(height) * half);
  if (out == nullptr) raise(ErrorKind::Internal, "fftw allocation failed");
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_2d(height, width, in.data(), out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  // Full spectrum magnitudes: columns other than 0 and width/2 stand for two conjugate bins.
  std::vector<std::pair<double, double>> mags;  // (magnitude, multiplicity)
  mags.reserve(static_cast<std::size_t>(height) * half);
  double total = 0.0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < half; ++x) {
      const auto& c = out[static_cast<std::size_t>(y) * half + x];
      const double m = std::hypot(c[0], c[1]);
      const double mult = (x == 0 || (width % 2 == 0 && x == width / 2)) ? 1.0 : 2.0;
      mags.emplace_back(m, mult);
      total += m * mult;
    }
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(out);
  const double n = static_cast<double>(width) * height;
  if (total <= 0.0) return 0.0;
  double entropy = 0.0;
  for (auto [m, mult] : mags) {
    if (m <= 0.0) continue;
    const double p = m / total;
    entropy -= mult * p * std::log(p);
  }
  return std::max(0.0, std::log(n) - entropy);
}

std::optional<Point> estimate_translation(const std::vector<double>& a, const std::vector<double>& b, int w, int h,
                                          std::uint64_t seed, const AttributeOptions& options) {
  const auto ca = harris_corners(a, w, h, options.max_corners);
  const auto cb = harris_corners(b, w, h, options.max_corners);
  std::vector<Point> displacements;
  for (const auto& p : ca) {
    double best = std::numeric_limits<double>::infinity();
    const Corner* match = nullptr;
    for (const auto& q : cb) {
      if (std::hypot(q.x - p.x, q.y - p.y) > kMatchRadius) continue;
      const double s = patch_ssd(a, b, w, p, q);
      if (s < best) {
        best = s;
        match = &q;
      }
    }
    if (match) displacements.push_back({static_cast<double>(match->x - p.x), static_cast<double>(match->y - p.y)});
  }
  if (displacements.size() < 3) return std::nullopt;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, displacements.size() - 1);
  std::size_t best_inliers = 0;
  Point best{0, 0};
  const double thr = options.inlier_threshold;
  for (int it = 0; it < options.ransac_iterations; ++it) {
    const Point t = displacements[pick(rng)];
    std::size_t inliers = 0;
    double sx = 0, sy = 0;
    for (const auto& d : displacements)
      if (std::hypot(d.x - t.x, d.y - t.y) < thr) ++inliers, sx += d.x, sy += d.y;
    if (inliers > best_inliers) {
      best_inliers = inliers;
      best = {sx / inliers, sy / inliers};
    }
  }
  return best;
}

AttributeVector compute_attributes(const SequenceRecord& seq, const AttributeOptions& options) {
  const std::size_t n = seq.size();
  const std::size_t window = static_cast<std::size_t>(options.size_window);
  if (n < window + 1)
    raise(ErrorKind::InsufficientData, seq.name + ": at least " + std::to_string(window + 1) + " frames required");
  if (seq.frames.size() != n) raise(ErrorKind::Format, seq.name + ": frame count does not match the ground truth");
  std::size_t first = n, last = n;
  for (std::size_t t = 0; t < n; ++t)
    if (!seq.groundtruth[t].is_absent()) {
      if (first == n) first = t;
      last = t;
    }
  if (first == n) raise(ErrorKind::InsufficientData, seq.name + ": no frame shows the target");

  AttributeVector v;
  const auto& gt = seq.groundtruth;

  // Geometry-only attributes.
  {
    double size_sum = 0.0;
    for (std::size_t t = window; t < n; ++t) {
      if (gt[t].is_absent()) continue;
      double s = 0.0;
      bool complete = true;
      for (std::size_t k = 1; k <= window; ++k) {
        if (gt[t - k].is_absent()) {
          complete = false;
          break;
        }
        s += std::abs(gt[t].area() - gt[t - k].area());
      }
      if (complete) size_sum += s / static_cast<double>(window);
    }
    v.size_change = size_sum;

    double motion = 0.0;
    std::size_t pairs = 0;
    for (std::size_t t = 1; t < n; ++t) {
      if (gt[t].is_absent() || gt[t - 1].is_absent()) continue;
      const Point a = gt[t - 1].center(), b = gt[t].center();
      motion += std::hypot(b.x - a.x, b.y - a.y);
      ++pairs;
    }
    v.object_motion = pairs ? motion / static_cast<double>(pairs) : 0.0;

    const double ar0 = gt[first].width() / gt[first].height();
    double ar = 0.0;
    std::size_t present = 0;
    for (std::size_t t = 0; t < n; ++t) {
      if (gt[t].is_absent()) continue;
      ar += (gt[t].width() / gt[t].height()) / ar0;
      ++present;
    }
    v.aspect_ratio_change = ar / static_cast<double>(present);
  }

  // Image attributes, streamed frame by frame.
  double illum = 0.0, clutter = 0.0, camera = 0.0, blur = 0.0, deform = 0.0, scene = 0.0;
  std::size_t illum_n = 0, clutter_n = 0, camera_n = 0, deform_n = 0;
  double ref_intensity = 0.0;
  std::array<double, kGrid * kGrid> ref_cells{};
  std::optional<double> hue_first, hue_last;
  std::vector<double> prev_gray;
  int width = 0, height = 0;

  for (std::size_t t = 0; t < n; ++t) {
    const Image img = read_pnm(seq.frames[t]);
    if (t == 0) width = img.width, height = img.height;
    else if (img.width != width || img.height != height) raise(ErrorKind::Format, seq.frames[t].string() + ": frame size changed");
    const auto gray = to_gray(img);
    scene += count_entropy(to_gray8(img));
    blur += spectral_negentropy(gray, width, height);

    if (!prev_gray.empty()) {
      const auto tr = estimate_translation(prev_gray, gray, width, height, sub_seed(options.seed, t), options);
      camera += tr ? std::hypot(tr->x, tr->y) : 0.0;
      ++camera_n;
    }

    if (!gt[t].is_absent()) {
      const auto pix = region_pixels(gt[t], width, height);
      if (!pix.empty()) {
        const double mi = mean_intensity(gray, width, pix);
        if (t == first) ref_intensity = mi;
        else illum += std::abs(mi - ref_intensity), ++illum_n;
      }
      if (auto c = clutter_distance(img, gt[t])) clutter += *c, ++clutter_n;
      const auto cells = cell_means(gray, width, height, gt[t]);
      if (t == first) {
        ref_cells = cells;
      } else {
        double d = 0.0;
        for (std::size_t i = 0; i < cells.size(); ++i) d += (cells[i] - ref_cells[i]) * (cells[i] - ref_cells[i]);
        deform += d;
        ++deform_n;
      }
      if (t == first) hue_first = mean_hue(img, gt[t]);
      if (t == last) hue_last = mean_hue(img, gt[t]);
    }
    prev_gray = gray;
  }

  v.illumination_change = illum_n ? illum / static_cast<double>(illum_n) : 0.0;
  v.clutter = clutter_n ? clutter / static_cast<double>(clutter_n) : 0.0;
  v.camera_motion = camera_n ? camera / static_cast<double>(camera_n) : 0.0;
  v.blur = blur / static_cast<double>(n);
  v.deformation = deform_n ? deform / static_cast<double>(deform_n) : 0.0;
  v.scene_complexity = scene / static_cast<double>(n);
  if (hue_first && hue_last) {
    const double d = std::abs(*hue_first - *hue_last);
    v.color_change = std::min(d, 1.0 - d);
  }
  return v;
}

ClusterResult affinity_propagation(const std::vector<std::vector<double>>& similarity, const AffinityOptions& options) {
  const std::size_t n = similarity.size();
  for (const auto& row : similarity)
    if (row.size() != n) raise(ErrorKind::Shape, "similarity matrix must be square");
  if (n == 0) raise(ErrorKind::InvalidArgument, "similarity matrix is empty");
  if (!(options.damping >= 0.0 && options.damping < 1.0)) raise(ErrorKind::Parameter, "damping must lie in [0,1)");
  if (options.max_iter < 1 || options.convergence_iter < 1) raise(ErrorKind::Parameter, "iteration limits must be >= 1");
  for (const auto& row : similarity)
    for (double s : row)
      if (!std::isfinite(s)) raise(ErrorKind::InvalidArgument, "similarities must be finite");

  ClusterResult res;
  if (n == 1) {
    res.assignments = {0};
    res.exemplars = {0};
    res.converged = true;
    res.preference = options.preference.value_or(similarity[0][0]);
    return res;
  }

  std::vector<double> S(n * n);
  std::vector<double> off;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      S[i * n + k] = similarity[i][k];
      if (i != k) off.push_back(similarity[i][k]);
    }
  const double pref = options.preference ? *options.preference : median(off);
  res.preference = pref;
  for (std::size_t i = 0; i < n; ++i) S[i * n + i] = pref;

  // Tiny deterministic jitter breaks symmetric ties between identical points.
  {
    double lo = *std::min_element(S.begin(), S.end()), hi = *std::max_element(S.begin(), S.end());
    const double scale = (hi - lo > 0 ? hi - lo : 1.0) * 1e-12;
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& s : S) s += scale * u(rng);
  }

  std::vector<double> R(n * n, 0.0), A(n * n, 0.0), tmp(n * n);
  std::vector<std::uint8_t> exemplar(n, 0), prev(n, 0);
  int stable = 0;
  const double lambda = options.damping;
  int it = 0;
  for (; it < options.max_iter; ++it) {
    // Responsibilities.
    for (std::size_t i = 0; i < n; ++i) {
      double first = -std::numeric_limits<double>::infinity(), second = first;
      std::size_t arg = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const double v = A[i * n + k] + S[i * n + k];
        if (v > first) {
          second = first;
          first = v;
          arg = k;
        } else if (v > second) {
          second = v;
        }
      }
      for (std::size_t k = 0; k < n; ++k) {
        const double r = S[i * n + k] - (k == arg ? second : first);
        R[i * n + k] = lambda * R[i * n + k] + (1 - lambda) * r;
      }
    }
    // Availabilities.
    for (std::size_t k = 0; k < n; ++k) {
      double pos = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (i != k) pos += std::max(0.0, R[i * n + k]);
      for (std::size_t i = 0; i < n; ++i) {
        double a;
        if (i == k) a = pos;
        else a = std::min(0.0, R[k * n + k] + pos - std::max(0.0, R[i * n + k]));
        A[i * n + k] = lambda * A[i * n + k] + (1 - lambda) * a;
      }
    }
    std::size_t count = 0;
    for (std::size_t k = 0; k < n; ++k) {
      exemplar[k] = (A[k * n + k] + R[k * n + k]) > 0 ? 1 : 0;
      count += exemplar[k];
    }
    stable = (exemplar == prev) ? stable + 1 : 0;
    prev = exemplar;
    if (count > 0 && stable >= options.convergence_iter) {
      res.converged = true;
      ++it;
      break;
    }
  }
  res.iterations = it;

  std::vector<std::size_t> ex;
  for (std::size_t k = 0; k < n; ++k)
    if (exemplar[k]) ex.push_back(k);
  if (ex.empty()) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < n; ++k)
      if (A[k * n + k] + R[k * n + k] > A[best * n + best] + R[best * n + best]) best = k;
    ex.push_back(best);
  }

  auto assign = [&](const std::vector<std::size_t>& exs) {
    std::vector<std::size_t> lab(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = exs[0];
      for (auto k : exs) {
        if (k == i) {
          best = i;
          break;
        }
        if (S[i * n + k] > S[i * n + best]) best = k;
      }
      lab[i] = best;
    }
    for (auto k : exs) lab[k] = k;
    return lab;
  };
  auto labels = assign(ex);
  // Refine: each cluster's exemplar becomes the member with the highest total similarity to the others.
  std::vector<std::size_t> refined;
  for (auto k : ex) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (labels[i] == k) members.push_back(i);
    std::size_t best = k;
    double best_sum = -std::numeric_limits<double>::infinity();
    for (auto c : members) {
      double s = 0.0;
      for (auto m : members)
        if (m != c) s += S[m * n + c];
      if (s > best_sum) best_sum = s, best = c;
    }
    refined.push_back(best);
  }
  std::sort(refined.begin(), refined.end());
  refined.erase(std::unique(refined.begin(), refined.end()), refined.end());
  res.exemplars = refined;
  res.assignments = assign(refined);
  return res;
}

ClusterResult select_dataset(const std::vector<AttributeVector>& vectors, std::size_t target, const AffinityOptions& options) {
  const std::size_t n = vectors.size();
  if (target == 0) raise(ErrorKind::Parameter, "target cluster count must be >= 1");
  if (n < target)
    raise(ErrorKind::InsufficientData, "cannot form " + std::to_string(target) + " clusters from " + std::to_string(n) +
                                           " sequences");
  std::vector<std::array<double, kAttributeCount>> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = vectors[i].values();
  for (std::size_t a = 0; a < kAttributeCount; ++a) {
    double mean = 0.0;
    for (const auto& row : z) mean += row[a];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& row : z) var += (row[a] - mean) * (row[a] - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    for (auto& row : z) row[a] = sd > 0 ? (row[a] - mean) / sd : 0.0;
  }
  std::vector<std::vector<double>> S(n, std::vector<double>(n, 0.0));
  double min_off = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double d = 0.0;
      for (std::size_t a = 0; a < kAttributeCount; ++a) d += (z[i][a] - z[j][a]) * (z[i][a] - z[j][a]);
      S[i][j] = -d;
      if (i != j) min_off = std::min(min_off, -d);
    }

  AffinityOptions opt = options;
  // Oscillating runs are retried with heavy damping; a run that still does not converge carries no usable count.
  auto run = [&](double pref) {
    opt.preference = pref;
    opt.damping = options.damping;
    auto r = affinity_propagation(S, opt);
    if (!r.converged && options.damping < 0.9) {
      opt.damping = 0.9;
      r = affinity_propagation(S, opt);
    }
    return r;
  };
  auto distance = [&](const ClusterResult& r) {
    return r.exemplars.size() > target ? r.exemplars.size() - target : target - r.exemplars.size();
  };
  std::optional<ClusterResult> best;
  auto consider = [&](const ClusterResult& r) {
    if (r.converged && (!best || distance(r) < distance(*best))) best = r;
  };

  double hi = 0.0, lo = 2.0 * min_off - 1.0;
  auto top = run(hi);
  consider(top);
  if (top.converged && top.exemplars.size() <= target) return top;
  for (int grow = 0; grow < 20; ++grow) {
    auto r = run(lo);
    consider(r);
    if (!r.converged || r.exemplars.size() <= target) break;
    hi = lo;
    lo *= 2.0;
  }
  if (best && best->exemplars.size() == target) return *best;
  for (int step = 0; step < 60; ++step) {
    const double mid = 0.5 * (lo + hi);
    auto r = run(mid);
    consider(r);
    if (r.converged && r.exemplars.size() == target) return r;
    if (!r.converged || r.exemplars.size() < target) lo = mid;
    else hi = mid;
  }
  if (!best) raise(ErrorKind::Internal, "affinity propagation did not converge for any preference");
  return *best;
}

std::string attributes_csv(const std::vector<std::string>& names, const std::vector<AttributeVector>& vectors,
                           const ClusterResult* clusters) {
  std::string out = "sequence";
  for (auto nm : AttributeVector::names()) out += "," + std::string(nm);
  if (clusters) out += ",cluster,exemplar";
  out += "\n";
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    out += csv_escape(names.at(i));
    for (double v : vectors[i].values()) {
      char buf[48];
      std::snprintf(buf, sizeof buf, ",%.6f", v);
      out += buf;
    }
    if (clusters) {
      const auto ex = clusters->assignments.at(i);
      const auto pos = std::find(clusters->exemplars.begin(), clusters->exemplars.end(), ex) - clusters->exemplars.begin();
      out += "," + std::to_string(pos) + "," + (ex == i ? "1" : "0");
    }
    out += "\n";
  }
  return out;
}

}  // namespace votkit

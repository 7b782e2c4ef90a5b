#include "tvg/salience.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>

#include "tvg/errors.hpp"
#include "tvg/frame.hpp"
#include "tvg/image_ops.hpp"

namespace tvg {

std::string to_string(SalienceMethod m) {
  switch (m) {
    case SalienceMethod::OT: return "OT";
    case SalienceMethod::PHASH: return "PHASH";
    case SalienceMethod::BLOCKFLOW: return "BLOCKFLOW";
  }
  return "OT";
}

SalienceMethod salience_method_from_string(const std::string& s) {
  if (s == "OT") return SalienceMethod::OT;
  if (s == "PHASH") return SalienceMethod::PHASH;
  if (s == "BLOCKFLOW") return SalienceMethod::BLOCKFLOW;
  throw Error("unknown salience method '" + s + "' (want OT, PHASH or BLOCKFLOW)");
}

HueHistogram hue_histogram(const HuePlane& plane, int bins) {
  if (bins < 2) throw Error("histogram needs at least 2 bins");
  if (plane.hue.empty()) throw Error("cannot histogram an empty plane");
  HueHistogram h;
  h.bins.assign(static_cast<std::size_t>(bins), 0.0);
  for (double hue : plane.hue) {
    int k = static_cast<int>(hue * bins / 360.0);
    k = std::min(k, bins - 1);
    h.bins[static_cast<std::size_t>(k)] += 1.0;
  }
  h.total_mass = static_cast<double>(plane.hue.size());
  for (double& b : h.bins) b /= h.total_mass;
  return h;
}

double ot_distance(const HueHistogram& a, const HueHistogram& b) {
  if (a.bin_count() != b.bin_count())
    throw Error("histogram bin counts differ: " + std::to_string(a.bin_count()) +
                " vs " + std::to_string(b.bin_count()));
  const int n = a.bin_count();
  double cdf_a = 0.0, cdf_b = 0.0, cost = 0.0;
  for (int k = 0; k < n; ++k) {
    cdf_a += a.bins[static_cast<std::size_t>(k)];
    cdf_b += b.bins[static_cast<std::size_t>(k)];
    cost += std::abs(cdf_a - cdf_b);
  }
  return cost / static_cast<double>(n - 1);
}

double ot_distance_circular(const HueHistogram& a, const HueHistogram& b) {
  if (a.bin_count() != b.bin_count())
    throw Error("histogram bin counts differ: " + std::to_string(a.bin_count()) +
                " vs " + std::to_string(b.bin_count()));
  const int n = a.bin_count();
  std::vector<double> diff(static_cast<std::size_t>(n));
  double cdf_a = 0.0, cdf_b = 0.0;
  for (int k = 0; k < n; ++k) {
    cdf_a += a.bins[static_cast<std::size_t>(k)];
    cdf_b += b.bins[static_cast<std::size_t>(k)];
    diff[static_cast<std::size_t>(k)] = cdf_a - cdf_b;
  }
  // min over cut positions j of sum_k |D_k - D_j|; a median D_j is optimal.
  std::vector<double> sorted = diff;
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  double median = sorted[static_cast<std::size_t>(n) / 2];
  double cost = 0.0;
  for (double d : diff) cost += std::abs(d - median);
  return cost / static_cast<double>(n - 1);
}

namespace {

constexpr int kHashSize = 32;  // DCT input edge
constexpr int kHashBlock = 8;  // retained low-frequency block edge

// Orthonormal DCT-II along rows then columns of a 32x32 tile.
std::array<double, kHashSize * kHashSize> dct2d(const std::vector<double>& gray) {
  static const auto cos_table = [] {
    std::array<double, kHashSize * kHashSize> t{};
    for (int u = 0; u < kHashSize; ++u)
      for (int x = 0; x < kHashSize; ++x)
        t[static_cast<std::size_t>(u) * kHashSize + x] =
            std::cos(M_PI * (2.0 * x + 1.0) * u / (2.0 * kHashSize));
    return t;
  }();
  auto scale = [](int u) {
    return u == 0 ? std::sqrt(1.0 / kHashSize) : std::sqrt(2.0 / kHashSize);
  };

  std::array<double, kHashSize * kHashSize> rows{};
  for (int y = 0; y < kHashSize; ++y)
    for (int u = 0; u < kHashSize; ++u) {
      double acc = 0.0;
      for (int x = 0; x < kHashSize; ++x)
        acc += gray[static_cast<std::size_t>(y) * kHashSize + x] *
               cos_table[static_cast<std::size_t>(u) * kHashSize + x];
      rows[static_cast<std::size_t>(y) * kHashSize + u] = scale(u) * acc;
    }

  std::array<double, kHashSize * kHashSize> out{};
  for (int u = 0; u < kHashSize; ++u)
    for (int v = 0; v < kHashSize; ++v) {
      double acc = 0.0;
      for (int y = 0; y < kHashSize; ++y)
        acc += rows[static_cast<std::size_t>(y) * kHashSize + u] *
               cos_table[static_cast<std::size_t>(v) * kHashSize + y];
      out[static_cast<std::size_t>(v) * kHashSize + u] = scale(v) * acc;
    }
  return out;
}

}  // namespace

std::uint64_t phash(const FrameSample& frame) {
  auto gray = to_grayscale(frame);
  auto small = resize_gray_bilinear(gray, frame.width, frame.height, kHashSize, kHashSize);
  auto coeffs = dct2d(small);

  std::array<double, kHashBlock * kHashBlock - 1> ac{};
  std::size_t n = 0;
  for (int v = 0; v < kHashBlock; ++v)
    for (int u = 0; u < kHashBlock; ++u) {
      if (u == 0 && v == 0) continue;
      ac[n++] = coeffs[static_cast<std::size_t>(v) * kHashSize + u];
    }
  std::array<double, ac.size()> sorted = ac;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  double median = sorted[sorted.size() / 2];

  std::uint64_t hash = 0;
  int bit = 0;
  for (int v = 0; v < kHashBlock; ++v)
    for (int u = 0; u < kHashBlock; ++u, ++bit) {
      if (coeffs[static_cast<std::size_t>(v) * kHashSize + u] > median)
        hash |= std::uint64_t{1} << bit;
    }
  return hash;
}

double phash_distance(const FrameSample& a, const FrameSample& b) {
  std::uint64_t ha = phash(a), hb = phash(b);
  return static_cast<double>(std::popcount(ha ^ hb)) / 64.0;
}

double blockflow_distance(const FrameSample& a, const FrameSample& b,
                          int block, int radius) {
  if (a.width != b.width || a.height != b.height)
    throw Error("blockflow frames must share dimensions");
  if (block < 1 || a.width % block != 0 || a.height % block != 0)
    throw Error("block edge must divide both frame dimensions");
  if (radius < 1) throw Error("search radius must be positive");

  auto ga = to_grayscale(a);
  auto gb = to_grayscale(b);
  const int w = a.width, h = a.height;

  auto sad = [&](int bx, int by, int dx, int dy) {
    double acc = 0.0;
    for (int y = 0; y < block; ++y) {
      const double* ra = &ga[static_cast<std::size_t>(by + y) * w + bx];
      const double* rb = &gb[static_cast<std::size_t>(by + y + dy) * w + bx + dx];
      for (int x = 0; x < block; ++x) acc += std::abs(ra[x] - rb[x]);
    }
    return acc;
  };

  double total = 0.0;
  int blocks = 0;
  for (int by = 0; by < h; by += block)
    for (int bx = 0; bx < w; bx += block) {
      double best_sad = -1.0;
      double best_mag = 0.0;
      for (int dy = -radius; dy <= radius; ++dy) {
        if (by + dy < 0 || by + dy + block > h) continue;
        for (int dx = -radius; dx <= radius; ++dx) {
          if (bx + dx < 0 || bx + dx + block > w) continue;
          double s = sad(bx, by, dx, dy);
          double mag = std::sqrt(static_cast<double>(dx) * dx +
                                 static_cast<double>(dy) * dy);
          // On SAD ties keep the smallest displacement, so identical frames
          // report zero motion.
          if (best_sad < 0.0 || s < best_sad ||
              (s == best_sad && mag < best_mag)) {
            best_sad = s;
            best_mag = mag;
          }
        }
      }
      total += best_mag;
      ++blocks;
    }
  return total / blocks / (radius * std::sqrt(2.0));
}

namespace {

HueHistogram analysis_histogram(const FrameSample& frame, const SalienceParams& p) {
  if (p.analysis_size > 0 &&
      (frame.width > p.analysis_size || frame.height > p.analysis_size)) {
    FrameSample small = resize_bilinear(frame, p.analysis_size, p.analysis_size);
    return hue_histogram(to_hue_plane(small), p.bins);
  }
  return hue_histogram(to_hue_plane(frame), p.bins);
}

}  // namespace

SalienceSeries score_series(const std::vector<FrameSample>& frames,
                            SalienceMethod method, const SalienceParams& params) {
  if (frames.size() < 2) throw Error("score_series needs at least 2 frames");

  SalienceSeries series;
  series.method = method;
  series.normalized = false;
  series.scores.resize(frames.size() - 1);

  switch (method) {
    case SalienceMethod::OT: {
      std::vector<HueHistogram> hists(frames.size());
      for (std::size_t i = 0; i < frames.size(); ++i)
        hists[i] = analysis_histogram(frames[i], params);
      for (std::size_t i = 0; i + 1 < frames.size(); ++i)
        series.scores[i] = params.circular
                               ? ot_distance_circular(hists[i], hists[i + 1])
                               : ot_distance(hists[i], hists[i + 1]);
      break;
    }
    case SalienceMethod::PHASH: {
      std::vector<std::uint64_t> hashes(frames.size());
      for (std::size_t i = 0; i < frames.size(); ++i) hashes[i] = phash(frames[i]);
      for (std::size_t i = 0; i + 1 < frames.size(); ++i)
        series.scores[i] =
            static_cast<double>(std::popcount(hashes[i] ^ hashes[i + 1])) / 64.0;
      break;
    }
    case SalienceMethod::BLOCKFLOW: {
      for (std::size_t i = 0; i + 1 < frames.size(); ++i)
        series.scores[i] =
            blockflow_distance(frames[i], frames[i + 1], params.block, params.radius);
      break;
    }
  }
  return series;
}

SalienceSeries normalize_series(const SalienceSeries& series) {
  SalienceSeries out = series;
  out.normalized = true;
  if (series.scores.empty()) return out;
  auto [mn_it, mx_it] = std::minmax_element(series.scores.begin(), series.scores.end());
  double mn = *mn_it, mx = *mx_it;
  if (mx == mn) {
    std::fill(out.scores.begin(), out.scores.end(), 0.0);
    return out;
  }
  for (double& s : out.scores) s = (s - mn) / (mx - mn);
  return out;
}

}  // namespace tvg

#pragma once

#include <string>
#include <vector>

#include "tvg/frame.hpp"

namespace tvg {

/// Normalized hue histogram over [0, 360) split into equal-width bins.
struct HueHistogram {
  std::vector<double> bins;  // sums to 1 after normalization
  double total_mass = 0.0;   // pixel count before normalization

  int bin_count() const { return static_cast<int>(bins.size()); }
};

enum class SalienceMethod { OT, PHASH, BLOCKFLOW };

std::string to_string(SalienceMethod m);
SalienceMethod salience_method_from_string(const std::string& s);

/// Adjacent-pair change scores for a frame sequence. scores[i] compares
/// frame i with frame i+1, so a sequence of F frames yields F-1 scores.
struct SalienceSeries {
  SalienceMethod method = SalienceMethod::OT;
  std::vector<double> scores;
  bool normalized = false;
};

struct SalienceParams {
  int bins = 64;           // hue histogram resolution
  bool circular = false;   // treat the hue axis as a ring for OT
  int analysis_size = 112; // frames larger than this are downscaled first
  int block = 8;           // block-flow tile edge
  int radius = 8;          // block-flow search window
};

/// Histogram of a hue plane: bin k covers [k*360/B, (k+1)*360/B).
HueHistogram hue_histogram(const HuePlane& plane, int bins);

/// 1-D Wasserstein-1 between two histograms on the linear bin axis with unit
/// spacing, computed from CDFs and divided by (B-1) so the value lies in [0,1].
double ot_distance(const HueHistogram& a, const HueHistogram& b);

/// Ring variant: minimum over cyclic cut positions of the linear cost, which
/// attains the true circular Wasserstein-1 (the optimal shift is a median of
/// the CDF differences). Same (B-1) normalization as the linear form.
double ot_distance_circular(const HueHistogram& a, const HueHistogram& b);

/// 64-bit DCT perceptual hash: 32x32 grayscale, 2-D DCT-II, top-left 8x8
/// block thresholded at the median of its 63 non-DC coefficients.
std::uint64_t phash(const FrameSample& frame);

/// Hamming distance of the two hashes over 64.
double phash_distance(const FrameSample& a, const FrameSample& b);

/// Mean best-match displacement magnitude over non-overlapping blocks (SAD on
/// grayscale, search window +-radius), normalized by radius*sqrt(2).
double blockflow_distance(const FrameSample& a, const FrameSample& b,
                          int block, int radius);

/// Score every adjacent pair with the chosen method. Raw scores; apply
/// normalize_series for the min-max view.
SalienceSeries score_series(const std::vector<FrameSample>& frames,
                            SalienceMethod method,
                            const SalienceParams& params = {});

/// Min-max normalization onto [0,1]; an all-equal series maps to all zeros.
SalienceSeries normalize_series(const SalienceSeries& series);

}  // namespace tvg

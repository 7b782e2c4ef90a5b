#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tvg/frame.hpp"

namespace tvg {

/// Load one image file (binary PPM P6 with maxval 255, or 8-bit PNG) as RGB.
/// index/timestamp are left at their defaults.
FrameSample load_image(const std::filesystem::path& file);

/// Binary PPM (P6) round-trip; the pixel payload is written byte-identical.
void write_ppm(const FrameSample& frame, const std::filesystem::path& file);
FrameSample read_ppm(const std::filesystem::path& file);

/// Uniformly sampled frame set from a directory of frame_%06d.png/.ppm files.
///
/// The directory must hold exactly round(duration_s * fps) images in
/// lexicographic order; frame i gets timestamp i / fps. All frames must share
/// one resolution. Files load in parallel; the result is ordered by index.
std::vector<FrameSample> load_frame_dir(const std::filesystem::path& dir,
                                        double fps, double duration_s);

/// Sidecar carried alongside a frame directory ("frames.json", one JSON line
/// with keys fps and duration).
struct FrameDirMeta {
  double fps = 0.0;
  double duration_s = 0.0;
};

/// Read dir/frames.json. Throws Error if missing or malformed.
FrameDirMeta read_frame_dir_meta(const std::filesystem::path& dir);
void write_frame_dir_meta(const std::filesystem::path& dir, const FrameDirMeta& meta);

}  // namespace tvg

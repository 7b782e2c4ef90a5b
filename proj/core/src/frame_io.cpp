#include "tvg/frame_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tvg/errors.hpp"

namespace fs = std::filesystem;

namespace tvg {

double rgb_hue(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  double r = r8, g = g8, b = b8;
  double mx = std::max({r, g, b});
  double mn = std::min({r, g, b});
  double c = mx - mn;
  if (c == 0.0) return 0.0;  // achromatic
  double h;
  if (mx == r)
    h = std::fmod((g - b) / c, 6.0);
  else if (mx == g)
    h = (b - r) / c + 2.0;
  else
    h = (r - g) / c + 4.0;
  h *= 60.0;
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  return h;
}

HuePlane to_hue_plane(const FrameSample& frame) {
  if (frame.pixels.size() != frame.pixel_count() * 3)
    throw Error("frame pixel buffer does not match dimensions");
  HuePlane plane;
  plane.width = frame.width;
  plane.height = frame.height;
  plane.hue.resize(frame.pixel_count());
  for (std::size_t i = 0; i < plane.hue.size(); ++i) {
    plane.hue[i] = rgb_hue(frame.pixels[i * 3], frame.pixels[i * 3 + 1],
                           frame.pixels[i * 3 + 2]);
  }
  return plane;
}

namespace {

FrameSample load_png(const fs::path& file) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, file.string().c_str()))
    throw Error("unreadable PNG '" + file.string() + "': " + image.message);

  image.format = PNG_FORMAT_RGB;
  FrameSample frame;
  frame.width = static_cast<int>(image.width);
  frame.height = static_cast<int>(image.height);
  frame.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, frame.pixels.data(), 0, nullptr)) {
    png_image_free(&image);
    throw Error("unreadable PNG '" + file.string() + "': " + image.message);
  }
  return frame;
}

// Skips PPM whitespace and '#' comments between header tokens.
int ppm_token(std::istream& in, const fs::path& file) {
  int c = in.get();
  while (c == '#' || std::isspace(c)) {
    if (c == '#') {
      while (c != '\n' && c != EOF) c = in.get();
    }
    c = in.get();
  }
  if (c == EOF) throw Error("truncated PPM header in '" + file.string() + "'");
  int value = 0;
  bool any = false;
  while (std::isdigit(c)) {
    value = value * 10 + (c - '0');
    any = true;
    c = in.get();
  }
  if (!any) throw Error("malformed PPM header in '" + file.string() + "'");
  return value;
}

}  // namespace

FrameSample read_ppm(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot open '" + file.string() + "'");
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '6')
    throw Error("unsupported PPM format in '" + file.string() + "' (want binary P6)");
  FrameSample frame;
  frame.width = ppm_token(in, file);
  frame.height = ppm_token(in, file);
  int maxval = ppm_token(in, file);
  if (maxval != 255)
    throw Error("unsupported PPM maxval " + std::to_string(maxval) + " in '" +
                file.string() + "'");
  if (frame.width < 1 || frame.height < 1)
    throw Error("degenerate image dimensions in '" + file.string() + "'");
  frame.pixels.resize(frame.pixel_count() * 3);
  in.read(reinterpret_cast<char*>(frame.pixels.data()),
          static_cast<std::streamsize>(frame.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(frame.pixels.size()))
    throw Error("truncated pixel payload in '" + file.string() + "'");
  return frame;
}

void write_ppm(const FrameSample& frame, const fs::path& file) {
  if (frame.pixels.size() != frame.pixel_count() * 3)
    throw Error("frame pixel buffer does not match dimensions");
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write '" + file.string() + "'");
  out << "P6\n" << frame.width << " " << frame.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.pixels.data()),
            static_cast<std::streamsize>(frame.pixels.size()));
  if (!out) throw Error("short write to '" + file.string() + "'");
}

FrameSample load_image(const fs::path& file) {
  auto ext = file.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".ppm") return read_ppm(file);
  if (ext == ".png") return load_png(file);
  throw Error("unsupported image extension '" + ext + "' for '" + file.string() + "'");
}

std::vector<FrameSample> load_frame_dir(const fs::path& dir, double fps,
                                        double duration_s) {
  if (!(fps > 0.0)) throw Error("fps must be positive");
  if (duration_s < 0.0) throw Error("duration must be nonnegative");
  if (!fs::is_directory(dir)) throw Error("missing directory '" + dir.string() + "'");

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".ppm" || ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.filename().string() < b.filename().string();
            });

  const long long expected = std::llround(duration_s * fps);
  if (static_cast<long long>(files.size()) != expected)
    throw Error("frame-count mismatch in '" + dir.string() + "': expected " +
                std::to_string(expected) + " frames at fps=" + std::to_string(fps) +
                ", duration=" + std::to_string(duration_s) + ", found " +
                std::to_string(files.size()));

  std::vector<FrameSample> frames(files.size());
  auto load_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      frames[i] = load_image(files[i]);
      frames[i].index = static_cast<int>(i);
      frames[i].timestamp_s = static_cast<double>(i) / fps;
    }
  };

  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                         files.size() > 0 ? static_cast<unsigned>(files.size()) : 1u);
  if (workers <= 1 || files.size() < 8) {
    load_range(0, files.size());
  } else {
    std::vector<std::future<void>> jobs;
    std::size_t chunk = (files.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      std::size_t lo = w * chunk;
      std::size_t hi = std::min(files.size(), lo + chunk);
      if (lo >= hi) break;
      jobs.push_back(std::async(std::launch::async, load_range, lo, hi));
    }
    for (auto& j : jobs) j.get();  // rethrows any load error
  }

  for (const auto& f : frames) {
    if (f.width != frames[0].width || f.height != frames[0].height)
      throw Error("odd-sized image in '" + dir.string() + "': frame " +
                  std::to_string(f.index) + " is " + std::to_string(f.width) + "x" +
                  std::to_string(f.height) + ", sequence is " +
                  std::to_string(frames[0].width) + "x" +
                  std::to_string(frames[0].height));
  }
  return frames;
}

FrameDirMeta read_frame_dir_meta(const fs::path& dir) {
  fs::path file = dir / "frames.json";
  std::ifstream in(file);
  if (!in) throw Error("missing sidecar '" + file.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed sidecar '" + file.string() + "': " + e.what());
  }
  if (!j.contains("fps") || !j.contains("duration"))
    throw Error("sidecar '" + file.string() + "' must carry fps and duration");
  FrameDirMeta meta;
  meta.fps = j.at("fps").get<double>();
  meta.duration_s = j.at("duration").get<double>();
  return meta;
}

void write_frame_dir_meta(const fs::path& dir, const FrameDirMeta& meta) {
  nlohmann::json j;
  j["fps"] = meta.fps;
  j["duration"] = meta.duration_s;
  std::ofstream out(dir / "frames.json", std::ios::binary);
  if (!out) throw Error("cannot write sidecar in '" + dir.string() + "'");
  out << j.dump() << "\n";
}

}  // namespace tvg

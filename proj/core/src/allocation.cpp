#include "tvg/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "tvg/errors.hpp"
#include "tvg/image_ops.hpp"
#include "tvg/strfmt.hpp"

namespace tvg {

long long AllocationPlan::total_tokens() const {
  long long sum = 0;
  for (const auto& f : per_frame) sum += f.tokens;
  return sum;
}

namespace {

void check_geom(const TokenizerGeometry& geom) {
  if (geom.patch < 1) throw Error("patch size must be at least 1");
  if (geom.merge < 1) throw Error("merge factor must be at least 1");
}

long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

}  // namespace

long long token_count(int width, int height, const TokenizerGeometry& geom) {
  check_geom(geom);
  if (width < geom.patch || height < geom.patch)
    throw Error("frame " + std::to_string(width) + "x" + std::to_string(height) +
                " is smaller than one " + std::to_string(geom.patch) + "px patch");
  long long grid = ceil_div(width, geom.patch) * ceil_div(height, geom.patch);
  return ceil_div(grid, static_cast<long long>(geom.merge) * geom.merge);
}

std::pair<int, int> scaled_dims(int width, int height, double scale,
                                const TokenizerGeometry& geom) {
  check_geom(geom);
  if (scale <= 0.0) throw Error("scale must be positive");
  auto snap = [&](int native) {
    int shrunk = static_cast<int>(std::floor(native / scale));
    int snapped = (shrunk / geom.patch) * geom.patch;
    return std::max(snapped, geom.patch);
  };
  return {snap(width), snap(height)};
}

FrameSample resize_frame(const FrameSample& frame, double scale,
                         const TokenizerGeometry& geom) {
  auto [w, h] = scaled_dims(frame.width, frame.height, scale, geom);
  return resize_bilinear(frame, w, h);
}

AllocationPlan build_plan(const SalienceSeries& series,
                          const std::vector<FrameSample>& frames,
                          long long budget, const AllocationParams& params,
                          const TokenizerGeometry& geom) {
  if (frames.empty()) throw Error("cannot plan an empty frame list");
  if (series.scores.size() + 1 != frames.size())
    throw Error("series has " + std::to_string(series.scores.size()) +
                " scores for " + std::to_string(frames.size()) + " frames");
  if (!(params.r_l > params.r_s) || !(params.r_s > 0.0))
    throw Error("scales must satisfy r_l > r_s > 0");
  if (params.t_key < 0.0 || params.t_key > 1.0)
    throw Error("t_key must lie in [0, 1]");
  if (budget < 0) throw Error("token budget must be nonnegative");

  SalienceSeries norm = series.normalized ? series : normalize_series(series);
  const std::size_t n = frames.size();

  // A frame inherits the larger of the pair scores it participates in.
  std::vector<double> frame_sal(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    if (i > 0) s = std::max(s, norm.scores[i - 1]);
    if (i < norm.scores.size()) s = std::max(s, norm.scores[i]);
    frame_sal[i] = s;
  }

  AllocationPlan plan;
  plan.budget = budget;
  plan.per_frame.resize(n);

  auto assign = [&](std::size_t i, bool key) {
    auto& f = plan.per_frame[i];
    f.frame_index = frames[i].index;
    f.is_key = key;
    f.scale = key ? params.r_s : params.r_l;
    auto [w, h] = scaled_dims(frames[i].width, frames[i].height, f.scale, geom);
    f.out_width = w;
    f.out_height = h;
    f.tokens = token_count(w, h, geom);
  };

  for (std::size_t i = 0; i < n; ++i)
    assign(i, norm.scores.empty() ? false : frame_sal[i] >= params.t_key);

  long long total = plan.total_tokens();
  if (total > budget) {
    std::vector<std::size_t> keys;
    for (std::size_t i = 0; i < n; ++i)
      if (plan.per_frame[i].is_key) keys.push_back(i);
    std::sort(keys.begin(), keys.end(), [&](std::size_t a, std::size_t b) {
      if (frame_sal[a] != frame_sal[b]) return frame_sal[a] < frame_sal[b];
      return a < b;
    });
    for (std::size_t i : keys) {
      if (total <= budget) break;
      long long before = plan.per_frame[i].tokens;
      assign(i, false);
      total += plan.per_frame[i].tokens - before;
    }
  }

  if (total > budget) {
    throw InfeasibleError(
        "budget of " + std::to_string(budget) + " tokens is below the " +
            std::to_string(total) + " needed with every frame at scale " +
            format_double(params.r_l),
        total);
  }

  if (params.promote) {
    std::vector<std::size_t> cands;
    for (std::size_t i = 0; i < n; ++i)
      if (!plan.per_frame[i].is_key) cands.push_back(i);
    std::sort(cands.begin(), cands.end(), [&](std::size_t a, std::size_t b) {
      if (frame_sal[a] != frame_sal[b]) return frame_sal[a] > frame_sal[b];
      return a < b;
    });
    for (std::size_t i : cands) {
      long long before = plan.per_frame[i].tokens;
      assign(i, true);
      long long next = total + plan.per_frame[i].tokens - before;
      if (next <= budget) {
        total = next;
      } else {
        assign(i, false);
      }
    }
  }

  return plan;
}

namespace {

constexpr const char* kPlanHeader = "frame_index,is_key,scale,out_w,out_h,tokens";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

void write_plan_csv(std::ostream& out, const AllocationPlan& plan) {
  out << kPlanHeader << "\n";
  for (const auto& f : plan.per_frame) {
    out << f.frame_index << ',' << (f.is_key ? 1 : 0) << ','
        << format_double(f.scale) << ',' << f.out_width << ',' << f.out_height
        << ',' << f.tokens << "\n";
  }
}

AllocationPlan read_plan_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("plan file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kPlanHeader)
    throw Error("plan header mismatch, expected '" + std::string(kPlanHeader) + "'");

  AllocationPlan plan;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != 6)
      throw Error("plan line " + std::to_string(lineno) + ": expected 6 fields, got " +
                  std::to_string(fields.size()));
    FrameAllocation f;
    try {
      f.frame_index = static_cast<int>(parse_int(fields[0]));
      long long key = parse_int(fields[1]);
      if (key != 0 && key != 1)
        throw Error("is_key must be 0 or 1");
      f.is_key = key == 1;
      f.scale = parse_double(fields[2]);
      f.out_width = static_cast<int>(parse_int(fields[3]));
      f.out_height = static_cast<int>(parse_int(fields[4]));
      f.tokens = parse_int(fields[5]);
    } catch (const Error& e) {
      throw Error("plan line " + std::to_string(lineno) + ": " + e.what());
    }
    if (f.tokens < 0)
      throw Error("plan line " + std::to_string(lineno) + ": negative token count");
    plan.per_frame.push_back(f);
  }
  plan.budget = plan.total_tokens();
  return plan;
}

void save_plan(const std::string& path, const AllocationPlan& plan) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_plan_csv(out, plan);
  if (!out) throw Error("failed writing '" + path + "'");
}

AllocationPlan load_plan(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_plan_csv(in);
}

}  // namespace tvg

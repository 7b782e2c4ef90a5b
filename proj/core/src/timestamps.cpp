#include "tvg/timestamps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>

#include "tvg/errors.hpp"
#include "tvg/strfmt.hpp"

namespace tvg {

namespace {

int digit_count(std::uint64_t v) {
  int n = 1;
  while (v >= 10) {
    v /= 10;
    ++n;
  }
  return n;
}

std::string pad_digits(std::uint64_t v, int width) {
  std::string s = std::to_string(v);
  if (static_cast<int>(s.size()) < width)
    s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

}  // namespace

std::vector<AlignedTimestamp> align_timestamps(const std::vector<double>& seconds,
                                               int frac_width) {
  if (seconds.empty()) throw Error("cannot align an empty timestamp list");
  if (frac_width < 0 || frac_width > 9)
    throw Error("frac_width must lie in [0, 9]");

  double unit = std::pow(10.0, frac_width);
  std::vector<std::uint64_t> units(seconds.size());
  for (std::size_t i = 0; i < seconds.size(); ++i) {
    double t = seconds[i];
    if (!std::isfinite(t)) throw Error("timestamp is not finite");
    if (t < 0.0) throw Error("timestamp " + format_double(t) + " is negative");
    // Round half up in fixed point so 0.05 -> "0.1" at one fraction digit.
    units[i] = static_cast<std::uint64_t>(std::floor(t * unit + 0.5));
  }

  std::uint64_t iunit = static_cast<std::uint64_t>(unit);
  int int_width = 1;
  for (std::uint64_t u : units)
    int_width = std::max(int_width, digit_count(u / iunit));

  std::vector<AlignedTimestamp> out(seconds.size());
  for (std::size_t i = 0; i < seconds.size(); ++i) {
    AlignedTimestamp& a = out[i];
    a.raw_s = seconds[i];
    a.int_width = int_width;
    a.frac_width = frac_width;
    a.text = pad_digits(units[i] / iunit, int_width);
    if (frac_width > 0) {
      a.text += '.';
      a.text += pad_digits(units[i] % iunit, frac_width);
    }
  }
  return out;
}

std::vector<AlignedTimestamp> align_indices(const std::vector<int>& indices) {
  if (indices.empty()) throw Error("cannot align an empty index list");
  int width = 1;
  for (int idx : indices) {
    if (idx < 0) throw Error("frame index " + std::to_string(idx) + " is negative");
    width = std::max(width, digit_count(static_cast<std::uint64_t>(idx)));
  }
  std::vector<AlignedTimestamp> out(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    out[i].raw_s = indices[i];
    out[i].int_width = width;
    out[i].frac_width = 0;
    out[i].text = pad_digits(static_cast<std::uint64_t>(indices[i]), width);
  }
  return out;
}

double parse_timestamp(const std::string& text) {
  double v = parse_double(text);
  if (v < 0.0) throw Error("timestamp '" + text + "' is negative");
  return v;
}

PromptSequence build_prompt(const AllocationPlan& plan,
                            const std::vector<AlignedTimestamp>& aligned,
                            const std::string& instruction,
                            const std::string& query) {
  if (instruction.empty()) throw Error("instruction text is required");
  if (query.empty()) throw Error("query text is required");
  if (aligned.size() != plan.per_frame.size())
    throw Error("plan covers " + std::to_string(plan.per_frame.size()) +
                " frames but " + std::to_string(aligned.size()) +
                " timestamps were aligned");

  std::vector<std::size_t> order(plan.per_frame.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return plan.per_frame[a].frame_index < plan.per_frame[b].frame_index;
  });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (plan.per_frame[order[i]].frame_index ==
        plan.per_frame[order[i - 1]].frame_index)
      throw Error("plan repeats frame index " +
                  std::to_string(plan.per_frame[order[i]].frame_index));

  PromptSequence seq;
  seq.elements.reserve(2 * plan.per_frame.size() + 2);
  seq.elements.push_back({PromptElement::Kind::INSTRUCTION, instruction, -1, 0});
  for (std::size_t i : order) {
    const auto& f = plan.per_frame[i];
    seq.elements.push_back({PromptElement::Kind::TIMESTAMP, aligned[i].text, -1, 0});
    seq.elements.push_back({PromptElement::Kind::FRAME, "", f.frame_index, f.tokens});
    seq.declared_tokens += f.tokens;
  }
  seq.elements.push_back({PromptElement::Kind::QUERY, query, -1, 0});
  return seq;
}

std::string render_prompt_text(const PromptSequence& seq) {
  std::ostringstream out;
  for (std::size_t i = 0; i < seq.elements.size(); ++i) {
    const auto& e = seq.elements[i];
    switch (e.kind) {
      case PromptElement::Kind::INSTRUCTION:
      case PromptElement::Kind::QUERY:
        out << e.text << "\n";
        break;
      case PromptElement::Kind::TIMESTAMP:
        out << e.text << ' ';
        break;
      case PromptElement::Kind::FRAME:
        out << "<frame:" << e.frame_index << ':' << e.tokens << ">\n";
        break;
    }
  }
  return out.str();
}

}  // namespace tvg

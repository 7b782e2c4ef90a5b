#include "tvg/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "tvg/errors.hpp"
#include "tvg/strfmt.hpp"

namespace tvg {

namespace {

using nlohmann::json;

constexpr const char* kAugmentedOrigin = "AUGMENTED_IRRELEVANT";

std::string where(const std::string& source, int lineno) {
  return source + " line " + std::to_string(lineno);
}

std::vector<Interval> parse_windows(const json& arr, double duration_s,
                                    const std::string& context) {
  if (!arr.is_array()) throw Error(context + ": windows must be an array");
  std::vector<Interval> out;
  out.reserve(arr.size());
  for (const auto& w : arr) {
    if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number())
      throw Error(context + ": each window must be a [start, end] number pair");
    Interval iv{w[0].get<double>(), w[1].get<double>()};
    if (!(iv.start_s < iv.end_s))
      throw Error(context + ": window [" + format_double(iv.start_s) + ", " +
                  format_double(iv.end_s) + "] must satisfy start < end");
    if (iv.start_s < 0.0 || iv.end_s > duration_s)
      throw Error(context + ": window [" + format_double(iv.start_s) + ", " +
                  format_double(iv.end_s) + "] falls outside [0, " +
                  format_double(duration_s) + "]");
    out.push_back(iv);
  }
  return out;
}

json windows_to_json(const std::vector<Interval>& windows) {
  json arr = json::array();
  for (const Interval& w : windows) arr.push_back(json::array({w.start_s, w.end_s}));
  return arr;
}

}  // namespace

std::vector<QueryRecord> read_manifest(std::istream& in, const std::string& source) {
  std::vector<QueryRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(where(source, lineno) + ": invalid JSON: " + e.what());
    }
    if (!obj.is_object()) throw Error(where(source, lineno) + ": expected an object");

    QueryRecord rec;
    try {
      rec.qid = obj.at("qid").get<std::string>();
      rec.query = obj.at("query").get<std::string>();
      rec.video_ref = obj.at("video_ref").get<std::string>();
      rec.duration_s = obj.at("duration").get<double>();
    } catch (const json::exception& e) {
      throw Error(where(source, lineno) + ": " + e.what());
    }
    std::string context = where(source, lineno) + " (qid '" + rec.qid + "')";
    if (rec.qid.empty()) throw Error(where(source, lineno) + ": qid must be nonempty");
    if (rec.video_ref.empty()) throw Error(context + ": video_ref must be nonempty");
    if (!(rec.duration_s > 0.0)) throw Error(context + ": duration must be positive");
    if (!obj.contains("relevant_windows"))
      throw Error(context + ": missing relevant_windows");
    rec.windows = parse_windows(obj["relevant_windows"], rec.duration_s, context);

    if (obj.contains("origin")) {
      std::string origin = obj["origin"].get<std::string>();
      if (origin == kAugmentedOrigin) {
        if (!rec.windows.empty())
          throw Error(context + ": augmented records cannot carry windows");
        rec.origin = RecordOrigin::AUGMENTED_IRRELEVANT;
      } else if (origin != "NATIVE") {
        throw Error(context + ": unknown origin '" + origin + "'");
      }
    }

    if (!seen.insert(rec.qid).second)
      throw Error(context + ": duplicate qid");
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<QueryRecord> load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open manifest '" + path + "'");
  return read_manifest(in, path);
}

void write_manifest(std::ostream& out, const std::vector<QueryRecord>& records) {
  for (const QueryRecord& rec : records) {
    json obj;
    obj["qid"] = rec.qid;
    obj["query"] = rec.query;
    obj["video_ref"] = rec.video_ref;
    obj["duration"] = rec.duration_s;
    obj["relevant_windows"] = windows_to_json(rec.windows);
    if (rec.origin == RecordOrigin::AUGMENTED_IRRELEVANT)
      obj["origin"] = kAugmentedOrigin;
    out << obj.dump() << "\n";
  }
}

void save_manifest(const std::string& path, const std::vector<QueryRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_manifest(out, records);
  if (!out) throw Error("failed writing '" + path + "'");
}

CorrectionOverlay read_overlay(std::istream& in, const std::string& source) {
  CorrectionOverlay overlay;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(where(source, lineno) + ": invalid JSON: " + e.what());
    }
    CorrectionEntry entry;
    try {
      entry.qid = obj.at("qid").get<std::string>();
    } catch (const json::exception& e) {
      throw Error(where(source, lineno) + ": " + e.what());
    }
    if (!obj.contains("corrected_windows"))
      throw Error(where(source, lineno) + ": missing corrected_windows");
    // Range checks against duration happen in apply_overlay where the base
    // record is known.
    const auto& arr = obj["corrected_windows"];
    if (!arr.is_array())
      throw Error(where(source, lineno) + ": corrected_windows must be an array");
    for (const auto& w : arr) {
      if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number())
        throw Error(where(source, lineno) +
                    ": each window must be a [start, end] number pair");
      entry.corrected_windows.push_back({w[0].get<double>(), w[1].get<double>()});
    }
    overlay.entries.push_back(std::move(entry));
  }
  return overlay;
}

CorrectionOverlay load_overlay(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open overlay '" + path + "'");
  return read_overlay(in, path);
}

void write_overlay(std::ostream& out, const CorrectionOverlay& overlay) {
  for (const CorrectionEntry& entry : overlay.entries) {
    json obj;
    obj["qid"] = entry.qid;
    obj["corrected_windows"] = windows_to_json(entry.corrected_windows);
    out << obj.dump() << "\n";
  }
}

void save_overlay(const std::string& path, const CorrectionOverlay& overlay) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_overlay(out, overlay);
  if (!out) throw Error("failed writing '" + path + "'");
}

std::vector<QueryRecord> augment_irrelevant(const std::vector<QueryRecord>& records,
                                            double ratio, std::uint64_t seed) {
  if (!(ratio >= 0.0) || ratio >= 1.0)
    throw Error("augmentation ratio must lie in [0, 1)");
  std::vector<QueryRecord> out = records;
  if (ratio == 0.0 || records.empty()) return out;

  long long k = std::llround(ratio / (1.0 - ratio) * static_cast<double>(records.size()));
  if (k == 0) return out;

  std::unordered_set<std::string> refs;
  for (const QueryRecord& rec : records) refs.insert(rec.video_ref);
  if (refs.size() < 2)
    throw Error("augmentation needs at least 2 distinct videos, got " +
                std::to_string(refs.size()));

  std::mt19937_64 rng(seed);
  out.reserve(records.size() + static_cast<std::size_t>(k));
  for (long long j = 0; j < k; ++j) {
    const QueryRecord& donor =
        records[uniform_below(rng, records.size())];
    const QueryRecord* target = nullptr;
    do {
      target = &records[uniform_below(rng, records.size())];
    } while (target->video_ref == donor.video_ref);

    QueryRecord aug;
    aug.qid = "aug_" + std::to_string(j) + "_" + donor.qid;
    aug.query = donor.query;
    aug.video_ref = target->video_ref;
    aug.duration_s = target->duration_s;
    aug.origin = RecordOrigin::AUGMENTED_IRRELEVANT;
    out.push_back(std::move(aug));
  }
  return out;
}

std::vector<QueryRecord> apply_overlay(const std::vector<QueryRecord>& records,
                                       const CorrectionOverlay& overlay) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < records.size(); ++i) index[records[i].qid] = i;

  std::vector<QueryRecord> out = records;
  for (const CorrectionEntry& entry : overlay.entries) {
    auto it = index.find(entry.qid);
    if (it == index.end())
      throw Error("overlay references unknown qid '" + entry.qid + "'");
    QueryRecord& rec = out[it->second];
    for (const Interval& w : entry.corrected_windows) {
      if (!(w.start_s < w.end_s))
        throw Error("overlay qid '" + entry.qid + "': window [" +
                    format_double(w.start_s) + ", " + format_double(w.end_s) +
                    "] must satisfy start < end");
      if (w.start_s < 0.0 || w.end_s > rec.duration_s)
        throw Error("overlay qid '" + entry.qid + "': window [" +
                    format_double(w.start_s) + ", " + format_double(w.end_s) +
                    "] falls outside [0, " + format_double(rec.duration_s) + "]");
    }
    rec.windows = entry.corrected_windows;
  }
  return out;
}

SplitReport split_report(const std::vector<QueryRecord>& records) {
  SplitReport report;
  for (const QueryRecord& rec : records) {
    (rec.relevant() ? report.relevant : report.irrelevant) += 1;
    (rec.origin == RecordOrigin::NATIVE ? report.native : report.augmented) += 1;
  }
  return report;
}

}  // namespace tvg

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tvg/interval.hpp"

namespace tvg {

enum class RecordOrigin { NATIVE, AUGMENTED_IRRELEVANT };

// One query/video pair. Relevance is derived: a record with windows is
// relevant, one without is irrelevant.
struct QueryRecord {
  std::string qid;
  std::string query;
  std::string video_ref;
  double duration_s = 0.0;
  std::vector<Interval> windows;
  RecordOrigin origin = RecordOrigin::NATIVE;

  bool relevant() const { return !windows.empty(); }
};

struct CorrectionEntry {
  std::string qid;
  std::vector<Interval> corrected_windows;
};

struct CorrectionOverlay {
  std::vector<CorrectionEntry> entries;
};

struct SplitReport {
  long long relevant = 0;
  long long irrelevant = 0;
  long long native = 0;
  long long augmented = 0;
};

// Line-delimited JSON records with keys qid, query, video_ref, duration,
// relevant_windows (and origin for augmented rows). Validation failures name
// the offending line and qid.
std::vector<QueryRecord> read_manifest(std::istream& in, const std::string& source);
std::vector<QueryRecord> load_manifest(const std::string& path);
void write_manifest(std::ostream& out, const std::vector<QueryRecord>& records);
void save_manifest(const std::string& path, const std::vector<QueryRecord>& records);

CorrectionOverlay read_overlay(std::istream& in, const std::string& source);
CorrectionOverlay load_overlay(const std::string& path);
void write_overlay(std::ostream& out, const CorrectionOverlay& overlay);
void save_overlay(const std::string& path, const CorrectionOverlay& overlay);

// Appends round(ratio/(1-ratio) * N) irrelevant records, each pairing a
// donor query with a video drawn from a different source video, so the
// irrelevant share of the result approximates `ratio`. Seeded and
// reproducible.
std::vector<QueryRecord> augment_irrelevant(const std::vector<QueryRecord>& records,
                                            double ratio, std::uint64_t seed);

// Replaces windows for the listed qids, leaving order and every other record
// untouched. Unknown qids are an error.
std::vector<QueryRecord> apply_overlay(const std::vector<QueryRecord>& records,
                                       const CorrectionOverlay& overlay);

SplitReport split_report(const std::vector<QueryRecord>& records);

}  // namespace tvg

#include "tvg/metrics.hpp"

#include <algorithm>
#include <ostream>

#include "tvg/errors.hpp"
#include "tvg/strfmt.hpp"

namespace tvg {

namespace {

void check_aligned(const std::vector<MomentPrediction>& preds,
                   const std::vector<GroundTruthEntry>& gts) {
  if (preds.size() != gts.size())
    throw Error("prediction and ground-truth sets differ in size: " +
                std::to_string(preds.size()) + " vs " + std::to_string(gts.size()));
}

// Average precision of one ranked prediction list at one IoU threshold.
double average_precision(const MomentPrediction& pred,
                         const GroundTruthEntry& gt, double tau) {
  if (gt.windows.empty()) return 0.0;
  std::vector<bool> matched(gt.windows.size(), false);
  int tp = 0;
  double ap = 0.0;
  for (std::size_t k = 0; k < pred.intervals.size(); ++k) {
    int best = -1;
    double best_iou = 0.0;
    for (std::size_t j = 0; j < gt.windows.size(); ++j) {
      if (matched[j]) continue;
      double v = iou(pred.intervals[k], gt.windows[j]);
      if (v < tau) continue;
      if (best < 0 || v > best_iou ||
          (v == best_iou &&
           gt.windows[j].start_s < gt.windows[static_cast<std::size_t>(best)].start_s)) {
        best = static_cast<int>(j);
        best_iou = v;
      }
    }
    if (best >= 0) {
      matched[static_cast<std::size_t>(best)] = true;
      ++tp;
      ap += static_cast<double>(tp) / static_cast<double>(k + 1);
    }
  }
  return ap / static_cast<double>(gt.windows.size());
}

}  // namespace

double recall_at(const std::vector<MomentPrediction>& preds,
                 const std::vector<GroundTruthEntry>& gts, double tau) {
  check_aligned(preds, gts);
  long long relevant = 0, hits = 0;
  for (std::size_t q = 0; q < gts.size(); ++q) {
    if (!gts[q].relevant) continue;
    ++relevant;
    if (preds[q].refused || preds[q].intervals.empty()) continue;
    const Interval& top = preds[q].intervals.front();
    for (const Interval& w : gts[q].windows) {
      if (iou(top, w) >= tau) {
        ++hits;
        break;
      }
    }
  }
  if (relevant == 0) return 0.0;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(relevant);
}

double mean_ap(const std::vector<MomentPrediction>& preds,
               const std::vector<GroundTruthEntry>& gts) {
  check_aligned(preds, gts);
  long long relevant = 0;
  for (const auto& gt : gts)
    if (gt.relevant) ++relevant;
  if (relevant == 0) return 0.0;

  double threshold_sum = 0.0;
  int thresholds = 0;
  for (int t = 50; t <= 95; t += 5) {
    double tau = t / 100.0;
    double query_sum = 0.0;
    for (std::size_t q = 0; q < gts.size(); ++q) {
      if (!gts[q].relevant) continue;
      query_sum += average_precision(preds[q], gts[q], tau);
    }
    threshold_sum += query_sum / static_cast<double>(relevant);
    ++thresholds;
  }
  return 100.0 * threshold_sum / thresholds;
}

double refusal_recall(const std::vector<MomentPrediction>& preds,
                      const std::vector<GroundTruthEntry>& gts) {
  check_aligned(preds, gts);
  long long irrelevant = 0, refused = 0;
  for (std::size_t q = 0; q < gts.size(); ++q) {
    if (gts[q].relevant) continue;
    ++irrelevant;
    if (preds[q].refused) ++refused;
  }
  if (irrelevant == 0) throw Error("refusal recall needs at least one irrelevant query");
  return 100.0 * static_cast<double>(refused) / static_cast<double>(irrelevant);
}

EvalReport evaluate(const std::vector<MomentPrediction>& preds,
                    const std::vector<GroundTruthEntry>& gts) {
  check_aligned(preds, gts);
  EvalReport report;
  for (const auto& gt : gts)
    (gt.relevant ? report.n_relevant : report.n_irrelevant) += 1;
  report.r_at_50 = recall_at(preds, gts, 0.5);
  report.r_at_70 = recall_at(preds, gts, 0.7);
  report.map = mean_ap(preds, gts);
  if (report.n_irrelevant > 0) report.refusal_recall = refusal_recall(preds, gts);
  return report;
}

void write_report_kv(std::ostream& out, const EvalReport& report) {
  out << "r_at_50=" << format_double(report.r_at_50) << "\n";
  out << "r_at_70=" << format_double(report.r_at_70) << "\n";
  out << "map=" << format_double(report.map) << "\n";
  if (report.refusal_recall)
    out << "refusal_recall=" << format_double(*report.refusal_recall) << "\n";
  out << "n_relevant=" << report.n_relevant << "\n";
  out << "n_irrelevant=" << report.n_irrelevant << "\n";
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
  out << "r_at_50,r_at_70,map,refusal_recall,n_relevant,n_irrelevant\n";
  out << format_double(report.r_at_50) << ',' << format_double(report.r_at_70)
      << ',' << format_double(report.map) << ',';
  if (report.refusal_recall) out << format_double(*report.refusal_recall);
  out << ',' << report.n_relevant << ',' << report.n_irrelevant << "\n";
}

}  // namespace tvg

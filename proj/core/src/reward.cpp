#include "tvg/reward.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "tvg/errors.hpp"
#include "tvg/strfmt.hpp"

namespace tvg {

double iou(const Interval& a, const Interval& b) {
  double inter = std::min(a.end_s, b.end_s) - std::max(a.start_s, b.start_s);
  if (inter < 0.0) inter = 0.0;
  double uni = (a.end_s - a.start_s) + (b.end_s - b.start_s) - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

namespace {

// Unsigned decimal at `pos`; advances past it on success.
bool scan_number(const std::string& s, std::size_t& pos, double& out) {
  std::size_t i = pos;
  std::size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    ++i;
    ++digits;
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      ++i;
      ++digits;
    }
  }
  if (digits == 0) return false;
  out = parse_double(s.substr(pos, i - pos));
  pos = i;
  return true;
}

void skip_spaces(const std::string& s, std::size_t& pos) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
}

bool contains_ci(const std::string& haystack, const std::string& lower_needle) {
  if (lower_needle.empty()) return true;
  for (std::size_t i = 0; i + lower_needle.size() <= haystack.size(); ++i) {
    std::size_t j = 0;
    while (j < lower_needle.size() &&
           std::tolower(static_cast<unsigned char>(haystack[i + j])) ==
               static_cast<unsigned char>(lower_needle[j]))
      ++j;
    if (j == lower_needle.size()) return true;
  }
  return false;
}

}  // namespace

MomentPrediction parse_response(const std::string& raw) {
  MomentPrediction pred;
  pred.raw_text = raw;

  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '[') continue;
    std::size_t pos = i + 1;
    double a = 0.0, b = 0.0;
    skip_spaces(raw, pos);
    if (!scan_number(raw, pos, a)) continue;
    skip_spaces(raw, pos);
    if (pos >= raw.size() || raw[pos] != ',') continue;
    ++pos;
    skip_spaces(raw, pos);
    if (!scan_number(raw, pos, b)) continue;
    skip_spaces(raw, pos);
    if (pos >= raw.size() || raw[pos] != ']') continue;
    if (a <= b) pred.intervals.push_back({a, b});
    i = pos;  // resume after the closing bracket
  }

  std::sort(pred.intervals.begin(), pred.intervals.end(),
            [](const Interval& x, const Interval& y) {
              if (x.start_s != y.start_s) return x.start_s < y.start_s;
              return x.end_s < y.end_s;
            });

  if (pred.intervals.empty() &&
      (raw.find("[]") != std::string::npos || contains_ci(raw, "no relevant")))
    pred.refused = true;
  return pred;
}

double format_reward(const MomentPrediction& pred) {
  return (!pred.intervals.empty() || pred.refused) ? 1.0 : 0.0;
}

PrecisionReward precision_reward(const MomentPrediction& pred,
                                 const GroundTruthEntry& gt, double gamma) {
  if (!std::isfinite(gamma) || gamma < 0.0)
    throw Error("gamma must be nonnegative and finite");

  PrecisionReward r;
  if (!gt.relevant) {
    r.r_pir = pred.refused ? gamma : 0.0;
    return r;
  }
  if (pred.refused || pred.intervals.empty() || gt.windows.empty()) return r;

  struct Candidate {
    double overlap;
    std::size_t pred_i;
    std::size_t gt_j;
  };
  std::vector<Candidate> cands;
  cands.reserve(pred.intervals.size() * gt.windows.size());
  for (std::size_t i = 0; i < pred.intervals.size(); ++i)
    for (std::size_t j = 0; j < gt.windows.size(); ++j)
      cands.push_back({iou(pred.intervals[i], gt.windows[j]), i, j});
  std::sort(cands.begin(), cands.end(), [&](const Candidate& x, const Candidate& y) {
    if (x.overlap != y.overlap) return x.overlap > y.overlap;
    if (gt.windows[x.gt_j].start_s != gt.windows[y.gt_j].start_s)
      return gt.windows[x.gt_j].start_s < gt.windows[y.gt_j].start_s;
    return x.pred_i < y.pred_i;
  });

  std::vector<bool> pred_used(pred.intervals.size(), false);
  std::vector<bool> gt_used(gt.windows.size(), false);
  double matched = 0.0;
  for (const auto& c : cands) {
    if (pred_used[c.pred_i] || gt_used[c.gt_j]) continue;
    pred_used[c.pred_i] = true;
    gt_used[c.gt_j] = true;
    matched += c.overlap;
  }
  r.r_tvg = matched / static_cast<double>(
                          std::max(pred.intervals.size(), gt.windows.size()));
  return r;
}

RewardBreakdown total_reward(const MomentPrediction& pred,
                             const GroundTruthEntry& gt,
                             const RewardWeights& weights) {
  if (!(weights.alpha >= 0.0) || !(weights.beta >= 0.0))
    throw Error("alpha and beta must be nonnegative");

  RewardBreakdown out;
  out.weights = weights;
  out.r_format = format_reward(pred);
  auto p = precision_reward(pred, gt, weights.gamma);
  out.r_tvg = p.r_tvg;
  out.r_pir = p.r_pir;
  out.r_total = weights.alpha * out.r_format + weights.beta * (out.r_tvg + out.r_pir);
  return out;
}

GroupAdvantages group_advantages(const std::vector<double>& rewards) {
  if (rewards.size() < 2)
    throw Error("advantage normalization needs a group of at least 2");

  GroupAdvantages out;
  out.rewards = rewards;
  out.advantages.assign(rewards.size(), 0.0);

  bool all_equal = true;
  for (double r : rewards) all_equal = all_equal && r == rewards.front();
  if (all_equal) return out;

  double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) /
                static_cast<double>(rewards.size());
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= static_cast<double>(rewards.size());
  // distinct rewards can still collapse by underflow
  if (var == 0.0) return out;

  double sd = std::sqrt(var);
  for (std::size_t i = 0; i < rewards.size(); ++i)
    out.advantages[i] = (rewards[i] - mean) / sd;
  return out;
}

}  // namespace tvg

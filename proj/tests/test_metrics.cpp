#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include <tvg/errors.hpp>
#include <tvg/metrics.hpp>

#include "support/oracles.hpp"
#include "support/synth.hpp"

namespace {

tvg::MomentPrediction pred_of(const std::vector<tvg::Interval>& ivs) {
  tvg::MomentPrediction p;
  p.intervals = ivs;
  return p;
}

tvg::MomentPrediction refusal() {
  tvg::MomentPrediction p;
  p.refused = true;
  return p;
}

tvg::GroundTruthEntry gt_of(const std::vector<tvg::Interval>& windows) {
  tvg::GroundTruthEntry gt;
  gt.windows = windows;
  gt.relevant = !windows.empty();
  return gt;
}

// random fixture batch over the unambiguous family, with refusals sprinkled in
struct Batch {
  std::vector<tvg::MomentPrediction> preds;
  std::vector<tvg::GroundTruthEntry> gts;
};

Batch random_batch(std::mt19937_64& rng, int queries) {
  Batch b;
  for (int q = 0; q < queries; ++q) {
    const auto fx = synth::unambiguous_fixture(rng, 3, 3);
    if (tvg::uniform_below(rng, 8) == 0) {
      b.preds.push_back(refusal());
    } else {
      b.preds.push_back(pred_of(fx.preds));
    }
    b.gts.push_back(gt_of(fx.gts));
  }
  return b;
}

}  // namespace

TEST_CASE("recall_at counts first-interval hits") {
  // top-1 IoUs 0.6, 0.8, 0.4 against a 0.5 bar
  std::vector<tvg::MomentPrediction> preds = {
      pred_of({{0, 6}}), pred_of({{0, 8}}), pred_of({{0, 4}})};
  std::vector<tvg::GroundTruthEntry> gts = {
      gt_of({{0, 10}}), gt_of({{0, 10}}), gt_of({{0, 10}})};
  CHECK(tvg::recall_at(preds, gts, 0.5) == doctest::Approx(200.0 / 3.0).epsilon(1e-12));
  CHECK(tvg::recall_at(preds, gts, 0.7) == doctest::Approx(100.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("identity predictions recall everything at any threshold") {
  std::vector<tvg::MomentPrediction> preds;
  std::vector<tvg::GroundTruthEntry> gts;
  for (int q = 0; q < 7; ++q) {
    const double s = 3.0 * q;
    preds.push_back(pred_of({{s, s + 5}}));
    gts.push_back(gt_of({{s, s + 5}}));
  }
  for (double tau : {0.5, 0.7, 0.9, 1.0}) {
    CHECK(tvg::recall_at(preds, gts, tau) == 100.0);
  }
  CHECK(tvg::mean_ap(preds, gts) == 100.0);
}

TEST_CASE("refusing every relevant query recalls nothing") {
  std::vector<tvg::MomentPrediction> preds = {refusal(), refusal()};
  std::vector<tvg::GroundTruthEntry> gts = {gt_of({{0, 5}}), gt_of({{2, 9}})};
  CHECK(tvg::recall_at(preds, gts, 0.5) == 0.0);
  CHECK(tvg::mean_ap(preds, gts) == 0.0);
}

TEST_CASE("metrics are zero with no relevant queries, refusal_recall demands irrelevant ones") {
  std::vector<tvg::MomentPrediction> preds = {refusal()};
  std::vector<tvg::GroundTruthEntry> gts = {gt_of({})};
  CHECK(tvg::recall_at(preds, gts, 0.5) == 0.0);
  CHECK(tvg::mean_ap(preds, gts) == 0.0);
  CHECK(tvg::refusal_recall(preds, gts) == 100.0);

  std::vector<tvg::GroundTruthEntry> all_relevant = {gt_of({{0, 5}})};
  CHECK_THROWS_AS(tvg::refusal_recall({pred_of({{0, 5}})}, all_relevant), tvg::Error);
}

TEST_CASE("query count mismatches are rejected") {
  std::vector<tvg::MomentPrediction> preds = {refusal()};
  std::vector<tvg::GroundTruthEntry> gts;
  CHECK_THROWS_AS(tvg::recall_at(preds, gts, 0.5), tvg::Error);
  CHECK_THROWS_AS(tvg::mean_ap(preds, gts), tvg::Error);
  CHECK_THROWS_AS(tvg::evaluate(preds, gts), tvg::Error);
}

TEST_CASE("recall and mean_ap match the enumeration oracles") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 100; ++trial) {
    const auto b = random_batch(rng, 1 + static_cast<int>(tvg::uniform_below(rng, 5)));
    CHECK(tvg::recall_at(b.preds, b.gts, 0.5) ==
          doctest::Approx(oracle::recall_percent(b.preds, b.gts, 0.5)).epsilon(1e-9));
    CHECK(tvg::recall_at(b.preds, b.gts, 0.7) ==
          doctest::Approx(oracle::recall_percent(b.preds, b.gts, 0.7)).epsilon(1e-9));
    CHECK(tvg::mean_ap(b.preds, b.gts) ==
          doctest::Approx(oracle::mean_ap_percent(b.preds, b.gts)).epsilon(1e-9));
  }
}

TEST_CASE("a known two-query ranked fixture hits the oracle value") {
  // q0: rank order matters; q1: one window never reached
  std::vector<tvg::MomentPrediction> preds = {
      pred_of({{0, 10}, {42, 44}, {80, 83}}),
      pred_of({{0, 7}})};
  std::vector<tvg::GroundTruthEntry> gts = {
      gt_of({{0, 10}, {40, 45}, {78, 86}}),
      gt_of({{0, 10}, {50, 60}})};
  CHECK(tvg::mean_ap(preds, gts) ==
        doctest::Approx(oracle::mean_ap_percent(preds, gts)).epsilon(1e-9));
}

TEST_CASE("recall never rises with the threshold") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 60; ++trial) {
    const auto b = random_batch(rng, 4);
    CHECK(tvg::recall_at(b.preds, b.gts, 0.7) <= tvg::recall_at(b.preds, b.gts, 0.5));
  }
}

TEST_CASE("shuffling query order changes nothing") {
  std::mt19937_64 rng(83);
  const auto b = random_batch(rng, 9);
  std::vector<std::size_t> order(b.preds.size());
  std::iota(order.begin(), order.end(), 0u);
  std::shuffle(order.begin(), order.end(), rng);
  Batch shuffled;
  for (auto i : order) {
    shuffled.preds.push_back(b.preds[i]);
    shuffled.gts.push_back(b.gts[i]);
  }
  CHECK(tvg::recall_at(b.preds, b.gts, 0.5) ==
        tvg::recall_at(shuffled.preds, shuffled.gts, 0.5));
  CHECK(tvg::mean_ap(b.preds, b.gts) ==
        doctest::Approx(tvg::mean_ap(shuffled.preds, shuffled.gts)).epsilon(1e-12));
}

TEST_CASE("refusal recall mirrors a hand count") {
  std::vector<tvg::MomentPrediction> preds;
  std::vector<tvg::GroundTruthEntry> gts;
  for (int i = 0; i < 500; ++i) {
    preds.push_back(i < 433 ? refusal() : pred_of({{0, 5}}));
    gts.push_back(gt_of({}));
  }
  CHECK(tvg::refusal_recall(preds, gts) == doctest::Approx(86.6).epsilon(1e-12));
}

TEST_CASE("evaluate assembles the full report") {
  std::vector<tvg::MomentPrediction> preds = {
      pred_of({{0, 10}}), pred_of({{0, 3}}), refusal()};
  std::vector<tvg::GroundTruthEntry> gts = {
      gt_of({{0, 10}}), gt_of({{0, 6}}), gt_of({})};
  const auto report = tvg::evaluate(preds, gts);
  CHECK(report.n_relevant == 2);
  CHECK(report.n_irrelevant == 1);
  CHECK(report.r_at_50 == doctest::Approx(100.0));
  CHECK(report.r_at_70 == doctest::Approx(50.0));
  REQUIRE(report.refusal_recall.has_value());
  CHECK(*report.refusal_recall == doctest::Approx(100.0));

  // all-relevant input leaves the refusal field empty
  std::vector<tvg::MomentPrediction> p2 = {pred_of({{0, 10}})};
  std::vector<tvg::GroundTruthEntry> g2 = {gt_of({{0, 10}})};
  CHECK_FALSE(tvg::evaluate(p2, g2).refusal_recall.has_value());
}

TEST_CASE("report serialization is stable") {
  tvg::EvalReport report;
  report.r_at_50 = 100.0;
  report.r_at_70 = 50.0;
  report.map = 55.0;
  report.refusal_recall = 100.0;
  report.n_relevant = 2;
  report.n_irrelevant = 1;
  std::ostringstream kv;
  tvg::write_report_kv(kv, report);
  CHECK(kv.str() ==
        "r_at_50=100\nr_at_70=50\nmap=55\nrefusal_recall=100\n"
        "n_relevant=2\nn_irrelevant=1\n");

  std::ostringstream csv;
  tvg::write_report_csv(csv, report);
  CHECK(csv.str() ==
        "r_at_50,r_at_70,map,refusal_recall,n_relevant,n_irrelevant\n"
        "100,50,55,100,2,1\n");

  report.refusal_recall.reset();
  std::ostringstream kv2;
  tvg::write_report_kv(kv2, report);
  CHECK(kv2.str().find("refusal_recall") == std::string::npos);
  std::ostringstream csv2;
  tvg::write_report_csv(csv2, report);
  CHECK(csv2.str() ==
        "r_at_50,r_at_70,map,refusal_recall,n_relevant,n_irrelevant\n"
        "100,50,55,,2,1\n");
}

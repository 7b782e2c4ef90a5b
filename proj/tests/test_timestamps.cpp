#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <tvg/errors.hpp>
#include <tvg/strfmt.hpp>
#include <tvg/timestamps.hpp>

namespace {

std::vector<std::string> texts_of(const std::vector<tvg::AlignedTimestamp>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(t.text);
  return out;
}

tvg::AllocationPlan plan_of(const std::vector<std::pair<int, long long>>& entries) {
  tvg::AllocationPlan plan;
  for (const auto& [index, tokens] : entries) {
    tvg::FrameAllocation fa;
    fa.frame_index = index;
    fa.tokens = tokens;
    fa.out_width = 112;
    fa.out_height = 112;
    plan.per_frame.push_back(fa);
  }
  return plan;
}

}  // namespace

TEST_CASE("alignment pads every timestamp to one shared width") {
  CHECK(texts_of(tvg::align_timestamps({0.0, 7.5, 150.0})) ==
        std::vector<std::string>{"000.0", "007.5", "150.0"});
  CHECK(texts_of(tvg::align_timestamps({3.0})) == std::vector<std::string>{"3.0"});
}

TEST_CASE("width accounts for carry out of rounding") {
  // 9.96 rounds to 10.0, so the integer field needs two digits everywhere
  CHECK(texts_of(tvg::align_timestamps({9.96, 0.5})) ==
        std::vector<std::string>{"10.0", "00.5"});
  CHECK(texts_of(tvg::align_timestamps({9.94})) == std::vector<std::string>{"9.9"});
}

TEST_CASE("rounding is half-up in fixed point") {
  CHECK(texts_of(tvg::align_timestamps({7.25}, 1)) == std::vector<std::string>{"7.3"});
  CHECK(texts_of(tvg::align_timestamps({7.24}, 1)) == std::vector<std::string>{"7.2"});
  CHECK(texts_of(tvg::align_timestamps({7.5}, 0)) == std::vector<std::string>{"8"});
}

TEST_CASE("frac_width zero drops the point") {
  const auto ts = tvg::align_timestamps({3.2, 12.0}, 0);
  CHECK(texts_of(ts) == std::vector<std::string>{"03", "12"});
}

TEST_CASE("150 uniform timestamps share width five and sort lexicographically") {
  std::vector<double> seconds;
  for (int i = 0; i < 150; ++i) seconds.push_back(static_cast<double>(i));
  const auto ts = tvg::align_timestamps(seconds);
  REQUIRE(ts.size() == 150);
  for (const auto& t : ts) CHECK(t.text.size() == 5);
  for (std::size_t i = 1; i < ts.size(); ++i) CHECK(ts[i - 1].text < ts[i].text);
}

TEST_CASE("alignment validates its inputs") {
  CHECK_THROWS_AS(tvg::align_timestamps({}), tvg::Error);
  CHECK_THROWS_AS(tvg::align_timestamps({1.0}, -1), tvg::Error);
  CHECK_THROWS_AS(tvg::align_timestamps({1.0}, 10), tvg::Error);
  CHECK_THROWS_AS(tvg::align_timestamps({-0.5}), tvg::Error);
}

TEST_CASE("random sets share width, order, and round-trip inside a half unit") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(tvg::uniform_below(rng, 40));
    std::vector<double> seconds;
    for (int i = 0; i < n; ++i) seconds.push_back(tvg::uniform_unit(rng) * 9000.0);
    const auto ts = tvg::align_timestamps(seconds, 1);

    std::set<std::size_t> widths;
    for (const auto& t : ts) widths.insert(t.text.size());
    CHECK(widths.size() == 1);

    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(tvg::parse_timestamp(ts[i].text) - seconds[i]) <= 0.05 + 1e-9);
      for (int j = 0; j < n; ++j) {
        // equal-width zero-padded decimals sort like their values
        if (ts[i].text < ts[j].text) CHECK(seconds[i] < seconds[j]);
      }
    }
  }
}

TEST_CASE("index codec emits zero-padded frame numbers") {
  const auto ts = tvg::align_indices({0, 5, 10});
  CHECK(texts_of(ts) == std::vector<std::string>{"00", "05", "10"});
  CHECK(ts[0].frac_width == 0);
}

TEST_CASE("parse_timestamp reads the aligned forms back") {
  CHECK(tvg::parse_timestamp("007.5") == 7.5);
  CHECK(tvg::parse_timestamp("150.0") == 150.0);
  CHECK_THROWS_AS(tvg::parse_timestamp("abc"), tvg::Error);
  CHECK_THROWS_AS(tvg::parse_timestamp("-4.0"), tvg::Error);
}

TEST_CASE("prompts interleave instruction, stamped frames, and the query") {
  const auto plan = plan_of({{0, 4}, {1, 2}});
  const auto aligned = tvg::align_timestamps({0.0, 1.0});
  const auto seq = tvg::build_prompt(plan, aligned, "Watch carefully.", "When is it?");
  using K = tvg::PromptElement::Kind;
  REQUIRE(seq.elements.size() == 6);
  CHECK(seq.elements[0].kind == K::INSTRUCTION);
  CHECK(seq.elements[1].kind == K::TIMESTAMP);
  CHECK(seq.elements[2].kind == K::FRAME);
  CHECK(seq.elements[3].kind == K::TIMESTAMP);
  CHECK(seq.elements[4].kind == K::FRAME);
  CHECK(seq.elements[5].kind == K::QUERY);
  CHECK(seq.elements[2].frame_index == 0);
  CHECK(seq.elements[2].tokens == 4);
  CHECK(seq.declared_tokens == 6);
}

TEST_CASE("prompt assembly sorts by frame index and checks coverage") {
  const auto plan = plan_of({{3, 1}, {1, 1}});
  const auto aligned = tvg::align_timestamps({3.0, 1.0});
  const auto seq = tvg::build_prompt(plan, aligned, "i", "q");
  CHECK(seq.elements[2].frame_index == 1);
  CHECK(seq.elements[4].frame_index == 3);
  // the timestamp stays glued to its frame through the sort
  CHECK(seq.elements[1].text == "1.0");
  CHECK(seq.elements[3].text == "3.0");

  CHECK_THROWS_AS(tvg::build_prompt(plan, tvg::align_timestamps({1.0}), "i", "q"),
                  tvg::Error);
  CHECK_THROWS_AS(tvg::build_prompt(plan, aligned, "", "q"), tvg::Error);
  CHECK_THROWS_AS(tvg::build_prompt(plan, aligned, "i", ""), tvg::Error);

  const auto dupes = plan_of({{2, 1}, {2, 1}});
  CHECK_THROWS_AS(tvg::build_prompt(dupes, tvg::align_timestamps({2.0, 2.0}), "i", "q"),
                  tvg::Error);
}

TEST_CASE("a 150-frame prompt has 2F+2 elements") {
  std::vector<std::pair<int, long long>> entries;
  std::vector<double> seconds;
  for (int i = 0; i < 150; ++i) {
    entries.push_back({i, 1});
    seconds.push_back(static_cast<double>(i));
  }
  const auto seq = tvg::build_prompt(plan_of(entries), tvg::align_timestamps(seconds),
                                     "i", "q");
  CHECK(seq.elements.size() == 302);
  CHECK(seq.declared_tokens == 150);
}

TEST_CASE("rendering is stable and matches the frozen golden") {
  const auto plan = plan_of({{0, 10}});
  const auto seq =
      tvg::build_prompt(plan, tvg::align_timestamps({0.0}), "Describe the video.",
                        "When does the square move?");
  const auto text = tvg::render_prompt_text(seq);
  CHECK(text == "Describe the video.\n0.0 <frame:0:10>\nWhen does the square move?\n");
  CHECK(tvg::render_prompt_text(seq) == text);
}

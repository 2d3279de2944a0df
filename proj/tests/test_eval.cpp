#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

#include "riddleforge/error.hpp"
#include "riddleforge/eval.hpp"
#include "riddleforge/rng.hpp"
#include "support.hpp"

using namespace riddleforge;

namespace {

CandidateSet make_set(std::size_t positives, std::size_t total = 50) {
  CandidateSet set;
  set.query_id = "text_image_seen:e1-h";
  set.query = "e1-h";
  for (std::size_t i = 0; i < total; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "img%02zu", i);
    set.candidates.push_back({id, i < positives ? 0 : 1 + static_cast<int>(i % 3)});
  }
  return set;
}

ScoreMatrix score_by(const CandidateSet& set, const std::function<double(const Candidate&)>& f) {
  ScoreMatrix m;
  for (const auto& c : set.candidates) m.set(set.query_id, c.id, f(c));
  return m;
}

Benchmark load_tiny() {
  return benchmark_from_json(read_file(rftest::fixture("eval/tiny_benchmark.json")));
}

ScoreMatrix load_tiny_scores() {
  auto lines = open_lines(rftest::fixture("eval/tiny_scores.csv"));
  return read_score_csv(*lines, "fixture");
}

}  // namespace

TEST(Accuracy, PerfectAndInvertedRankings) {
  const auto set = make_set(7);
  const auto perfect = score_by(set, [](const Candidate& c) { return c.tier == 0 ? 1.0 : 0.0; });
  const auto inverted = score_by(set, [](const Candidate& c) { return c.tier == 0 ? 0.0 : 1.0; });
  EXPECT_EQ(accuracy_at_candidates(set, perfect), 1.0);
  EXPECT_EQ(accuracy_at_candidates(set, inverted), 0.0);
}

TEST(Accuracy, UniformRandomScoresMatchMonteCarlo) {
  for (const std::size_t n : {1u, 5u, 15u}) {
    const auto set = make_set(n);
    Rng rng(1000 + n);
    double sum = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
      const auto m = score_by(set, [&](const Candidate&) { return rng.uniform01(); });
      sum += accuracy_at_candidates(set, m);
    }
    EXPECT_NEAR(sum / trials, static_cast<double>(n) / 50.0, 0.01) << "n=" << n;
  }
}

TEST(Accuracy, TieBreakByCandidateId) {
  const auto set = make_set(2, 4);  // img00, img01 positive
  const auto flat = score_by(set, [](const Candidate&) { return 0.5; });
  EXPECT_EQ(accuracy_at_candidates(set, flat), 1.0);
  EXPECT_EQ(accuracy_at_candidates(set, flat, TieBreak::positives_last), 0.0);
  EXPECT_TRUE(has_boundary_tie(set, flat));
}

TEST(Accuracy, MissingScoreNamesThePair) {
  const auto set = make_set(3);
  ScoreMatrix m = score_by(set, [](const Candidate&) { return 0.1; });
  ScoreMatrix partial;
  for (std::size_t i = 0; i + 1 < set.candidates.size(); ++i) {
    partial.set(set.query_id, set.candidates[i].id, 0.1);
  }
  try {
    accuracy_at_candidates(set, partial);
    FAIL() << "expected MissingScore";
  } catch (const MissingScore& e) {
    EXPECT_EQ(e.query_id(), set.query_id);
    EXPECT_EQ(e.candidate_id(), set.candidates.back().id);
    EXPECT_NE(std::string(e.what()).find(set.candidates.back().id), std::string::npos);
  }
  EXPECT_THROW(accuracy_at_candidates(make_set(0), m), NoPositive);
}

TEST(Accuracy, MonotoneTransformInvariance) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto set = make_set(1 + rng.uniform_below(15));
    std::vector<double> raw;
    for (std::size_t i = 0; i < set.candidates.size(); ++i) raw.push_back(rng.uniform01() * 4 - 2);
    std::size_t i = 0;
    const auto a = score_by(set, [&](const Candidate&) { return raw[i++]; });
    i = 0;
    const auto b = score_by(set, [&](const Candidate&) { return std::exp(3 * raw[i++]) + 7; });
    EXPECT_EQ(accuracy_at_candidates(set, a), accuracy_at_candidates(set, b));
  }
}

TEST(Accuracy, CandidateOrderInvariance) {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    auto set = make_set(1 + rng.uniform_below(15));
    ScoreMatrix m;
    for (const auto& c : set.candidates) m.set(set.query_id, c.id, rng.uniform01());
    const double before = accuracy_at_candidates(set, m);
    rng.shuffle(set.candidates);
    EXPECT_EQ(accuracy_at_candidates(set, m), before);
  }
}

TEST(Accuracy, ValuesAreMultiplesOfOneOverN) {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.uniform_below(15);
    const auto set = make_set(n);
    const auto m = score_by(set, [&](const Candidate&) { return rng.uniform01(); });
    const double acc = accuracy_at_candidates(set, m);
    const double k = acc * static_cast<double>(n);
    EXPECT_NEAR(k, std::round(k), 1e-9);
    EXPECT_GE(acc, 0.0);
    EXPECT_LE(acc, 1.0);
  }
}

TEST(EvalReport, FixtureMatchesHandComputation) {
  const auto bench = load_tiny();
  const auto scores = load_tiny_scores();
  const auto expected = nlohmann::json::parse(read_file(rftest::fixture("eval/tiny_expected.json")));
  for (const auto& [rule, tie] : {std::pair{"candidate_id", TieBreak::candidate_id},
                                  std::pair{"positives_last", TieBreak::positives_last}}) {
    const auto report = evaluate_report(bench, scores, tie);
    const auto& exp = expected.at(rule);
    for (const auto& split : report.splits) {
      ASSERT_TRUE(split.accuracy);
      EXPECT_NEAR(*split.accuracy, exp.at(split.name).get<double>(), 1e-12) << rule << split.name;
      double sum = 0;
      for (const auto& q : split.queries) sum += q.accuracy;
      EXPECT_NEAR(*split.accuracy, sum / static_cast<double>(split.queries.size()), 1e-12);
    }
    EXPECT_EQ(report.tie_count, exp.at("tie_count").get<std::size_t>());
  }
}

TEST(EvalReport, OracleScorerIsPerfect) {
  const auto bench = load_tiny();
  ScoreMatrix oracle;
  for (const auto& split : bench.splits) {
    for (const auto& set : split.sets) {
      for (const auto& c : set.candidates) oracle.set(set.query_id, c.id, c.tier == 0 ? 1.0 : 0.0);
    }
  }
  const auto report = evaluate_report(bench, oracle);
  ASSERT_EQ(report.splits.size(), 4u);
  for (const auto& s : report.splits) EXPECT_EQ(s.accuracy, 1.0) << s.name;
}

TEST(EvalReport, RenderedForms) {
  const auto report = evaluate_report(load_tiny(), load_tiny_scores());
  const std::string table = report_to_table(report);
  EXPECT_NE(table.find(kAccuracyDefinition), std::string::npos);
  EXPECT_NE(table.find("T-I seen"), std::string::npos);
  EXPECT_NE(table.find("0.7500"), std::string::npos);
  EXPECT_NE(table.find("0.6667"), std::string::npos);
  const auto j = nlohmann::json::parse(report_to_json(report));
  EXPECT_EQ(j.at("model"), "fixture");
  EXPECT_EQ(j.at("splits").size(), 4u);
  EXPECT_DOUBLE_EQ(j.at("splits")[0].at("accuracy").get<double>(), 0.75);
}

TEST(ScoreCsv, Parsing) {
  StringLineSource ok(
      "query_id,candidate_id,score\n\"a,b\",\"x\"\"y\",1.5\nq,c,-2e-3\n");
  const auto m = read_score_csv(ok);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.find("a,b", "x\"y"), 1.5);
  EXPECT_EQ(m.find("q", "c"), -2e-3);
  EXPECT_FALSE(m.find("q", "d"));

  StringLineSource no_header("q,c,1\n");
  EXPECT_THROW(read_score_csv(no_header), FormatError);
  StringLineSource bad("query_id,candidate_id,score\nq,c,abc\n");
  EXPECT_THROW(read_score_csv(bad), FormatError);
  StringLineSource dup("query_id,candidate_id,score\nq,c,1\nq,c,2\n");
  EXPECT_THROW(read_score_csv(dup), FormatError);
  StringLineSource nan("query_id,candidate_id,score\nq,c,nan\n");
  EXPECT_THROW(read_score_csv(nan), FormatError);
}

TEST(ScoreCsv, RowFormatRoundTrips) {
  const std::string text = std::string("query_id,candidate_id,score\n") +
                           format_score_row("text_image_seen:e1-h", "img,1", 0.1 + 0.2) + "\n";
  StringLineSource lines(text);
  EXPECT_EQ(read_score_csv(lines).find("text_image_seen:e1-h", "img,1"), 0.1 + 0.2);
}

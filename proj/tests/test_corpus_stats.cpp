#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <cmath>

#include "riddleforge/augment.hpp"
#include "riddleforge/corpus_stats.hpp"
#include "riddleforge/rng.hpp"
#include "support.hpp"

using namespace riddleforge;

namespace {

CorpusStats stats_of(const std::string& text, StatsMode mode) {
  StringLineSource lines(text);
  return compute_corpus_stats(lines, PosLexicon::builtin(), mode);
}

double histogram_sum(const CorpusStats& s) {
  double sum = 0.0;
  if (s.mode == StatsMode::lengths) {
    for (const auto& [len, _] : s.length_counts) sum += s.length_fraction(len);
  } else {
    for (const auto& [key, _] : s.counts) sum += s.fraction(key);
  }
  return sum;
}

std::string read_lines_of(const std::filesystem::path& path) { return read_file(path); }

}  // namespace

TEST(CorpusStats, SingleRiddleLength) {
  const auto s = stats_of("this item is a type of animal\n", StatsMode::lengths);
  EXPECT_EQ(s.length_mean, 7.0);
  EXPECT_EQ(s.length_median, 7.0);
  EXPECT_EQ(s.length_fraction(7), 1.0);
}

TEST(CorpusStats, MedianOfEvenCount) {
  const auto s = stats_of("a b\na b c d\n", StatsMode::lengths);
  EXPECT_EQ(s.length_mean, 3.0);
  EXPECT_EQ(s.length_median, 3.0);
}

TEST(CorpusStats, PosExcludesPunctuation) {
  const auto s = stats_of(R"({"text": "this item is a type of animal."})", StatsMode::pos);
  EXPECT_EQ(s.total, 7u);
  EXPECT_EQ(s.counts.count("."), 0u);
  EXPECT_EQ(s.counts.at("VERB"), 1u);
  EXPECT_EQ(s.counts.at("DET"), 2u);
}

TEST(CorpusStats, RelationsReadFromRecords) {
  const auto s = stats_of(
      "{\"text\": \"x\", \"relation\": \"IsA\"}\n{\"text\": \"y\", \"relation\": \"IsA\"}\n"
      "{\"text\": \"z\", \"relation\": \"UsedFor\"}\n{\"text\": \"w\"}\n",
      StatsMode::relations);
  EXPECT_EQ(s.skipped, 1u);
  EXPECT_NEAR(s.fraction("IsA"), 2.0 / 3.0, 1e-12);
}

TEST(CorpusStats, HistogramsSumToOneAndIgnoreOrder) {
  const std::string corpus = read_lines_of(rftest::fixture("corpus/captions.jsonl"));
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < corpus.size()) {
    const auto end = corpus.find('\n', start);
    lines.push_back(corpus.substr(start, end - start));
    start = end + 1;
  }
  Rng rng(4);
  rng.shuffle(lines);
  std::string shuffled;
  for (const auto& l : lines) shuffled += l + "\n";
  for (const auto mode : {StatsMode::pos, StatsMode::tokens, StatsMode::lengths}) {
    const auto a = stats_of(corpus, mode);
    const auto b = stats_of(shuffled, mode);
    EXPECT_NEAR(histogram_sum(a), 1.0, 1e-9);
    EXPECT_EQ(stats_to_json(a), stats_to_json(b));
  }
}

TEST(CorpusStats, RiddlesCarryMoreVerbsAndParticlesThanCaptions) {
  const auto g = rftest::load_fixture_graph("corpus/assertions.tsv");
  std::string riddles;
  auto lines = open_lines(rftest::fixture("corpus/captions.jsonl"));
  augment_dataset(*lines, g, {}, [&](const Riddle& r) { riddles += riddle_to_json(r) + "\n"; });
  const auto r = stats_of(riddles, StatsMode::pos);
  const auto c = stats_of(read_lines_of(rftest::fixture("corpus/captions.jsonl")), StatsMode::pos);
  EXPECT_GT(r.fraction("VERB") + r.fraction("PRT"), c.fraction("VERB") + c.fraction("PRT"));
}

TEST(CorpusStats, JsonTopK) {
  const auto s = stats_of("a a a b b c\n", StatsMode::tokens);
  const auto j = nlohmann::json::parse(stats_to_json(s, 2));
  EXPECT_EQ(j.at("histogram").size(), 2u);
  EXPECT_EQ(j.at("histogram").at("a").at("count"), 3);
  EXPECT_EQ(parse_stats_mode("lengths"), StatsMode::lengths);
  EXPECT_FALSE(parse_stats_mode("verbs"));
}

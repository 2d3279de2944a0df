#include <gtest/gtest.h>

#include "riddleforge/error.hpp"
#include "riddleforge/ingest.hpp"
#include "support.hpp"

using namespace riddleforge;

namespace {

IngestResult ingest_text(std::string text, IngestOptions options = {}) {
  StringLineSource lines(std::move(text));
  return ingest_assertions(lines, options);
}

std::string row(const std::string& rel, const std::string& head, const std::string& tail,
                const std::string& meta = R"({"weight": 1.0})") {
  return "/a/[x]\t/r/" + rel + "\t" + head + "\t" + tail + "\t" + meta + "\n";
}

}  // namespace

TEST(Ingest, ThreeLineFixture) {
  const auto g = rftest::load_fixture_graph("three_lines.tsv");
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(g.out_edges(rftest::node(g, "lemon")).size(), 2u);
  EXPECT_EQ(g.out_edges(rftest::node(g, "net")).size(), 1u);
}

TEST(Ingest, RecordEncoding) {
  const auto g = rftest::load_fixture_graph("three_lines.tsv");
  const auto ids = g.edges_touching("/c/en/net", Direction::outgoing);
  ASSERT_EQ(ids.size(), 1u);
  const Edge& e = g.edge(ids[0]);
  EXPECT_EQ(e.weight, 0.3);
  EXPECT_EQ(g.relation_name(e.relation), "UsedFor");
  EXPECT_EQ(g.node_uri(e.tail), "/c/en/catching_fish");
}

TEST(Ingest, TwoColumnLineIsMalformed) {
  const std::string good = row("IsA", "/c/en/cat", "/c/en/animal");
  const auto base = ingest_text(good + good + good);
  IngestOptions loose;
  loose.max_error_fraction = 0.5;
  const auto r = ingest_text(good + "a\tb\n" + good + good, loose);
  EXPECT_EQ(r.report.malformed, 1u);
  ASSERT_EQ(r.report.malformed_samples.size(), 1u);
  EXPECT_EQ(r.report.malformed_samples[0].line_no, 2u);
  EXPECT_EQ(r.graph, base.graph);
}

TEST(Ingest, TooManyMalformedLinesFails) {
  EXPECT_THROW(ingest_text(row("IsA", "/c/en/cat", "/c/en/animal") + "x\ny\n"), MalformedInput);
}

TEST(Ingest, SenseSuffixCollapsesAndOtherLanguagesFiltered) {
  const auto r = ingest_text(row("IsA", "/c/en/apple/n/wn/food", "/c/en/fruit/n") +
                             row("Synonym", "/c/en/car", "/c/fr/voiture") +
                             row("IsA", "/c/en/apple", "/c/en/fruit"));
  EXPECT_EQ(r.report.records_kept, 2u);
  EXPECT_EQ(r.report.records_filtered, 1u);
  EXPECT_EQ(r.graph.node_count(), 2u);
  EXPECT_TRUE(r.graph.find_node("/c/en/apple"));
}

TEST(Ingest, WeightDefaultsAndBadMetadata) {
  IngestOptions loose;
  loose.max_error_fraction = 0.9;
  const auto r = ingest_text(row("IsA", "/c/en/a", "/c/en/b", "{}") +
                                 row("IsA", "/c/en/a", "/c/en/c", "not json") +
                                 row("IsA", "/c/en/a", "/c/en/d", R"({"weight": "high"})"),
                             loose);
  EXPECT_EQ(r.graph.edge_count(), 1u);
  EXPECT_EQ(r.graph.edge(0).weight, 1.0);
  EXPECT_EQ(r.report.malformed, 2u);
}

TEST(Ingest, DeduplicateOption) {
  IngestOptions opts;
  opts.deduplicate = true;
  const auto r = ingest_text(row("IsA", "/c/en/a", "/c/en/b", R"({"weight": 0.5})") +
                                 row("IsA", "/c/en/a", "/c/en/b", R"({"weight": 3.0})"),
                             opts);
  EXPECT_EQ(r.graph.edge_count(), 1u);
  EXPECT_EQ(r.graph.edge(0).weight, 3.0);
  EXPECT_EQ(r.report.duplicates_merged, 1u);
}

TEST(Ingest, ParseAssertionReportsReason) {
  AssertionRecord rec;
  std::string reason;
  EXPECT_EQ(parse_assertion("only\tthree\tcols", "/c/en/", rec, reason), RecordStatus::malformed);
  EXPECT_FALSE(reason.empty());
  EXPECT_EQ(parse_assertion("/a/x\t/r/UsedFor\t/c/en/net\t/c/en/catching_fish\t{\"weight\": 0.3}",
                            "/c/en/", rec, reason),
            RecordStatus::kept);
  EXPECT_EQ(rec.relation, "UsedFor");
  EXPECT_EQ(rec.weight, 0.3);
}

TEST(Ingest, GeneratedCorpus) {
  auto lines = open_lines(rftest::fixture("corpus/assertions.tsv"));
  const auto r = ingest_assertions(*lines);
  EXPECT_EQ(r.report.malformed, 2u);
  EXPECT_GT(r.graph.edge_count(), 1500u);
  for (const Edge& e : r.graph.edges()) {
    EXPECT_TRUE(r.graph.node_uri(e.head).starts_with("/c/en/"));
    EXPECT_TRUE(r.graph.node_uri(e.tail).starts_with("/c/en/"));
  }
}

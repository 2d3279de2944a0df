#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "riddleforge/benchmark.hpp"
#include "riddleforge/error.hpp"
#include "riddleforge/holdout.hpp"
#include "support.hpp"

using namespace riddleforge;

namespace {

struct LemonWorld {
  KnowledgeGraph graph = rftest::load_fixture_graph("lemon_graph.tsv");
  HoldoutSpec spec;
  std::vector<TestImage> images;

  LemonWorld(std::size_t lemon_images, std::size_t fillers) {
    auto add = [&](const std::string& id, std::vector<std::string> terms) {
      TestImage img{id, {}};
      for (const auto& t : terms) img.entities.push_back(rftest::node(graph, t));
      std::sort(img.entities.begin(), img.entities.end());
      images.push_back(img);
      spec.test_images.push_back(id);
    };
    for (std::size_t i = 0; i < lemon_images; ++i) add("lemon" + std::to_string(i), {"lemon"});
    add("lime0", {"lime"});
    add("apple0", {"apple"});
    for (std::size_t i = 0; i < fillers; ++i) add("desk" + std::to_string(100 + i), {"desk"});
    std::sort(images.begin(), images.end(),
              [](const TestImage& a, const TestImage& b) { return a.image_id < b.image_id; });
    std::sort(spec.test_images.begin(), spec.test_images.end());
  }

  EdgeId edge(const std::string& head, const std::string& rel, const std::string& tail) const {
    for (const Edge& e : graph.edges()) {
      if (graph.node_uri(e.head) == "/c/en/" + head && graph.relation_name(e.relation) == rel &&
          graph.node_uri(e.tail) == "/c/en/" + tail) {
        return e.id;
      }
    }
    throw std::runtime_error("no such edge");
  }
};

std::uint32_t find_entry(const BenchmarkContext& ctx, KnowledgeSplit split, RiddleRef ref) {
  const auto& cat = ctx.catalog(split);
  for (std::uint32_t i = 0; i < cat.size(); ++i) {
    if (cat[i].ref == ref) return i;
  }
  throw std::runtime_error("riddle not in catalog");
}

const TestImage& image_by_id(const BenchmarkContext& ctx, const std::string& id) {
  for (const auto& img : ctx.images()) {
    if (img.image_id == id) return img;
  }
  throw std::runtime_error("no image " + id);
}

}  // namespace

TEST(BenchmarkContext, SatisfiesAndNeighbours) {
  LemonWorld w(3, 60);
  const BenchmarkContext ctx(w.graph, w.images, w.spec, LinearizeConfig::defaults(), {});
  const RiddleRef sour{w.edge("lemon", "HasProperty", "sour"), HiddenSide::head};
  EXPECT_EQ(ctx.subject_of(sour), rftest::node(w.graph, "lemon"));
  EXPECT_TRUE(ctx.satisfies(rftest::node(w.graph, "lemon"), sour));
  EXPECT_FALSE(ctx.satisfies(rftest::node(w.graph, "lime"), sour));
  const auto nb = ctx.hard_neighbors(rftest::node(w.graph, "lemon"));
  EXPECT_EQ(std::set<NodeIndex>(nb.begin(), nb.end()),
            (std::set<NodeIndex>{rftest::node(w.graph, "lime"), rftest::node(w.graph, "apple")}));
  EXPECT_TRUE(ctx.hard_neighbors(rftest::node(w.graph, "desk")).empty());
  EXPECT_EQ(ctx.images_with(rftest::node(w.graph, "lemon")).size(), 3u);
}

TEST(HardNegatives, LimeImageIsTierOne) {
  LemonWorld w(3, 60);
  const BenchmarkContext ctx(w.graph, w.images, w.spec, LinearizeConfig::defaults(), {});
  const RiddleRef sour{w.edge("lemon", "HasProperty", "sour"), HiddenSide::head};
  Rng rng(1);
  const auto negs = mine_hard_negatives(ctx, sour, {}, 47, rng);
  ASSERT_EQ(negs.size(), 47u);
  std::map<std::string, int> tier;
  for (const auto& c : negs) tier[c.id] = c.tier;
  EXPECT_EQ(tier.at("lime0"), 1);
  EXPECT_EQ(tier.at("apple0"), 1);
  for (const auto& [id, t] : tier) {
    EXPECT_FALSE(id.starts_with("lemon")) << id;
    if (id.starts_with("desk")) {
      EXPECT_EQ(t, 3);
    }
  }
}

TEST(HardNegatives, SatisfyingImageIsNeverNegative) {
  LemonWorld w(2, 60);
  const BenchmarkContext ctx(w.graph, w.images, w.spec, LinearizeConfig::defaults(), {});
  // lime and lemon are both fruit: an image of either satisfies "this item is a type of fruit".
  const RiddleRef fruit{w.edge("lime", "IsA", "fruit"), HiddenSide::head};
  Rng rng(2);
  for (const auto& c : mine_hard_negatives(ctx, fruit, {}, 49, rng)) {
    EXPECT_FALSE(c.id.starts_with("lemon")) << c.id;
    EXPECT_FALSE(c.id.starts_with("apple")) << c.id;
    EXPECT_NE(c.id, "lime0");
  }
}

TEST(HardNegatives, EmptyNeighbourPoolFallsBack) {
  LemonWorld w(1, 60);
  const BenchmarkContext ctx(w.graph, w.images, w.spec, LinearizeConfig::defaults(), {});
  const RiddleRef writing{w.edge("desk", "UsedFor", "writing"), HiddenSide::head};
  Rng rng(3);
  const auto negs = mine_hard_negatives(ctx, writing, {}, 3, rng);
  ASSERT_EQ(negs.size(), 3u);
  for (const auto& c : negs) {
    EXPECT_EQ(c.tier, 3);
    EXPECT_FALSE(c.id.starts_with("desk"));
  }
  Rng rng2(3);
  EXPECT_THROW(mine_hard_negatives(ctx, writing, {}, 10, rng2), PoolExhausted);
}

TEST(CandidateSets, ThreeLemonImagesAreThePositives) {
  LemonWorld w(3, 60);
  BenchmarkConfig cfg;
  cfg.min_positives = cfg.max_positives = 3;
  const BenchmarkContext ctx(w.graph, w.images, w.spec, LinearizeConfig::defaults(), cfg);
  const RiddleRef sour{w.edge("lemon", "HasProperty", "sour"), HiddenSide::head};
  const auto set =
      build_text_to_image_set(ctx, KnowledgeSplit::seen, find_entry(ctx, KnowledgeSplit::seen, sour), 5);
  EXPECT_EQ(set.candidates.size(), 50u);
  EXPECT_EQ(set.positive_ids(), (std::vector<std::string>{"lemon0", "lemon1", "lemon2"}));
  EXPECT_EQ(set.candidates.size() - set.positive_count(), 47u);
  EXPECT_EQ(set.query, riddle_id(sour.edge, HiddenSide::head));
  EXPECT_EQ(set.query_id, "text_image_seen:" + set.query);
}

TEST(CandidateSets, PositiveCountIsCappedByPool) {
  LemonWorld w(1, 60);
  BenchmarkConfig cfg;
  cfg.min_positives = cfg.max_positives = 9;
  const BenchmarkContext ctx(w.graph, w.images, w.spec, LinearizeConfig::defaults(), cfg);
  const RiddleRef sour{w.edge("lemon", "HasProperty", "sour"), HiddenSide::head};
  const auto set =
      build_text_to_image_set(ctx, KnowledgeSplit::seen, find_entry(ctx, KnowledgeSplit::seen, sour), 5);
  EXPECT_EQ(set.positive_count(), 1u);
  EXPECT_EQ(set.candidates.size(), 50u);
}

TEST(CandidateSets, ImageToTextPositivesAreAboutImageEntities) {
  LemonWorld w(3, 60);
  const BenchmarkContext ctx(w.graph, w.images, w.spec, LinearizeConfig::defaults(), {});
  const auto& cat = ctx.catalog(KnowledgeSplit::seen);
  ASSERT_GE(cat.size(), 5u);
  std::uint32_t lemon_index = 0;
  for (std::uint32_t i = 0; i < ctx.images().size(); ++i) {
    if (ctx.images()[i].image_id == "lemon0") lemon_index = i;
  }
  BenchmarkConfig small;
  small.candidates = 4;
  small.max_positives = 2;
  const BenchmarkContext ctx4(w.graph, w.images, w.spec, LinearizeConfig::defaults(), small);
  const auto set = build_image_to_text_set(ctx4, KnowledgeSplit::seen, lemon_index, 9);
  EXPECT_EQ(set.candidates.size(), 4u);
  EXPECT_EQ(set.query, "lemon0");
  const NodeIndex lemon = rftest::node(w.graph, "lemon");
  for (const auto& c : set.candidates) {
    bool about_lemon = false;
    for (const auto& e : cat) {
      if (riddle_id(e.ref.edge, e.ref.hidden) == c.id) about_lemon = e.subject == lemon;
    }
    EXPECT_EQ(about_lemon, c.tier == 0) << c.id;
  }
  EXPECT_EQ(image_by_id(ctx, "lemon0").entities, std::vector<NodeIndex>{lemon});
}

TEST(CandidateSets, UnseenCatalogFollowsHoldout) {
  LemonWorld w(1, 60);
  const BenchmarkContext open(w.graph, w.images, w.spec, LinearizeConfig::defaults(), {});
  EXPECT_TRUE(open.catalog(KnowledgeSplit::unseen).empty());

  const EdgeId sour = w.edge("lemon", "HasProperty", "sour");
  w.spec.held_out_edges = {sour};
  const BenchmarkContext held(w.graph, w.images, w.spec, LinearizeConfig::defaults(), {});
  ASSERT_EQ(held.catalog(KnowledgeSplit::unseen).size(), 1u);
  EXPECT_EQ(held.catalog(KnowledgeSplit::unseen)[0].ref.edge, sour);
  for (const auto& e : held.catalog(KnowledgeSplit::seen)) EXPECT_NE(e.ref.edge, sour);
}

class CorpusBenchmark : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    graph_ = new KnowledgeGraph(rftest::load_fixture_graph("corpus/assertions.tsv"));
    std::vector<std::string> ids;
    std::set<std::string> seen;
    auto lines = open_lines(rftest::fixture("corpus/captions.jsonl"));
    std::string line;
    while (lines->next_line(line)) {
      const auto c = parse_caption_line(line);
      if (seen.insert(c.image_id).second) ids.push_back(c.image_id);
    }
    spec_ = new HoldoutSpec(partition_holdout(*graph_, ids, {0.1, 0.3}, 7));
  }
  static void TearDownTestSuite() {
    delete graph_;
    delete spec_;
  }

  static Benchmark build(unsigned workers, std::size_t queries) {
    BenchmarkConfig cfg;
    cfg.workers = workers;
    cfg.max_queries_per_split = queries;
    auto lines = open_lines(rftest::fixture("corpus/captions.jsonl"));
    const BenchmarkContext ctx(*graph_,
                               collect_test_images(*lines, *graph_, *spec_,
                                                   ExtractionConfig::defaults()),
                               *spec_, LinearizeConfig::defaults(), cfg);
    return assemble_benchmark(ctx, *spec_, 0.5, 7);
  }

  static KnowledgeGraph* graph_;
  static HoldoutSpec* spec_;
};

KnowledgeGraph* CorpusBenchmark::graph_ = nullptr;
HoldoutSpec* CorpusBenchmark::spec_ = nullptr;

TEST_F(CorpusBenchmark, ShapeAndSplitRules) {
  const auto bench = build(1, 40);
  ASSERT_EQ(bench.splits.size(), 4u);
  std::map<std::string, const BenchmarkRiddle*> riddles;
  for (const auto& r : bench.riddles) riddles[r.id] = &r;
  for (const auto& split : bench.splits) {
    EXPECT_EQ(split.sets.size(), 40u) << split.name;
    EXPECT_EQ(split.counts.emitted, split.sets.size());
    for (const auto& set : split.sets) {
      ASSERT_EQ(set.candidates.size(), 50u);
      EXPECT_GE(set.positive_count(), 1u);
      EXPECT_LE(set.positive_count(), 15u);
      std::set<std::string> ids;
      for (const auto& c : set.candidates) ids.insert(c.id);
      EXPECT_EQ(ids.size(), 50u);
      if (split.direction == QueryDirection::text_to_image) {
        const auto& r = *riddles.at(set.query);
        EXPECT_EQ(spec_->is_held_out(r.edge_id), split.split == KnowledgeSplit::unseen);
      }
    }
  }
  EXPECT_EQ(bench.provenance.held_out_triples, spec_->held_out_triples);
}

TEST_F(CorpusBenchmark, WorkerCountAndReruns) {
  const auto a = benchmark_to_json(build(1, 25));
  EXPECT_EQ(benchmark_to_json(build(1, 25)), a);
  EXPECT_EQ(benchmark_to_json(build(3, 25)), a);
}

TEST_F(CorpusBenchmark, JsonRoundTrip) {
  const auto bench = build(1, 10);
  const std::string text = benchmark_to_json(bench);
  const auto back = benchmark_from_json(text);
  EXPECT_EQ(back, bench);
  EXPECT_EQ(benchmark_to_json(back), text);
  EXPECT_THROW(benchmark_from_json("{}"), FormatError);
  EXPECT_THROW(benchmark_from_json("nope"), FormatError);
}

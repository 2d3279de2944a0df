#include <benchmark/benchmark.h>

#include <filesystem>

#include "riddleforge/augment.hpp"
#include "riddleforge/eval.hpp"
#include "riddleforge/ingest.hpp"
#include "riddleforge/rng.hpp"
#include "riddleforge/snapshot.hpp"

using namespace riddleforge;

namespace {

std::filesystem::path fixture(const char* name) {
  return std::filesystem::path(RIDDLEFORGE_FIXTURES) / name;
}

const std::string& assertions_text() {
  static const std::string text = read_file(fixture("corpus/assertions.tsv"));
  return text;
}

const KnowledgeGraph& corpus_graph() {
  static const KnowledgeGraph graph = [] {
    StringLineSource lines(assertions_text());
    return ingest_assertions(lines).graph;
  }();
  return graph;
}

KnowledgeGraph synthetic_graph(std::size_t nodes, std::size_t edges) {
  Rng rng(1);
  GraphBuilder b;
  std::vector<NodeIndex> ids;
  for (std::size_t i = 0; i < nodes; ++i) ids.push_back(b.intern_node("/c/en/n" + std::to_string(i)));
  const RelationIndex rel = b.intern_relation("RelatedTo");
  for (std::size_t i = 0; i < edges; ++i) {
    b.add_edge(ids[rng.uniform_below(nodes)], rel, 1.0, ids[rng.uniform_below(nodes)]);
  }
  return std::move(b).build();
}

}  // namespace

static void BM_IngestCorpus(benchmark::State& state) {
  for (auto _ : state) {
    StringLineSource lines(assertions_text());
    benchmark::DoNotOptimize(ingest_assertions(lines));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * assertions_text().size()));
}
BENCHMARK(BM_IngestCorpus);

static void BM_EdgesTouching(benchmark::State& state) {
  const auto g = synthetic_graph(static_cast<std::size_t>(state.range(0)) / 8,
                                 static_cast<std::size_t>(state.range(0)));
  Rng rng(2);
  for (auto _ : state) {
    const NodeIndex n{static_cast<std::uint32_t>(rng.uniform_below(g.node_count()))};
    benchmark::DoNotOptimize(g.edges_touching(n, Direction::both));
  }
}
BENCHMARK(BM_EdgesTouching)->Range(1 << 12, 1 << 20);

static void BM_SnapshotRoundTrip(benchmark::State& state) {
  const auto g = synthetic_graph(1 << 14, 1 << 17);
  for (auto _ : state) benchmark::DoNotOptimize(deserialize_snapshot(serialize_snapshot(g)));
}
BENCHMARK(BM_SnapshotRoundTrip);

static void BM_AugmentCorpus(benchmark::State& state) {
  const auto& g = corpus_graph();
  const std::string captions = read_file(fixture("corpus/captions.jsonl"));
  AugmentOptions options;
  options.workers = static_cast<unsigned>(state.range(0));
  std::size_t riddles = 0;
  for (auto _ : state) {
    StringLineSource lines(captions);
    riddles += augment_dataset(lines, g, options, [](const Riddle&) {}).riddles_out;
  }
  state.counters["riddles/s"] = benchmark::Counter(static_cast<double>(riddles),
                                                   benchmark::Counter::kIsRate);
}
BENCHMARK(BM_AugmentCorpus)->Arg(1)->Arg(4)->UseRealTime();

static void BM_AccuracyAt50(benchmark::State& state) {
  CandidateSet set;
  set.query_id = "q";
  ScoreMatrix scores;
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    set.candidates.push_back({"img" + std::to_string(i), i < 7 ? 0 : 1});
    scores.set("q", set.candidates.back().id, rng.uniform01());
  }
  for (auto _ : state) benchmark::DoNotOptimize(accuracy_at_candidates(set, scores));
}
BENCHMARK(BM_AccuracyAt50);

BENCHMARK_MAIN();

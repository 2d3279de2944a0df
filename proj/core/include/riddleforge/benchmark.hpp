#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "riddleforge/entity_extract.hpp"
#include "riddleforge/graph.hpp"
#include "riddleforge/holdout.hpp"
#include "riddleforge/io.hpp"
#include "riddleforge/linearize.hpp"
#include "riddleforge/rng.hpp"

namespace riddleforge {

enum class QueryDirection { text_to_image, image_to_text };
enum class KnowledgeSplit { seen, unseen };

std::string_view direction_name(QueryDirection direction);  // "text_to_image"
std::string_view knowledge_name(KnowledgeSplit split);      // "seen" / "unseen"
// "text_image_seen", "image_text_unseen", ...
std::string split_name(QueryDirection direction, KnowledgeSplit split);

inline constexpr std::string_view kImageToTextNote =
    "image-to-text sets are built symmetrically to text-to-image: positives are riddles whose "
    "subject is an entity of the query image; negatives are riddles whose subjects are "
    "RelatedTo/DistinctFrom/Antonym neighbours of the image's entities and which no entity of "
    "the image satisfies";

struct BenchmarkConfig {
  std::size_t candidates = 50;
  std::size_t min_positives = 1;
  std::size_t max_positives = 15;
  std::size_t max_queries_per_split = 500;
  std::vector<std::string> hard_relations{"RelatedTo", "DistinctFrom", "Antonym"};
  unsigned workers = 1;

  void validate() const;
};

// "e<edge id>-h" or "e<edge id>-t".
std::string riddle_id(EdgeId edge, HiddenSide side);

// A riddle as seen by the benchmark: identified by its source edge and
// hidden side, independent of the image it was generated for.
struct RiddleRef {
  EdgeId edge = 0;
  HiddenSide hidden = HiddenSide::head;

  friend auto operator<=>(const RiddleRef&, const RiddleRef&) = default;
};

struct TestImage {
  std::string image_id;
  std::vector<NodeIndex> entities;  // sorted, unique
};

/// Reads a caption manifest and returns the union entity set of every
/// test image of `spec`, sorted by image id.
std::vector<TestImage> collect_test_images(LineSource& manifest, const KnowledgeGraph& graph,
                                           const HoldoutSpec& spec,
                                           const ExtractionConfig& extraction);

struct Candidate {
  std::string id;
  // 0 for positives; 1 = 1-hop hard negative, 2 = 2-hop, 3 = random.
  int tier = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct CandidateSet {
  std::string query_id;  // "<split name>:<query>"
  std::string query;     // riddle id or image id
  QueryDirection direction = QueryDirection::text_to_image;
  KnowledgeSplit split = KnowledgeSplit::seen;
  std::vector<Candidate> candidates;

  std::vector<std::string> positive_ids() const;  // sorted
  std::size_t positive_count() const;

  friend bool operator==(const CandidateSet&, const CandidateSet&) = default;
};

struct SplitCounts {
  std::size_t queries_considered = 0;
  std::size_t emitted = 0;
  std::size_t no_positive = 0;
  std::size_t pool_exhausted = 0;
  std::array<std::size_t, 4> candidates_by_tier{};

  friend bool operator==(const SplitCounts&, const SplitCounts&) = default;
};

struct BenchmarkSplit {
  std::string name;
  QueryDirection direction = QueryDirection::text_to_image;
  KnowledgeSplit split = KnowledgeSplit::seen;
  std::vector<CandidateSet> sets;
  SplitCounts counts;

  friend bool operator==(const BenchmarkSplit&, const BenchmarkSplit&) = default;
};

struct BenchmarkRiddle {
  std::string id;
  std::string text;
  EdgeId edge_id = 0;
  HiddenSide hidden_side = HiddenSide::head;
  std::string subject;
  std::string relation;
  SubstitutionClass substitution = SubstitutionClass::item;
  double weight = 0.0;
  KnowledgeSplit split = KnowledgeSplit::seen;

  friend bool operator==(const BenchmarkRiddle&, const BenchmarkRiddle&) = default;
};

struct BenchmarkProvenance {
  std::uint64_t seed = 0;
  double tau = 0.5;
  double edge_fraction = 0.0;
  double image_fraction = 0.0;
  std::size_t held_out_triples = 0;
  std::size_t test_images = 0;
  std::string graph_digest;
  std::size_t candidates = 50;
  std::size_t min_positives = 1;
  std::size_t max_positives = 15;
  std::vector<std::string> hard_relations;
  std::string image_to_text_note{kImageToTextNote};

  friend bool operator==(const BenchmarkProvenance&, const BenchmarkProvenance&) = default;
};

struct Benchmark {
  int version = 1;
  BenchmarkProvenance provenance;
  std::vector<BenchmarkSplit> splits;    // text_image_{seen,unseen}, image_text_{seen,unseen}
  std::vector<BenchmarkRiddle> riddles;  // every riddle referenced, sorted by id
  // Every image referenced, with its entity URIs, sorted by id.
  std::vector<std::pair<std::string, std::vector<std::string>>> images;

  const BenchmarkSplit* find_split(std::string_view name) const;

  friend bool operator==(const Benchmark&, const Benchmark&) = default;
};

/// Immutable indexes shared by every query of a benchmark build: the test
/// image pool, entity -> image postings, and the riddle catalog of each
/// knowledge split (riddles generated from test images, partitioned by
/// whether their edge is held out).
class BenchmarkContext {
 public:
  struct CatalogEntry {
    RiddleRef ref;
    NodeIndex subject{};
    std::string text;
    SubstitutionClass substitution = SubstitutionClass::item;
  };

  BenchmarkContext(const KnowledgeGraph& graph, std::vector<TestImage> images,
                   const HoldoutSpec& spec, const LinearizeConfig& linearize,
                   const BenchmarkConfig& config);

  const KnowledgeGraph& graph() const { return *graph_; }
  const BenchmarkConfig& config() const { return config_; }
  const std::vector<TestImage>& images() const { return images_; }
  std::span<const std::uint32_t> images_with(NodeIndex node) const;

  const std::vector<CatalogEntry>& catalog(KnowledgeSplit split) const {
    return catalogs_[static_cast<std::size_t>(split)];
  }
  std::span<const std::uint32_t> catalog_by_subject(KnowledgeSplit split, NodeIndex node) const;

  NodeIndex subject_of(const RiddleRef& ref) const;
  bool is_hard_relation(RelationIndex relation) const;

  // Nodes joined to `node` by a hard relation in either direction,
  // excluding `node`; sorted.
  std::vector<NodeIndex> hard_neighbors(NodeIndex node) const;
  // Hard neighbours of any node in `nodes` outside `nodes`; sorted.
  std::vector<NodeIndex> hard_neighbors(std::span<const NodeIndex> nodes) const;

  /// True when the riddle's source edge also holds with `node` in the
  /// hidden slot (any weight).
  bool satisfies(NodeIndex node, const RiddleRef& ref) const;

 private:
  const KnowledgeGraph* graph_;
  BenchmarkConfig config_;
  std::vector<TestImage> images_;
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> postings_;
  std::vector<bool> hard_relation_;
  std::array<std::vector<CatalogEntry>, 2> catalogs_;
  std::array<std::unordered_map<std::uint32_t, std::vector<std::uint32_t>>, 2> by_subject_;
};

/// Negative images for a riddle, tier by tier: images holding a 1-hop hard
/// neighbour of the subject, then a 2-hop one, then any other test image.
/// No returned image contains the subject or any entity satisfying the
/// riddle, and none is in `exclude` (sorted image indexes).
/// Throws PoolExhausted when fewer than `count` exist.
std::vector<Candidate> mine_hard_negatives(const BenchmarkContext& ctx, const RiddleRef& riddle,
                                           std::span<const std::uint32_t> exclude,
                                           std::size_t count, Rng& rng);

/// Negative riddles for an image from the catalog of `split`, by the same
/// tiers applied to the image's entities. No returned riddle has a subject
/// in the image or is satisfied by any entity of the image.
std::vector<Candidate> mine_hard_negative_riddles(const BenchmarkContext& ctx,
                                                  std::uint32_t image, KnowledgeSplit split,
                                                  std::size_t count, Rng& rng);

/// One candidate set. Throws NoPositive when no positive exists and
/// PoolExhausted when negatives cannot fill the set.
CandidateSet build_text_to_image_set(const BenchmarkContext& ctx, KnowledgeSplit split,
                                     std::uint32_t catalog_index, std::uint64_t seed);
CandidateSet build_image_to_text_set(const BenchmarkContext& ctx, KnowledgeSplit split,
                                     std::uint32_t image, std::uint64_t seed);

/// The four splits with provenance. Per-query seeds are derived from
/// (seed, query id), so the result does not depend on the worker count.
Benchmark assemble_benchmark(const BenchmarkContext& ctx, const HoldoutSpec& spec,
                             double tau, std::uint64_t seed);

std::string benchmark_to_json(const Benchmark& benchmark);
Benchmark benchmark_from_json(std::string_view text);

}  // namespace riddleforge

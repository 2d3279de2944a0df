#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riddleforge/entity_extract.hpp"
#include "riddleforge/graph.hpp"
#include "riddleforge/lexicon.hpp"

namespace riddleforge {

enum class SubstitutionClass { item, person, place };

// "this item", "this person", "this place".
std::string_view substitution_token(SubstitutionClass cls);
std::optional<SubstitutionClass> parse_substitution(std::string_view token);

enum class HiddenSide { head, tail };

std::string_view hidden_side_name(HiddenSide side);  // "head" / "tail"
std::optional<HiddenSide> parse_hidden_side(std::string_view name);

// Relation name -> surface phrase, e.g. "IsA" -> "is a type of".
class RelationTemplateTable {
 public:
  static const RelationTemplateTable& builtin();
  // "relation URI<TAB>phrase" lines; the "/r/" prefix is optional.
  static RelationTemplateTable parse_tsv(std::string_view text);
  static RelationTemplateTable load(const std::filesystem::path& path);

  void set(std::string relation, std::string phrase);
  const std::string* find(std::string_view relation) const;
  std::size_t size() const { return phrases_.size(); }

  // Relations present in `graph` without a phrase, sorted.
  std::vector<std::string> unmapped(const KnowledgeGraph& graph) const;

 private:
  WordMap phrases_;
};

struct LinearizeConfig {
  double tau = 0.5;
  WordSet person_words;
  WordSet place_categories;
  RelationTemplateTable templates;
  // Drop riddles whose visible endpoint is another entity of the same image.
  bool suppress_co_entity = false;
  // Indexed by EdgeId; true marks edges that must not produce riddles.
  std::shared_ptr<const std::vector<bool>> excluded_edges;

  static LinearizeConfig defaults();
  // Throws InvalidArgument when tau is negative or not finite.
  void validate() const;
};

struct SubGraph {
  std::vector<NodeIndex> subject_nodes;  // sorted, unique
  std::vector<EdgeId> edges;             // sorted, unique
};

struct SubstitutedEdge {
  EdgeId edge = 0;
  HiddenSide hidden = HiddenSide::head;
  SubstitutionClass substitution = SubstitutionClass::item;

  friend bool operator==(const SubstitutedEdge&, const SubstitutedEdge&) = default;
};

struct SubstitutedGraph {
  std::vector<NodeIndex> subject_nodes;
  std::vector<SubstitutedEdge> edges;  // ordered by (edge, hidden side)
  double threshold = 0.0;
};

struct Riddle {
  std::string image_id;
  std::string text;
  EdgeId edge_id = 0;
  HiddenSide hidden_side = HiddenSide::head;
  std::string subject;   // node URI of the hidden entity
  SubstitutionClass substitution = SubstitutionClass::item;
  double weight = 0.0;
  std::string relation;  // bare relation name

  friend bool operator==(const Riddle&, const Riddle&) = default;
};

// Counters for riddles that were not emitted.
struct RiddleCounters {
  std::size_t below_threshold = 0;
  std::size_t unmapped_relation = 0;
  std::size_t leaked_subject = 0;
  std::size_t duplicate = 0;
  std::size_t excluded_edge = 0;
  std::size_t co_entity = 0;

  RiddleCounters& operator+=(const RiddleCounters& other);
};

// Every edge with a subject node as head or tail, once each.
SubGraph query_bidirectional_subgraph(const KnowledgeGraph& graph,
                                      std::span<const NodeIndex> subjects);

/// Person if the surface term is a person word; otherwise place if the node
/// is the tail of an AtLocation edge or a scene category; otherwise item.
SubstitutionClass classify_substitution(NodeIndex node, const KnowledgeGraph& graph,
                                        const LinearizeConfig& config);

/// Keeps edges with weight > tau and emits one substituted copy per
/// subject endpoint: hidden head first, then hidden tail.
SubstitutedGraph substitute_and_filter(const SubGraph& sub, const KnowledgeGraph& graph,
                                       const LinearizeConfig& config);

/// "<head> <phrase> <tail>" with the hidden side replaced by its token.
/// Throws UnmappedRelation when the relation has no phrase.
std::string linearize_edge(const SubstitutedEdge& edge, const KnowledgeGraph& graph,
                           const RelationTemplateTable& templates);

/// Riddles for one image ordered by (edge id, hidden side), deduplicated by
/// text. Riddles whose text still shows the subject, or that do not carry
/// exactly one substitution token, are dropped and counted.
std::vector<Riddle> generate_riddles(const EntitySet& entities, const KnowledgeGraph& graph,
                                     const LinearizeConfig& config,
                                     RiddleCounters* counters = nullptr);

// True when `phrase` occurs as a whole-word run in `text`.
bool contains_word_run(std::string_view text, std::string_view phrase);

// Number of substitution-token occurrences in `text`.
std::size_t count_substitution_tokens(std::string_view text);

// JSON-lines encoding with fields image_id, text, edge_id, hidden_side,
// subject, substitution, weight, relation.
std::string riddle_to_json(const Riddle& riddle);
Riddle riddle_from_json(std::string_view line);

}  // namespace riddleforge

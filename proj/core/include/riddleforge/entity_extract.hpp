#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "riddleforge/graph.hpp"
#include "riddleforge/lexicon.hpp"

namespace riddleforge {

struct Caption {
  std::string image_id;
  std::string text;
};

struct ExtractionConfig {
  WordSet determiners;
  PosLexicon lexicon;
  WordSet general_entities;
  // Entities whose graph degree exceeds this are treated as too general.
  std::size_t max_node_degree = 50000;
  WordMap lemmas;

  // Bundled word lists and tagger.
  static ExtractionConfig defaults();
  // Throws InvalidArgument on a zero cutoff.
  void validate() const;
};

struct EntitySet {
  std::string image_id;
  std::vector<std::string> raw_entities;      // candidate terms, first-occurrence order
  std::vector<NodeIndex> matched_entities;    // graph-matched subset, same order
};

/// Noun-phrase candidates from caption text. Each phrase is emitted with
/// determiners, adjectives and numerals removed, followed by its shorter
/// contiguous sub-phrases (longest first) and finally its single words.
/// Order is first occurrence; duplicates are dropped.
std::vector<std::string> extract_candidate_terms(std::string_view text,
                                                 const ExtractionConfig& config);

// Per-word lemma lookup with identity fallback.
std::string lemmatize_term(std::string_view term, const WordMap& lemmas);

/// Keeps terms whose lemmatized, normalized URI is a graph node, is not on
/// the general-entity stoplist and has degree within the cutoff. A matched
/// multiword term suppresses every shorter term made of its words.
EntitySet match_to_graph(std::string image_id, const std::vector<std::string>& terms,
                         const KnowledgeGraph& graph, const ExtractionConfig& config);

// extract_candidate_terms followed by match_to_graph.
EntitySet extract_entities(const Caption& caption, const KnowledgeGraph& graph,
                           const ExtractionConfig& config);

// Appends `other`'s entities not already in `into` (union per image).
void merge_entity_sets(EntitySet& into, const EntitySet& other);

// Parses one manifest line {"image_id": ..., "caption": ...}. Throws
// FormatError when the line is not such an object.
Caption parse_caption_line(std::string_view line);

}  // namespace riddleforge

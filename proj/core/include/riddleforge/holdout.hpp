#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riddleforge/graph.hpp"

namespace riddleforge {

struct HoldoutFractions {
  double edge_fraction = 0.1;
  double image_fraction = 0.1;

  // Throws InvalidArgument unless both lie in (0, 1).
  void validate() const;
  friend bool operator==(const HoldoutFractions&, const HoldoutFractions&) = default;
};

/// Knowledge and images withheld from training. The edge unit is the
/// (head, relation, tail) triple: every parallel edge of a held-out triple
/// is held out.
struct HoldoutSpec {
  std::vector<EdgeId> held_out_edges;     // sorted
  std::vector<std::string> test_images;   // sorted
  std::size_t held_out_triples = 0;
  std::uint64_t seed = 0;
  HoldoutFractions fractions;
  std::string graph_digest;

  bool is_held_out(EdgeId edge) const;
  bool is_test_image(std::string_view image_id) const;

  // Dense mask over edge ids, suitable for LinearizeConfig::excluded_edges.
  std::shared_ptr<const std::vector<bool>> edge_mask(std::size_t edge_count) const;

  friend bool operator==(const HoldoutSpec&, const HoldoutSpec&) = default;
};

/// Samples round(edge_fraction * unique triples) triples and
/// round(image_fraction * unique images) images uniformly with `seed`.
/// Throws InsufficientData when either sample would be empty, or when no
/// image would remain for training.
HoldoutSpec partition_holdout(const KnowledgeGraph& graph, std::span<const std::string> image_ids,
                              const HoldoutFractions& fractions, std::uint64_t seed);

std::string holdout_to_json(const HoldoutSpec& spec);
HoldoutSpec holdout_from_json(std::string_view text);

}  // namespace riddleforge

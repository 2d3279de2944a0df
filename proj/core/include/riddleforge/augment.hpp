#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "riddleforge/entity_extract.hpp"
#include "riddleforge/graph.hpp"
#include "riddleforge/holdout.hpp"
#include "riddleforge/io.hpp"
#include "riddleforge/linearize.hpp"

namespace riddleforge {

struct AugmentOptions {
  ExtractionConfig extraction = ExtractionConfig::defaults();
  LinearizeConfig linearize = LinearizeConfig::defaults();
  // Union the entity sets of all captions of an image before generation.
  bool union_per_image = false;
  unsigned workers = 1;
  // Images handed to the worker pool at a time.
  std::size_t chunk_images = 512;
  // When set, test images are skipped and held-out edges produce nothing.
  std::shared_ptr<const HoldoutSpec> holdout;
};

struct AugmentSummary {
  std::size_t lines_read = 0;
  std::size_t captions_in = 0;
  std::size_t images_in = 0;
  std::size_t images_skipped = 0;       // test images under a holdout
  std::size_t images_without_entities = 0;
  std::size_t malformed_lines = 0;
  std::size_t riddles_out = 0;
  RiddleCounters dropped;
};

// Consecutive manifest lines sharing an image id.
struct ImageGroup {
  std::string image_id;
  std::vector<Caption> captions;
};

/// Riddles for one image: generated per entity set, merged in
/// (edge id, hidden side) order and deduplicated by text.
std::vector<Riddle> riddles_for_image(const ImageGroup& group, const KnowledgeGraph& graph,
                                      const AugmentOptions& options,
                                      RiddleCounters* counters = nullptr,
                                      bool* had_entities = nullptr);

/// Streams a JSON-lines caption manifest through extraction and riddle
/// generation. `sink` receives riddles in manifest image order regardless
/// of the worker count. Malformed manifest lines are counted and skipped.
AugmentSummary augment_dataset(LineSource& manifest, const KnowledgeGraph& graph,
                               const AugmentOptions& options,
                               const std::function<void(const Riddle&)>& sink);

std::string summary_to_json(const AugmentSummary& summary);

}  // namespace riddleforge

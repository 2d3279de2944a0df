#include "riddleforge/augment.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <tuple>

#include "parallel.hpp"
#include "riddleforge/error.hpp"
#include "riddleforge/text.hpp"

namespace riddleforge {
namespace {

struct GroupResult {
  std::vector<Riddle> riddles;
  RiddleCounters counters;
  bool had_entities = false;
};

}  // namespace

std::vector<Riddle> riddles_for_image(const ImageGroup& group, const KnowledgeGraph& graph,
                                      const AugmentOptions& options, RiddleCounters* counters,
                                      bool* had_entities) {
  std::vector<EntitySet> sets;
  for (const Caption& caption : group.captions) {
    EntitySet set = extract_entities(caption, graph, options.extraction);
    if (options.union_per_image && !sets.empty()) {
      merge_entity_sets(sets.front(), set);
    } else {
      sets.push_back(std::move(set));
    }
  }

  bool any_entities = false;
  RiddleCounters local;
  std::vector<Riddle> merged;
  for (const EntitySet& set : sets) {
    if (!set.matched_entities.empty()) any_entities = true;
    auto riddles = generate_riddles(set, graph, options.linearize, &local);
    merged.insert(merged.end(), std::make_move_iterator(riddles.begin()),
                  std::make_move_iterator(riddles.end()));
  }
  if (sets.size() > 1) {
    std::stable_sort(merged.begin(), merged.end(), [](const Riddle& a, const Riddle& b) {
      return std::tie(a.edge_id, a.hidden_side) < std::tie(b.edge_id, b.hidden_side);
    });
    WordSet seen;
    std::vector<Riddle> unique;
    unique.reserve(merged.size());
    for (Riddle& r : merged) {
      if (seen.insert(r.text).second) {
        unique.push_back(std::move(r));
      } else {
        ++local.duplicate;
      }
    }
    merged = std::move(unique);
  }
  if (counters) *counters += local;
  if (had_entities) *had_entities = any_entities;
  return merged;
}

AugmentSummary augment_dataset(LineSource& manifest, const KnowledgeGraph& graph,
                               const AugmentOptions& options,
                               const std::function<void(const Riddle&)>& sink) {
  options.extraction.validate();
  AugmentOptions effective = options;
  effective.linearize.validate();
  if (options.holdout && !effective.linearize.excluded_edges) {
    effective.linearize.excluded_edges = options.holdout->edge_mask(graph.edge_count());
  }
  const std::size_t chunk = std::max<std::size_t>(1, options.chunk_images);

  AugmentSummary summary;
  std::vector<ImageGroup> pending;
  std::vector<GroupResult> results;

  const auto flush = [&] {
    results.assign(pending.size(), {});
    detail::run_parallel(pending.size(), options.workers, [&](std::size_t i) {
      results[i].riddles = riddles_for_image(pending[i], graph, effective, &results[i].counters,
                                             &results[i].had_entities);
    });
    for (GroupResult& r : results) {
      summary.dropped += r.counters;
      if (!r.had_entities) ++summary.images_without_entities;
      for (const Riddle& riddle : r.riddles) sink(riddle);
      summary.riddles_out += r.riddles.size();
    }
    pending.clear();
    results.clear();
  };

  std::string line;
  std::string current_id;
  bool have_current = false;
  bool skipping = false;
  while (manifest.next_line(line)) {
    ++summary.lines_read;
    if (trim(line).empty()) continue;
    Caption caption;
    try {
      caption = parse_caption_line(line);
    } catch (const FormatError&) {
      ++summary.malformed_lines;
      continue;
    }
    ++summary.captions_in;
    if (!have_current || caption.image_id != current_id) {
      have_current = true;
      current_id = caption.image_id;
      ++summary.images_in;
      skipping = options.holdout && options.holdout->is_test_image(caption.image_id);
      if (skipping) {
        ++summary.images_skipped;
        continue;
      }
      if (pending.size() >= chunk) flush();
      pending.push_back({caption.image_id, {}});
    } else if (skipping) {
      continue;
    }
    pending.back().captions.push_back(std::move(caption));
  }
  flush();
  return summary;
}

std::string summary_to_json(const AugmentSummary& summary) {
  nlohmann::ordered_json j;
  j["lines_read"] = summary.lines_read;
  j["captions_in"] = summary.captions_in;
  j["images_in"] = summary.images_in;
  j["images_skipped"] = summary.images_skipped;
  j["images_without_entities"] = summary.images_without_entities;
  j["malformed_lines"] = summary.malformed_lines;
  j["riddles_out"] = summary.riddles_out;
  j["dropped"] = {
      {"below_threshold", summary.dropped.below_threshold},
      {"unmapped_relation", summary.dropped.unmapped_relation},
      {"leaked_subject", summary.dropped.leaked_subject},
      {"duplicate", summary.dropped.duplicate},
      {"excluded_edge", summary.dropped.excluded_edge},
      {"co_entity", summary.dropped.co_entity},
  };
  return j.dump(2);
}

}  // namespace riddleforge

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "riddleforge/io.hpp"
#include "riddleforge/lexicon.hpp"

namespace riddleforge {

enum class StatsMode { pos, tokens, lengths, relations };

std::string_view stats_mode_name(StatsMode mode);
std::optional<StatsMode> parse_stats_mode(std::string_view name);

/// Integer counts per key; fractions are derived on demand, so results do
/// not depend on record order.
struct CorpusStats {
  StatsMode mode = StatsMode::pos;
  std::size_t records = 0;
  std::size_t skipped = 0;  // records without usable text / relation
  std::map<std::string, std::uint64_t> counts;  // pos, tokens, relations
  std::uint64_t total = 0;
  std::map<std::size_t, std::uint64_t> length_counts;  // lengths
  double length_mean = 0.0;
  double length_median = 0.0;

  double fraction(std::string_view key) const;
  double length_fraction(std::size_t length) const;
};

/// Text of one corpus line: the "text" or "caption" field of a JSON object,
/// or the raw line otherwise.
std::optional<std::string> record_text(std::string_view line);

/// pos: coarse tags of every non-punctuation token. tokens: word tokens.
/// lengths: whitespace tokens per record. relations: the "relation" field
/// of riddle records.
CorpusStats compute_corpus_stats(LineSource& lines, const PosLexicon& lexicon, StatsMode mode);

// `top_k` limits the emitted keys (0 = all), most frequent first.
std::string stats_to_json(const CorpusStats& stats, std::size_t top_k = 0);

}  // namespace riddleforge

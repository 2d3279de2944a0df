#include "riddleforge/corpus_stats.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <vector>

#include "riddleforge/text.hpp"

namespace riddleforge {
namespace {

std::optional<nlohmann::json> parse_object(std::string_view line) {
  const std::string_view t = trim(line);
  if (!t.starts_with('{')) return std::nullopt;
  auto j = nlohmann::json::parse(t, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

double median_of(const std::map<std::size_t, std::uint64_t>& counts, std::uint64_t total) {
  if (total == 0) return 0.0;
  const std::uint64_t lo_rank = (total - 1) / 2;
  const std::uint64_t hi_rank = total / 2;
  std::uint64_t seen = 0;
  std::optional<std::size_t> lo;
  for (const auto& [len, count] : counts) {
    if (!lo && lo_rank < seen + count) lo = len;
    if (hi_rank < seen + count) return (static_cast<double>(*lo) + static_cast<double>(len)) / 2.0;
    seen += count;
  }
  return 0.0;
}

}  // namespace

std::string_view stats_mode_name(StatsMode mode) {
  switch (mode) {
    case StatsMode::pos:
      return "pos";
    case StatsMode::tokens:
      return "tokens";
    case StatsMode::lengths:
      return "lengths";
    case StatsMode::relations:
      return "relations";
  }
  return "pos";
}

std::optional<StatsMode> parse_stats_mode(std::string_view name) {
  for (const StatsMode m :
       {StatsMode::pos, StatsMode::tokens, StatsMode::lengths, StatsMode::relations}) {
    if (stats_mode_name(m) == name) return m;
  }
  return std::nullopt;
}

double CorpusStats::fraction(std::string_view key) const {
  if (total == 0) return 0.0;
  const auto it = counts.find(std::string(key));
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

double CorpusStats::length_fraction(std::size_t length) const {
  if (total == 0) return 0.0;
  const auto it = length_counts.find(length);
  return it == length_counts.end() ? 0.0
                                   : static_cast<double>(it->second) / static_cast<double>(total);
}

std::optional<std::string> record_text(std::string_view line) {
  if (const auto j = parse_object(line)) {
    for (const char* field : {"text", "caption"}) {
      const auto it = j->find(field);
      if (it != j->end() && it->is_string()) return it->get<std::string>();
    }
    return std::nullopt;
  }
  const std::string_view t = trim(line);
  if (t.empty()) return std::nullopt;
  return std::string(t);
}

CorpusStats compute_corpus_stats(LineSource& lines, const PosLexicon& lexicon, StatsMode mode) {
  CorpusStats stats;
  stats.mode = mode;
  std::uint64_t length_sum = 0;
  std::string line;
  while (lines.next_line(line)) {
    if (trim(line).empty()) continue;
    ++stats.records;
    if (mode == StatsMode::relations) {
      const auto j = parse_object(line);
      const auto it = j ? j->find("relation") : nlohmann::json::const_iterator{};
      if (!j || it == j->end() || !it->is_string() || it->get<std::string>().empty()) {
        ++stats.skipped;
        continue;
      }
      ++stats.counts[it->get<std::string>()];
      ++stats.total;
      continue;
    }
    const auto text = record_text(line);
    if (!text) {
      ++stats.skipped;
      continue;
    }
    switch (mode) {
      case StatsMode::pos:
        for (const Token& token : tokenize(*text)) {
          if (token.punct) continue;
          ++stats.counts[std::string(tag_name(lexicon.tag(token)))];
          ++stats.total;
        }
        break;
      case StatsMode::tokens:
        for (const Token& token : tokenize(*text)) {
          if (token.punct) continue;
          ++stats.counts[token.text];
          ++stats.total;
        }
        break;
      case StatsMode::lengths: {
        const std::size_t len = split_whitespace(*text).size();
        ++stats.length_counts[len];
        length_sum += len;
        ++stats.total;
        break;
      }
      case StatsMode::relations:
        break;
    }
  }
  if (mode == StatsMode::lengths && stats.total > 0) {
    stats.length_mean = static_cast<double>(length_sum) / static_cast<double>(stats.total);
    stats.length_median = median_of(stats.length_counts, stats.total);
  }
  return stats;
}

std::string stats_to_json(const CorpusStats& stats, std::size_t top_k) {
  nlohmann::ordered_json j;
  j["mode"] = stats_mode_name(stats.mode);
  j["records"] = stats.records;
  j["skipped"] = stats.skipped;
  j["total"] = stats.total;
  if (stats.mode == StatsMode::lengths) {
    j["mean"] = stats.length_mean;
    j["median"] = stats.length_median;
    nlohmann::ordered_json hist = nlohmann::ordered_json::object();
    for (const auto& [len, count] : stats.length_counts) {
      hist[std::to_string(len)] = static_cast<double>(count) / static_cast<double>(stats.total);
    }
    j["histogram"] = std::move(hist);
    return j.dump(2) + "\n";
  }
  std::vector<std::pair<std::string, std::uint64_t>> rows(stats.counts.begin(),
                                                          stats.counts.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (top_k > 0 && rows.size() > top_k) rows.resize(top_k);
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [key, count] : rows) {
    hist[key] = {{"count", count},
                 {"fraction", static_cast<double>(count) / static_cast<double>(stats.total)}};
  }
  j["histogram"] = std::move(hist);
  return j.dump(2) + "\n";
}

}  // namespace riddleforge

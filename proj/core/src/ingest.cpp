#include "riddleforge/ingest.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

#include "riddleforge/error.hpp"
#include "riddleforge/text.hpp"

namespace riddleforge {
namespace {

constexpr std::string_view kRelationPrefix = "/r/";

// "/c/en/net/n/wn/artifact" -> "net". Empty when the URI is outside the
// namespace.
std::string_view concept_term(std::string_view uri, std::string_view name_space) {
  if (!uri.starts_with(name_space)) return {};
  uri.remove_prefix(name_space.size());
  const auto slash = uri.find('/');
  return slash == std::string_view::npos ? uri : uri.substr(0, slash);
}

}  // namespace

RecordStatus parse_assertion(std::string_view line, std::string_view name_space,
                             AssertionRecord& record, std::string& reason) {
  const auto fields = split(line, '\t');
  if (fields.size() != 5) {
    reason = "expected 5 tab-separated columns, found " + std::to_string(fields.size());
    return RecordStatus::malformed;
  }
  const std::string_view relation_uri = fields[1];
  const std::string_view head_uri = fields[2];
  const std::string_view tail_uri = fields[3];
  if (!relation_uri.starts_with(kRelationPrefix) || relation_uri.size() == kRelationPrefix.size()) {
    reason = "relation URI must start with /r/";
    return RecordStatus::malformed;
  }
  if (head_uri.empty() || tail_uri.empty()) {
    reason = "empty node URI";
    return RecordStatus::malformed;
  }

  const std::string_view head_term = concept_term(head_uri, name_space);
  const std::string_view tail_term = concept_term(tail_uri, name_space);
  if (head_term.empty() || tail_term.empty()) {
    // Outside the namespace (or a bare namespace): a filter hit, not an error.
    return RecordStatus::filtered;
  }

  try {
    record.head = normalize_term(head_term, name_space);
    record.tail = normalize_term(tail_term, name_space);
  } catch (const EmptyTerm&) {
    reason = "node term empty after normalization";
    return RecordStatus::malformed;
  }

  std::string_view relation = relation_uri.substr(kRelationPrefix.size());
  while (relation.ends_with('/')) relation.remove_suffix(1);
  record.relation.assign(relation);

  record.weight = 1.0;
  const auto metadata = nlohmann::json::parse(fields[4], nullptr, /*allow_exceptions=*/false);
  if (metadata.is_discarded() || !metadata.is_object()) {
    reason = "metadata column is not a JSON object";
    return RecordStatus::malformed;
  }
  if (const auto it = metadata.find("weight"); it != metadata.end()) {
    if (!it->is_number()) {
      reason = "non-numeric weight";
      return RecordStatus::malformed;
    }
    const double weight = it->get<double>();
    if (!std::isfinite(weight) || weight < 0.0) {
      reason = "weight must be finite and non-negative";
      return RecordStatus::malformed;
    }
    record.weight = weight;
  }
  return RecordStatus::kept;
}

IngestResult ingest_assertions(LineSource& lines, const IngestOptions& options) {
  GraphBuilder builder(options.name_space);
  IngestReport report;
  std::string line;
  std::string reason;
  AssertionRecord record;
  std::size_t non_blank = 0;

  while (lines.next_line(line)) {
    ++report.lines_read;
    if (trim(line).empty()) continue;
    ++non_blank;
    switch (parse_assertion(line, options.name_space, record, reason)) {
      case RecordStatus::kept:
        builder.add_edge(record.head, record.relation, record.weight, record.tail);
        ++report.records_kept;
        break;
      case RecordStatus::filtered:
        ++report.records_filtered;
        break;
      case RecordStatus::malformed:
        ++report.malformed;
        if (report.malformed_samples.size() < options.max_reported_errors) {
          report.malformed_samples.push_back({lines.line_number(), reason});
        }
        break;
    }
  }

  if (non_blank > 0 &&
      static_cast<double>(report.malformed) >
          options.max_error_fraction * static_cast<double>(non_blank)) {
    throw MalformedInput(report.malformed, non_blank);
  }
  if (options.deduplicate) {
    report.duplicates_merged = builder.deduplicate_keep_max_weight();
  }
  return {std::move(builder).build(), std::move(report)};
}

}  // namespace riddleforge

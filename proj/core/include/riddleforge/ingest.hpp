#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riddleforge/graph.hpp"
#include "riddleforge/io.hpp"

namespace riddleforge {

struct IngestOptions {
  // Only assertions whose head and tail both live under this prefix are kept.
  std::string name_space{kDefaultNamespace};
  // Merge parallel (head, relation, tail) edges, keeping the max weight.
  bool deduplicate = false;
  // Ingest fails when malformed / non-blank lines exceeds this fraction.
  double max_error_fraction = 0.05;
  // How many malformed lines to keep verbatim in the report.
  std::size_t max_reported_errors = 20;
};

struct MalformedRecord {
  std::size_t line_no = 0;
  std::string reason;
};

struct IngestReport {
  std::size_t lines_read = 0;
  std::size_t records_kept = 0;
  // Well-formed records dropped by the namespace filter.
  std::size_t records_filtered = 0;
  std::size_t malformed = 0;
  std::size_t duplicates_merged = 0;
  std::vector<MalformedRecord> malformed_samples;
};

struct IngestResult {
  KnowledgeGraph graph;
  IngestReport report;
};

// One parsed line of a ConceptNet 5 assertions dump.
struct AssertionRecord {
  std::string relation;  // bare name, "/r/UsedFor" -> "UsedFor"
  std::string head;      // canonical node URI
  std::string tail;
  double weight = 1.0;
};

enum class RecordStatus { kept, filtered, malformed };

/// Parses one tab-separated line: assertion URI, relation URI, start URI,
/// end URI, JSON metadata. Node URIs are reduced to "<namespace><term>"
/// (sense suffixes such as "/n/wn/food" dropped) and normalized. Missing
/// "weight" defaults to 1.0. On failure `reason` explains why.
RecordStatus parse_assertion(std::string_view line, std::string_view name_space,
                             AssertionRecord& record, std::string& reason);

/// Single-pass streaming ingest. Malformed lines are counted and skipped;
/// MalformedInput is thrown at the end if their fraction exceeds the cap.
IngestResult ingest_assertions(LineSource& lines, const IngestOptions& options = {});

}  // namespace riddleforge

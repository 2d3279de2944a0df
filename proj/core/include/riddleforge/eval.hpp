#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "riddleforge/benchmark.hpp"
#include "riddleforge/io.hpp"

namespace riddleforge {

inline constexpr std::string_view kAccuracyDefinition =
    "Acc@50: per query, rank the 50 candidates by descending score (ties: ascending candidate "
    "id), take the top n where n is the number of positives, and score |top-n & positives| / n; "
    "a split reports the mean over its queries";

// (query id, candidate id) -> alignment score.
class ScoreMatrix {
 public:
  std::string model_name;

  // Throws InvalidArgument on a non-finite score or a repeated pair.
  void set(std::string_view query_id, std::string_view candidate_id, double score);
  std::optional<double> find(std::string_view query_id, std::string_view candidate_id) const;
  std::size_t size() const { return size_; }

 private:
  std::unordered_map<std::string, std::unordered_map<std::string, double>> entries_;
  std::size_t size_ = 0;
};

/// Reads a CSV with header `query_id,candidate_id,score`. Fields may be
/// double-quoted. Throws FormatError with the line number on bad rows.
ScoreMatrix read_score_csv(LineSource& lines, std::string model_name = "model");
std::string format_score_row(std::string_view query_id, std::string_view candidate_id,
                             double score);

enum class TieBreak {
  candidate_id,    // ascending candidate id
  positives_last,  // pessimistic: negatives win ties
};

/// Fraction of the n positives ranked within the top n. Throws
/// MissingScore for the first candidate lacking a score.
double accuracy_at_candidates(const CandidateSet& set, const ScoreMatrix& scores,
                              TieBreak tie_break = TieBreak::candidate_id);

// True when the scores at rank n and n + 1 are equal, so the tie rule
// decides the outcome.
bool has_boundary_tie(const CandidateSet& set, const ScoreMatrix& scores);

struct QueryAccuracy {
  std::string query_id;
  double accuracy = 0.0;
};

struct SplitReport {
  std::string name;
  std::optional<double> accuracy;  // empty for a split without queries
  std::vector<QueryAccuracy> queries;
  std::size_t tie_count = 0;
};

struct EvalReport {
  std::string model_name;
  std::vector<SplitReport> splits;
  std::size_t tie_count = 0;

  const SplitReport* find_split(std::string_view name) const;
};

EvalReport evaluate_report(const Benchmark& benchmark, const ScoreMatrix& scores,
                           TieBreak tie_break = TieBreak::candidate_id);

std::string report_to_json(const EvalReport& report);
// Definition header plus one aligned row per model.
std::string report_to_table(const EvalReport& report);

}  // namespace riddleforge

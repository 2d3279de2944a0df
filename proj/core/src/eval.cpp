#include "riddleforge/eval.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "riddleforge/error.hpp"
#include "riddleforge/text.hpp"

namespace riddleforge {
namespace {

// Splits one CSV record; supports "quoted, fields" and "" escapes.
std::vector<std::string> parse_csv_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty() && !was_quoted) {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else {
      field.push_back(c);
    }
  }
  if (quoted) throw FormatError("line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(field));
  return fields;
}

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\r\n") != std::string_view::npos;
}

std::string quote_csv(std::string_view s) {
  if (!needs_quotes(s)) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

struct Ranked {
  const Candidate* candidate;
  double score;
};

std::vector<Ranked> rank(const CandidateSet& set, const ScoreMatrix& scores, TieBreak tie_break) {
  std::vector<Ranked> ranked;
  ranked.reserve(set.candidates.size());
  for (const Candidate& c : set.candidates) {
    const auto s = scores.find(set.query_id, c.id);
    if (!s) throw MissingScore(set.query_id, c.id);
    ranked.push_back({&c, *s});
  }
  std::sort(ranked.begin(), ranked.end(), [&](const Ranked& a, const Ranked& b) {
    if (a.score != b.score) return a.score > b.score;
    if (tie_break == TieBreak::positives_last) {
      const bool ap = a.candidate->tier == 0;
      const bool bp = b.candidate->tier == 0;
      if (ap != bp) return !ap;
    }
    return a.candidate->id < b.candidate->id;
  });
  return ranked;
}

std::string format_accuracy(const std::optional<double>& acc) {
  if (!acc) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *acc);
  return buf;
}

}  // namespace

void ScoreMatrix::set(std::string_view query_id, std::string_view candidate_id, double score) {
  if (!std::isfinite(score)) {
    throw InvalidArgument("non-finite score for (" + std::string(query_id) + ", " +
                          std::string(candidate_id) + ")");
  }
  auto& row = entries_[std::string(query_id)];
  if (!row.emplace(std::string(candidate_id), score).second) {
    throw InvalidArgument("duplicate score for (" + std::string(query_id) + ", " +
                          std::string(candidate_id) + ")");
  }
  ++size_;
}

std::optional<double> ScoreMatrix::find(std::string_view query_id,
                                        std::string_view candidate_id) const {
  const auto row = entries_.find(std::string(query_id));
  if (row == entries_.end()) return std::nullopt;
  const auto it = row->second.find(std::string(candidate_id));
  if (it == row->second.end()) return std::nullopt;
  return it->second;
}

ScoreMatrix read_score_csv(LineSource& lines, std::string model_name) {
  ScoreMatrix scores;
  scores.model_name = std::move(model_name);
  std::string line;
  bool header_seen = false;
  while (lines.next_line(line)) {
    if (trim(line).empty()) continue;
    const std::size_t line_no = lines.line_number();
    const auto fields = parse_csv_record(line, line_no);
    if (!header_seen) {
      if (fields.size() != 3 || trim(fields[0]) != "query_id" ||
          trim(fields[1]) != "candidate_id" || trim(fields[2]) != "score") {
        throw FormatError("score file must start with header query_id,candidate_id,score");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) {
      throw FormatError("line " + std::to_string(line_no) + ": expected 3 fields");
    }
    const std::string_view raw = trim(fields[2]);
    double score = 0.0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), score);
    if (ec != std::errc() || ptr != raw.data() + raw.size()) {
      throw FormatError("line " + std::to_string(line_no) + ": score is not a number");
    }
    try {
      scores.set(fields[0], fields[1], score);
    } catch (const InvalidArgument& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header_seen) throw FormatError("score file is empty");
  return scores;
}

std::string format_score_row(std::string_view query_id, std::string_view candidate_id,
                             double score) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", score);
  return quote_csv(query_id) + "," + quote_csv(candidate_id) + "," + buf;
}

double accuracy_at_candidates(const CandidateSet& set, const ScoreMatrix& scores,
                              TieBreak tie_break) {
  const std::size_t n = set.positive_count();
  if (n == 0) throw NoPositive("candidate set " + set.query_id + " has no positives");
  const auto ranked = rank(set, scores, tie_break);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n && i < ranked.size(); ++i) {
    if (ranked[i].candidate->tier == 0) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

bool has_boundary_tie(const CandidateSet& set, const ScoreMatrix& scores) {
  const std::size_t n = set.positive_count();
  const auto ranked = rank(set, scores, TieBreak::candidate_id);
  return n > 0 && n < ranked.size() && ranked[n - 1].score == ranked[n].score;
}

const SplitReport* EvalReport::find_split(std::string_view name) const {
  for (const SplitReport& s : splits) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

EvalReport evaluate_report(const Benchmark& benchmark, const ScoreMatrix& scores,
                           TieBreak tie_break) {
  EvalReport report;
  report.model_name = scores.model_name;
  for (const BenchmarkSplit& split : benchmark.splits) {
    SplitReport sr;
    sr.name = split.name;
    for (const CandidateSet& set : split.sets) {
      const double acc = accuracy_at_candidates(set, scores, tie_break);
      if (has_boundary_tie(set, scores)) ++sr.tie_count;
      sr.queries.push_back({set.query_id, acc});
    }
    // Summed in sorted order so the mean does not depend on query order.
    long double sum = 0.0L;
    std::vector<double> values;
    values.reserve(sr.queries.size());
    for (const auto& q : sr.queries) values.push_back(q.accuracy);
    std::sort(values.begin(), values.end());
    for (const double v : values) sum += v;
    if (!sr.queries.empty()) {
      sr.accuracy = static_cast<double>(sum / static_cast<long double>(sr.queries.size()));
    }
    report.tie_count += sr.tie_count;
    report.splits.push_back(std::move(sr));
  }
  return report;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["metric"] = "Acc@50";
  j["definition"] = kAccuracyDefinition;
  j["model"] = report.model_name;
  j["tie_count"] = report.tie_count;
  nlohmann::ordered_json splits = nlohmann::ordered_json::array();
  for (const SplitReport& s : report.splits) {
    nlohmann::ordered_json js;
    js["name"] = s.name;
    js["accuracy"] = s.accuracy ? nlohmann::ordered_json(*s.accuracy) : nlohmann::ordered_json();
    js["queries"] = s.queries.size();
    js["tie_count"] = s.tie_count;
    nlohmann::ordered_json per = nlohmann::ordered_json::object();
    for (const auto& q : s.queries) per[q.query_id] = q.accuracy;
    js["per_query"] = std::move(per);
    splits.push_back(std::move(js));
  }
  j["splits"] = std::move(splits);
  return j.dump(2) + "\n";
}

std::string report_to_table(const EvalReport& report) {
  const char* columns[] = {"text_image_seen", "text_image_unseen", "image_text_seen",
                           "image_text_unseen"};
  std::ostringstream out;
  out << "# " << kAccuracyDefinition << "\n";
  std::size_t width = std::max<std::size_t>(5, report.model_name.size());
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %-10s  %-10s  %-10s  %-10s\n", static_cast<int>(width),
                "model", "T-I seen", "T-I unseen", "I-T seen", "I-T unseen");
  out << buf;
  std::vector<std::string> cells;
  for (const char* name : columns) {
    const SplitReport* s = report.find_split(name);
    cells.push_back(s ? format_accuracy(s->accuracy) : "n/a");
  }
  std::snprintf(buf, sizeof buf, "%-*s  %-10s  %-10s  %-10s  %-10s\n", static_cast<int>(width),
                report.model_name.c_str(), cells[0].c_str(), cells[1].c_str(), cells[2].c_str(),
                cells[3].c_str());
  out << buf;
  for (const SplitReport& s : report.splits) {
    out << "# " << s.name << ": " << s.queries.size() << " queries, " << s.tie_count
        << " boundary ties\n";
  }
  return out.str();
}

}  // namespace riddleforge

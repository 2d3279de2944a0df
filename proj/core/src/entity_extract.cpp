#include "riddleforge/entity_extract.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

#include "riddleforge/error.hpp"
#include "riddleforge/text.hpp"

namespace riddleforge {
namespace {

std::string join_words(const std::vector<std::string>& words, std::size_t begin,
                       std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (!out.empty()) out.push_back(' ');
    out += words[i];
  }
  return out;
}

void push_unique(std::vector<std::string>& out, WordSet& seen, std::string term) {
  if (seen.insert(term).second) out.push_back(std::move(term));
}

void emit_phrase(const std::vector<std::string>& words, std::vector<std::string>& out,
                 WordSet& seen) {
  const std::size_t n = words.size();
  for (std::size_t len = n; len >= 1; --len) {
    for (std::size_t begin = 0; begin + len <= n; ++begin) {
      push_unique(out, seen, join_words(words, begin, begin + len));
    }
  }
}

// True when `inner` occurs as a contiguous word run inside `outer`.
bool contains_words(const std::vector<std::string_view>& outer,
                    const std::vector<std::string_view>& inner) {
  if (inner.size() >= outer.size()) return false;
  return std::search(outer.begin(), outer.end(), inner.begin(), inner.end()) != outer.end();
}

}  // namespace

ExtractionConfig ExtractionConfig::defaults() {
  ExtractionConfig config;
  config.determiners = builtin_determiners();
  config.lexicon = PosLexicon::builtin();
  config.general_entities = builtin_general_entities();
  config.lemmas = builtin_lemmas();
  return config;
}

void ExtractionConfig::validate() const {
  if (max_node_degree == 0) throw InvalidArgument("max node degree cutoff must be positive");
}

std::vector<std::string> extract_candidate_terms(std::string_view text,
                                                 const ExtractionConfig& config) {
  std::vector<std::string> out;
  WordSet seen;
  std::vector<std::string> phrase;

  const auto flush = [&] {
    if (!phrase.empty()) emit_phrase(phrase, out, seen);
    phrase.clear();
  };

  for (const Token& token : tokenize(text)) {
    if (config.lexicon.tag(token) != PosTag::noun || config.determiners.contains(token.text)) {
      flush();
      continue;
    }
    phrase.push_back(token.text);
  }
  flush();
  return out;
}

std::string lemmatize_term(std::string_view term, const WordMap& lemmas) {
  std::string out;
  for (const std::string_view word : split_whitespace(term)) {
    if (!out.empty()) out.push_back(' ');
    const auto it = lemmas.find(word);
    out += it == lemmas.end() ? std::string(word) : it->second;
  }
  return out;
}

EntitySet match_to_graph(std::string image_id, const std::vector<std::string>& terms,
                         const KnowledgeGraph& graph, const ExtractionConfig& config) {
  EntitySet result;
  result.image_id = std::move(image_id);
  result.raw_entities = terms;

  struct Match {
    std::vector<std::string_view> words;
    NodeIndex node;
  };
  std::vector<std::string> lemmatized(terms.size());
  std::vector<Match> matches;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    lemmatized[i] = lemmatize_term(terms[i], config.lemmas);
    if (lemmatized[i].empty()) continue;
    if (config.general_entities.contains(lemmatized[i]) ||
        config.general_entities.contains(terms[i])) {
      continue;
    }
    std::string uri;
    try {
      uri = normalize_term(lemmatized[i], graph.name_space());
    } catch (const EmptyTerm&) {
      continue;
    }
    const auto node = graph.find_node(uri);
    if (!node || graph.degree(*node) > config.max_node_degree) continue;
    matches.push_back({split_whitespace(lemmatized[i]), *node});
  }

  // Longest matches claim their words first.
  std::vector<std::size_t> order(matches.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return matches[a].words.size() > matches[b].words.size();
  });
  std::vector<bool> keep(matches.size(), false);
  std::vector<std::size_t> kept_multiword;
  for (const std::size_t idx : order) {
    const bool suppressed =
        std::any_of(kept_multiword.begin(), kept_multiword.end(), [&](std::size_t k) {
          return contains_words(matches[k].words, matches[idx].words);
        });
    if (suppressed) continue;
    keep[idx] = true;
    if (matches[idx].words.size() > 1) kept_multiword.push_back(idx);
  }

  for (std::size_t i = 0; i < matches.size(); ++i) {
    if (!keep[i]) continue;
    const NodeIndex node = matches[i].node;
    if (std::find(result.matched_entities.begin(), result.matched_entities.end(), node) ==
        result.matched_entities.end()) {
      result.matched_entities.push_back(node);
    }
  }
  return result;
}

EntitySet extract_entities(const Caption& caption, const KnowledgeGraph& graph,
                           const ExtractionConfig& config) {
  return match_to_graph(caption.image_id, extract_candidate_terms(caption.text, config), graph,
                        config);
}

void merge_entity_sets(EntitySet& into, const EntitySet& other) {
  for (const std::string& term : other.raw_entities) {
    if (std::find(into.raw_entities.begin(), into.raw_entities.end(), term) ==
        into.raw_entities.end()) {
      into.raw_entities.push_back(term);
    }
  }
  for (const NodeIndex node : other.matched_entities) {
    if (std::find(into.matched_entities.begin(), into.matched_entities.end(), node) ==
        into.matched_entities.end()) {
      into.matched_entities.push_back(node);
    }
  }
}

Caption parse_caption_line(std::string_view line) {
  const auto json = nlohmann::json::parse(line, nullptr, false);
  if (json.is_discarded() || !json.is_object()) {
    throw FormatError("manifest line is not a JSON object");
  }
  const auto id = json.find("image_id");
  const auto text = json.find("caption");
  if (id == json.end() || text == json.end() || !text->is_string()) {
    throw FormatError("manifest line needs \"image_id\" and \"caption\"");
  }
  Caption caption;
  if (id->is_string()) {
    caption.image_id = id->get<std::string>();
  } else if (id->is_number_integer()) {
    caption.image_id = std::to_string(id->get<long long>());
  } else {
    throw FormatError("\"image_id\" must be a string or integer");
  }
  if (caption.image_id.empty()) throw FormatError("empty image_id");
  caption.text = text->get<std::string>();
  return caption;
}

}  // namespace riddleforge

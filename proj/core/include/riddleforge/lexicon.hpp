#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "riddleforge/graph.hpp"

namespace riddleforge {

// Coarse universal part-of-speech tags.
enum class PosTag { noun, verb, adj, adv, pron, det, adp, num, conj, prt, punct, other };

std::string_view tag_name(PosTag tag);  // "NOUN", "VERB", ...
std::optional<PosTag> parse_tag(std::string_view name);

struct Token {
  std::string text;  // lowercased
  bool punct = false;
};

/// Splits text into lowercased word and punctuation tokens. Words are runs
/// of letters/digits (non-ASCII bytes count as letters) with internal
/// hyphens kept; a clitic such as "'s" becomes its own token.
std::vector<Token> tokenize(std::string_view text);

using WordSet = std::unordered_set<std::string, detail::StringHash, std::equal_to<>>;
using WordMap = std::unordered_map<std::string, std::string, detail::StringHash, std::equal_to<>>;

/// Lexicon-driven tagger: closed-class and common open-class words come
/// from the table; unknown words fall back to suffix rules ("-ly" ADV,
/// "-ing"/"-ed" VERB, digits NUM) and then NOUN.
class PosLexicon {
 public:
  PosLexicon() = default;

  static const PosLexicon& builtin();
  // "word<TAB>TAG" lines; later entries override earlier ones.
  static PosLexicon parse_tsv(std::string_view text);
  static PosLexicon load(const std::filesystem::path& path);

  void set(std::string word, PosTag tag);
  std::optional<PosTag> lookup(std::string_view word) const;
  PosTag tag(std::string_view word) const;
  PosTag tag(const Token& token) const { return token.punct ? PosTag::punct : tag(token.text); }

  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, PosTag, detail::StringHash, std::equal_to<>> entries_;
};

// One-entry-per-line list (blank lines and '#' comments skipped).
WordSet parse_word_set(std::string_view text);
WordSet load_word_set(const std::filesystem::path& path);

// "from<TAB>to" pairs.
WordMap parse_word_map(std::string_view text);
WordMap load_word_map(const std::filesystem::path& path);

// Bundled defaults from core/data.
const WordSet& builtin_determiners();
const WordSet& builtin_general_entities();
const WordSet& builtin_person_words();
// Places365 names reduced to surface terms: "church/indoor" -> "church",
// "living_room" -> "living room".
const WordSet& builtin_place_categories();
const WordMap& builtin_lemmas();

// Turns a raw scene-category list into surface terms (see above).
WordSet place_terms_from_categories(std::string_view text);

}  // namespace riddleforge

#include "riddleforge/lexicon.hpp"

#include <array>
#include <cctype>

#include "builtin_data.hpp"
#include "riddleforge/error.hpp"
#include "riddleforge/io.hpp"
#include "riddleforge/text.hpp"

namespace riddleforge {
namespace {

constexpr std::array<std::pair<PosTag, std::string_view>, 12> kTagNames{{
    {PosTag::noun, "NOUN"},
    {PosTag::verb, "VERB"},
    {PosTag::adj, "ADJ"},
    {PosTag::adv, "ADV"},
    {PosTag::pron, "PRON"},
    {PosTag::det, "DET"},
    {PosTag::adp, "ADP"},
    {PosTag::num, "NUM"},
    {PosTag::conj, "CONJ"},
    {PosTag::prt, "PRT"},
    {PosTag::punct, "."},
    {PosTag::other, "X"},
}};

bool is_word_byte(char c) {
  const auto uc = static_cast<unsigned char>(c);
  return uc >= 0x80 || std::isalnum(uc);
}

bool all_digits(std::string_view word) {
  return !word.empty() && std::all_of(word.begin(), word.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == ',';
  });
}

std::string_view builtin_file(std::string_view name) {
  const std::string_view data = detail::builtin_data(name);
  if (data.empty()) throw Error("missing bundled data file: " + std::string(name));
  return data;
}

}  // namespace

std::string_view tag_name(PosTag tag) {
  for (const auto& [t, name] : kTagNames) {
    if (t == tag) return name;
  }
  return "X";
}

std::optional<PosTag> parse_tag(std::string_view name) {
  for (const auto& [t, n] : kTagNames) {
    if (n == name) return t;
  }
  if (name == "PUNCT") return PosTag::punct;
  return std::nullopt;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (is_word_byte(c) || (c == '\'' && i + 1 < text.size() && is_word_byte(text[i + 1]) &&
                            !tokens.empty() && !tokens.back().punct && i > 0 &&
                            is_word_byte(text[i - 1]))) {
      const std::size_t start = i;
      ++i;
      while (i < text.size()) {
        const char d = text[i];
        if (is_word_byte(d)) {
          ++i;
        } else if (d == '-' && i + 1 < text.size() && is_word_byte(text[i + 1])) {
          ++i;
        } else {
          break;
        }
      }
      tokens.push_back({to_lower(text.substr(start, i - start)), false});
      continue;
    }
    tokens.push_back({std::string(1, c), true});
    ++i;
  }
  return tokens;
}

const PosLexicon& PosLexicon::builtin() {
  static const PosLexicon lexicon = parse_tsv(builtin_file("pos_lexicon.tsv"));
  return lexicon;
}

PosLexicon PosLexicon::parse_tsv(std::string_view text) {
  PosLexicon lexicon;
  for (const std::string& line : parse_word_list(text)) {
    const auto fields = split(line, '\t');
    if (fields.size() != 2) throw FormatError("POS lexicon line needs 2 columns: " + line);
    const auto tag = parse_tag(trim(fields[1]));
    if (!tag) throw FormatError("unknown POS tag in lexicon: " + line);
    lexicon.set(to_lower(trim(fields[0])), *tag);
  }
  return lexicon;
}

PosLexicon PosLexicon::load(const std::filesystem::path& path) {
  return parse_tsv(read_file(path));
}

void PosLexicon::set(std::string word, PosTag tag) { entries_[std::move(word)] = tag; }

std::optional<PosTag> PosLexicon::lookup(std::string_view word) const {
  const auto it = entries_.find(word);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

PosTag PosLexicon::tag(std::string_view word) const {
  if (const auto known = lookup(word)) return *known;
  if (all_digits(word)) return PosTag::num;
  if (word.size() > 4 && word.ends_with("ly")) return PosTag::adv;
  if (word.size() > 5 && word.ends_with("ing")) return PosTag::verb;
  if (word.size() > 4 && word.ends_with("ed")) return PosTag::verb;
  if (word.starts_with('\'')) return PosTag::prt;
  return PosTag::noun;
}

WordSet parse_word_set(std::string_view text) {
  WordSet words;
  for (std::string& w : parse_word_list(text)) words.insert(to_lower(w));
  return words;
}

WordSet load_word_set(const std::filesystem::path& path) {
  return parse_word_set(read_file(path));
}

WordMap parse_word_map(std::string_view text) {
  WordMap map;
  for (const std::string& line : parse_word_list(text)) {
    const auto fields = split(line, '\t');
    if (fields.size() != 2) throw FormatError("word map line needs 2 columns: " + line);
    map.insert_or_assign(to_lower(trim(fields[0])), to_lower(trim(fields[1])));
  }
  return map;
}

WordMap load_word_map(const std::filesystem::path& path) {
  return parse_word_map(read_file(path));
}

WordSet place_terms_from_categories(std::string_view text) {
  WordSet terms;
  for (const std::string& entry : parse_word_list(text)) {
    std::string_view base = entry;
    if (const auto slash = base.find('/'); slash != std::string_view::npos) {
      base = base.substr(0, slash);
    }
    terms.insert(to_lower(surface_form(base, "")));
  }
  return terms;
}

const WordSet& builtin_determiners() {
  static const WordSet words = parse_word_set(builtin_file("determiners.txt"));
  return words;
}

const WordSet& builtin_general_entities() {
  static const WordSet words = parse_word_set(builtin_file("general_entities.txt"));
  return words;
}

const WordSet& builtin_person_words() {
  // Entries are stored in URI style ("police_officer"); match on surface form.
  static const WordSet words = [] {
    WordSet out;
    for (const auto& w : parse_word_set(builtin_file("person_words.txt"))) {
      out.insert(surface_form(w, ""));
    }
    return out;
  }();
  return words;
}

const WordSet& builtin_place_categories() {
  static const WordSet words = place_terms_from_categories(builtin_file("place_categories.txt"));
  return words;
}

const WordMap& builtin_lemmas() {
  static const WordMap map = parse_word_map(builtin_file("lemmas.tsv"));
  return map;
}

}  // namespace riddleforge

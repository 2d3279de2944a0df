#include "riddleforge/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/locid.h>

#include <algorithm>
#include <cctype>

#include "riddleforge/error.hpp"

namespace riddleforge {
namespace {

bool is_ascii(std::string_view text) {
  return std::all_of(text.begin(), text.end(),
                     [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Accumulates characters into '_'-joined words; separators only mark word
// boundaries, so runs and leading/trailing separators vanish.
class WordJoiner {
 public:
  void separator() { pending_separator_ = !out_.empty(); }

  void append(std::string_view piece) {
    if (pending_separator_) {
      out_.push_back('_');
      pending_separator_ = false;
    }
    out_.append(piece);
  }

  std::string take() { return std::move(out_); }

 private:
  std::string out_;
  bool pending_separator_ = false;
};

std::string normalize_ascii(std::string_view body) {
  WordJoiner joiner;
  for (char c : body) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) {
      const char lowered = static_cast<char>(std::tolower(uc));
      joiner.append(std::string_view(&lowered, 1));
    } else if (is_ascii_space(c) || c == '-' || c == '_') {
      joiner.separator();
    } else if (std::ispunct(uc)) {
      continue;
    } else {
      joiner.separator();
    }
  }
  return joiner.take();
}

const icu::Normalizer2& nfkc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* instance = icu::Normalizer2::getNFKCInstance(status);
  if (U_FAILURE(status) || instance == nullptr) {
    throw Error("ICU NFKC normalizer unavailable");
  }
  return *instance;
}

icu::UnicodeString nfkc_normalize(const icu::UnicodeString& text) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfkc().normalize(text, status);
  if (U_FAILURE(status)) throw Error("ICU normalization failed");
  return out;
}

std::string normalize_unicode(std::string_view body) {
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(body.data(), static_cast<int32_t>(body.size())));
  text = nfkc_normalize(text);
  text.toLower(icu::Locale::getRoot());
  text = nfkc_normalize(text);

  WordJoiner joiner;
  std::string utf8;
  for (int32_t i = 0; i < text.length();) {
    const UChar32 cp = text.char32At(i);
    i += U16_LENGTH(cp);
    const auto category = static_cast<UCharCategory>(u_charType(cp));
    if (u_isUWhiteSpace(cp) || cp == '_' || category == U_DASH_PUNCTUATION) {
      joiner.separator();
    } else if (u_ispunct(cp) || (cp < 0x80 && std::ispunct(static_cast<int>(cp)))) {
      continue;
    } else if (u_iscntrl(cp)) {
      joiner.separator();
    } else {
      utf8.clear();
      icu::UnicodeString(cp).toUTF8String(utf8);
      joiner.append(utf8);
    }
  }
  return joiner.take();
}

}  // namespace

std::string normalize_term(std::string_view raw, std::string_view name_space) {
  std::string_view body = trim(raw);
  if (!name_space.empty() && body.starts_with(name_space)) {
    body.remove_prefix(name_space.size());
  }
  std::string term = is_ascii(body) ? normalize_ascii(body) : normalize_unicode(body);
  if (term.empty()) throw EmptyTerm(std::string(raw));
  std::string uri;
  uri.reserve(name_space.size() + term.size());
  uri.append(name_space);
  uri.append(term);
  return uri;
}

std::string surface_form(std::string_view uri, std::string_view name_space) {
  if (!name_space.empty() && uri.starts_with(name_space)) {
    uri.remove_prefix(name_space.size());
  }
  std::string out(uri);
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

std::string to_lower(std::string_view text) {
  if (is_ascii(text)) {
    std::string out(text);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  }
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  u.toLower(icu::Locale::getRoot());
  std::string out;
  u.toUTF8String(out);
  return out;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && is_ascii_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_ascii_space(text.back())) text.remove_suffix(1);
  return text;
}

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_ascii_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_ascii_space(text[i])) ++i;
    if (i > start) words.push_back(text.substr(start, i - start));
  }
  return words;
}

std::vector<std::string_view> split(std::string_view text, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.push_back(text.substr(start));
      return fields;
    }
    fields.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> parse_word_list(std::string_view text) {
  std::vector<std::string> words;
  for (std::string_view line : split(text, '\n')) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    words.emplace_back(line);
  }
  return words;
}

}  // namespace riddleforge

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace riddleforge {

inline constexpr std::string_view kDefaultNamespace = "/c/en/";

/// Builds a canonical node URI from free text: Unicode compatibility
/// normalization (NFKC), lowercasing, punctuation removal (hyphens and
/// underscores act as word separators), whitespace runs collapsed to single
/// underscores, namespace prepended.
///
/// Input that already carries `name_space` as a prefix is treated as a
/// canonical URI, so the function is a fixed point on its own output.
///
/// Throws EmptyTerm when nothing survives normalization.
std::string normalize_term(std::string_view raw,
                           std::string_view name_space = kDefaultNamespace);

/// "/c/en/traffic_jam" -> "traffic jam". Strings without the namespace
/// prefix only get the underscore replacement.
std::string surface_form(std::string_view uri,
                         std::string_view name_space = kDefaultNamespace);

// Unicode-aware lowercase of UTF-8 text.
std::string to_lower(std::string_view text);

std::string_view trim(std::string_view text);

std::vector<std::string_view> split_whitespace(std::string_view text);

std::vector<std::string_view> split(std::string_view text, char delimiter);

// Reads a one-entry-per-line list; blank lines and '#' comments are ignored.
std::vector<std::string> parse_word_list(std::string_view text);

}  // namespace riddleforge

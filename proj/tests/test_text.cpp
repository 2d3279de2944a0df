#include <gtest/gtest.h>

#include "riddleforge/error.hpp"
#include "riddleforge/text.hpp"

using namespace riddleforge;

TEST(NormalizeTerm, DeterminerIsKeptUnlessCallerRemovesIt) {
  EXPECT_EQ(normalize_term("A traffic jam", "/c/en/"), "/c/en/a_traffic_jam");
  EXPECT_EQ(normalize_term("traffic jam", "/c/en/"), "/c/en/traffic_jam");
}

TEST(NormalizeTerm, Lowercases) { EXPECT_EQ(normalize_term("Net"), "/c/en/net"); }

TEST(NormalizeTerm, BlankInputThrows) {
  EXPECT_THROW(normalize_term("  "), EmptyTerm);
  EXPECT_THROW(normalize_term(""), EmptyTerm);
  EXPECT_THROW(normalize_term("?!"), EmptyTerm);
}

TEST(NormalizeTerm, PunctuationAndSeparators) {
  EXPECT_EQ(normalize_term("  ice-cream   cone! "), "/c/en/ice_cream_cone");
  EXPECT_EQ(normalize_term("teddy_bear"), "/c/en/teddy_bear");
  EXPECT_EQ(normalize_term("Café"), "/c/en/café");
}

TEST(NormalizeTerm, CompatibilityNormalization) {
  // Fullwidth letters fold to ASCII under NFKC.
  EXPECT_EQ(normalize_term("\xEF\xBC\xA3\xEF\xBC\xA1\xEF\xBC\xB4"), "/c/en/cat");
}

TEST(NormalizeTerm, IsIdempotent) {
  for (const char* raw : {"A traffic jam", "Net", "hot dog", "ÉCOLE", "x-ray machine"}) {
    const std::string once = normalize_term(raw);
    EXPECT_EQ(normalize_term(once), once) << raw;
  }
}

TEST(NormalizeTerm, OtherNamespace) {
  EXPECT_EQ(normalize_term("Chat Noir", "/c/fr/"), "/c/fr/chat_noir");
}

TEST(SurfaceForm, StripsNamespaceAndUnderscores) {
  EXPECT_EQ(surface_form("/c/en/traffic_jam"), "traffic jam");
  EXPECT_EQ(surface_form("catching_fish"), "catching fish");
}

TEST(TextHelpers, SplitAndTrim) {
  EXPECT_EQ(trim("  a b \t"), "a b");
  const auto words = split_whitespace(" this  item\tis ");
  ASSERT_EQ(words.size(), 3u);
  EXPECT_EQ(words[2], "is");
  const auto cols = split("a\t\tb", '\t');
  ASSERT_EQ(cols.size(), 3u);
  EXPECT_EQ(cols[1], "");
}

TEST(TextHelpers, WordListSkipsCommentsAndBlanks) {
  const auto words = parse_word_list("# header\nman\n\n  woman  \n# x\n");
  ASSERT_EQ(words.size(), 2u);
  EXPECT_EQ(words[1], "woman");
}

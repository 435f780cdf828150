#include <gtest/gtest.h>

#include <random>

#include "kgreason/text.hpp"
#include "oracles.hpp"

using namespace kgreason;

TEST(Text, TrimStripsAsciiWhitespaceOnly) {
  EXPECT_EQ(trim("  a b \t\r\n"), "a b");
  EXPECT_EQ(trim(""), "");
  EXPECT_EQ(trim(" \t "), "");
  EXPECT_EQ(trim("\xC2\xA0x"), "\xC2\xA0x");
}

TEST(Text, CanonicalLabelMapsSpacesToUnderscores) {
  EXPECT_EQ(canonical_label(" William Anders "), "William_Anders");
  EXPECT_EQ(canonical_label("William_Anders"), "William_Anders");
  EXPECT_EQ(canonical_label("Food, Inc."), "Food,_Inc.");
}

TEST(Text, QuoteLabelFollowsPromptConvention) {
  EXPECT_EQ(quote_label("Six Shooter"), "'Six Shooter'");
  EXPECT_EQ(quote_label("Al-Zawra'a_SC"), "\"Al-Zawra'a_SC\"");
  EXPECT_EQ(quote_label("say \"hi\""), "'say \"hi\"'");
  EXPECT_EQ(quote_label("it's \"x\""), "'it\\'s \"x\"'");
  EXPECT_EQ(quote_label("a\\b"), "'a\\\\b'");
  EXPECT_EQ(quote_label(""), "''");
}

TEST(Text, RenderListMatchesExampleForm) {
  EXPECT_EQ(render_list({"club", "clubs"}), "['club', 'clubs']");
  EXPECT_EQ(render_list({}), "[]");
}

TEST(Text, ParseFirstListHandlesQuotedAndBareItems) {
  auto items = parse_first_list("Top 2 Answer: ['club', \"clubs\"] trailing [x]");
  ASSERT_TRUE(items);
  EXPECT_EQ(*items, (std::vector<std::string>{"club", "clubs"}));

  items = parse_first_list("[location, birthYear , birthDate]");
  ASSERT_TRUE(items);
  EXPECT_EQ(*items, (std::vector<std::string>{"location", "birthYear", "birthDate"}));

  items = parse_first_list("[]");
  ASSERT_TRUE(items);
  EXPECT_TRUE(items->empty());

  EXPECT_FALSE(parse_first_list("no list here"));
  EXPECT_FALSE(parse_first_list("['open"));
  EXPECT_FALSE(parse_first_list("['a', 'b'"));
}

TEST(Text, ReadQuotedAdvancesPastClosingQuote) {
  std::string_view text = "'it\\'s' rest";
  std::size_t pos = 0;
  auto s = read_quoted(text, pos);
  ASSERT_TRUE(s);
  EXPECT_EQ(*s, "it's");
  EXPECT_EQ(text.substr(pos), " rest");

  pos = 0;
  EXPECT_FALSE(read_quoted("'never closed", pos));
}

TEST(Text, RenderThenParseRoundTripsArbitraryLabels) {
  std::mt19937_64 rng(7);
  const std::vector<std::string> tokens = {"'", "\"", "\\", ",", "[", "]", " ", "##", "é", "a"};
  for (int i = 0; i < 2000; ++i) {
    std::vector<std::string> items;
    const int n = static_cast<int>(rng() % 5);
    for (int k = 0; k < n; ++k) items.push_back(oracle::fuzz_text(rng, tokens));
    const auto parsed = parse_first_list(render_list(items));
    ASSERT_TRUE(parsed) << render_list(items);
    EXPECT_EQ(*parsed, items) << render_list(items);
  }
}

TEST(Text, AsciiLowerLeavesMultibyteAlone) {
  EXPECT_EQ(ascii_lower("TRUE, Amélie"), "true, amélie");
}

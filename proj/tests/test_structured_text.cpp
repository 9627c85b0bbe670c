#include <gtest/gtest.h>

#include <clocale>
#include <cstring>

#include "fmdp/errors.hpp"
#include "fmdp/structured_text.hpp"

using namespace fmdp;

TEST(StructuredText, ParsesSectionsKeysAndComments) {
  std::vector<TextDiagnostic> diag;
  const auto doc = parse_structured_text(
      "# header comment\n[model]\nhorizon = 5\n  name =  two words  \n\n[reward.0]\nkind=bernoulli\n",
      diag);
  ASSERT_TRUE(diag.empty());
  ASSERT_EQ(doc.sections.size(), 2u);
  const auto* model = doc.find("model");
  ASSERT_NE(model, nullptr);
  EXPECT_EQ(model->line, 2u);
  EXPECT_EQ(model->find("horizon")->value, "5");
  EXPECT_EQ(model->find("name")->value, "two words");
  EXPECT_EQ(model->find("name")->line, 4u);
  EXPECT_EQ(doc.find("reward.0")->find("kind")->value, "bernoulli");
  EXPECT_EQ(doc.find("missing"), nullptr);
}

TEST(StructuredText, CollectsEveryProblemWithLineNumbers) {
  std::vector<TextDiagnostic> diag;
  parse_structured_text("[a]\nx = 1\nx = 2\nno equals sign\n[bad\n[a]\n= 3\n", diag);
  ASSERT_EQ(diag.size(), 5u);
  EXPECT_EQ(diag[0].line, 3u);
  EXPECT_EQ(diag[1].line, 4u);
  EXPECT_EQ(diag[2].line, 5u);
  EXPECT_EQ(diag[3].line, 6u);
  EXPECT_EQ(diag[4].line, 7u);
}

TEST(StructuredText, ThrowingOverloadRejectsBadInput) {
  EXPECT_THROW(parse_structured_text("[a]\nbroken\n"), StructuralError);
  EXPECT_NO_THROW(parse_structured_text("[a]\nk = v\n"));
}

TEST(StructuredText, KeysBeforeFirstHeaderGoToUnnamedSection) {
  const auto doc = parse_structured_text("k = v\n[s]\n");
  ASSERT_NE(doc.find(""), nullptr);
  EXPECT_EQ(doc.find("")->find("k")->value, "v");
}

TEST(StructuredText, FormatDoubleRoundTripsExactly) {
  for (double v : {0.1, 1.0 / 3.0, 2.0 / 7.0, 1e-300, 123456789.123456789, 0.0, -2.5, 5e-324}) {
    const auto text = format_double(v);
    const auto back = parse_double(text);
    ASSERT_TRUE(back.has_value()) << text;
    EXPECT_EQ(std::memcmp(&v, &*back, sizeof v), 0) << text;
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.33333333333333331");
}

TEST(StructuredText, FormatDoubleIgnoresLocale) {
  const char* previous = std::setlocale(LC_NUMERIC, nullptr);
  std::string saved = previous ? previous : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") == nullptr) GTEST_SKIP() << "locale unavailable";
  EXPECT_EQ(format_double(1.25), "1.25");
  EXPECT_EQ(parse_double("1.25").value(), 1.25);
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST(StructuredText, NumberParsing) {
  EXPECT_EQ(parse_int("-42").value(), -42);
  EXPECT_FALSE(parse_int("4x").has_value());
  EXPECT_FALSE(parse_uint("-1").has_value());
  EXPECT_EQ(parse_uint("18446744073709551615").value(), 18446744073709551615ULL);
  EXPECT_FALSE(parse_double("").has_value());
  EXPECT_FALSE(parse_double("1.0.0").has_value());
}

TEST(StructuredText, ListHelpers) {
  EXPECT_EQ(parse_double_list("0.5  0.25\t1", "rows"), (std::vector<double>{0.5, 0.25, 1.0}));
  EXPECT_EQ(parse_uint_list("3 1 4", "sizes"), (std::vector<std::uint64_t>{3, 1, 4}));
  EXPECT_THROW(parse_double_list("0.5 abc", "rows"), StructuralError);
  EXPECT_THROW(parse_uint_list("1 -2", "sizes"), StructuralError);
  EXPECT_EQ(trim("  a b \t"), "a b");
  EXPECT_EQ(split("a,b,,c", ',').size(), 4u);
  EXPECT_EQ(split_whitespace("  a  b ").size(), 2u);
}

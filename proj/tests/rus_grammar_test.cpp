#include <gtest/gtest.h>

#include "support.hpp"
#include "ucat/rus_grammar.hpp"

namespace ucat {
namespace {

using K = PlaceholderKind;

RusRule one_rule(const std::string& text) {
  auto rus = parse_rus(text);
  EXPECT_EQ(rus.rules.size(), 1u);
  return rus.rules.at(0);
}

ErrorCode parse_error(const std::string& text) {
  try {
    parse_rus(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for: " << text;
  return ErrorCode::IoError;
}

TEST(RusGrammar, ParsesIndividualActionRule) {
  auto r = one_rule("<I> <R> <I> -> Individual:,<I>,Facts:,<R> <I>");
  std::vector<PatternToken> expected = {Placeholder{K::Individual, false, 1},
                                        Placeholder{K::Relation, false, 2},
                                        Placeholder{K::Individual, false, 3}};
  EXPECT_EQ(r.pattern, expected);
  EXPECT_EQ(r.target.entity_kind, "Individual:");
  EXPECT_EQ(r.target.entity_slot, 1);
  EXPECT_EQ(r.target.property_keyword, "Facts:");
  std::vector<ValuePart> value = {SlotRef{2}, std::string(" "), SlotRef{3}};
  EXPECT_EQ(r.target.value, value);
}

TEST(RusGrammar, DataPropertyRuleCountsPlaceholdersOnly) {
  auto r = one_rule(R"(<I> _has <D>->Individual:,<I>,Facts:,<D>""^^xsd:string)");
  std::vector<PatternToken> expected = {Placeholder{K::Individual, false, 1}, Keyword{"has"},
                                        Placeholder{K::Data, false, 2}};
  EXPECT_EQ(r.pattern, expected);
  std::vector<ValuePart> value = {SlotRef{2}, std::string(R"(""^^xsd:string)")};
  EXPECT_EQ(r.target.value, value);
}

TEST(RusGrammar, MultiRuleHasListIntro) {
  auto r = one_rule("<I> <R> : <I>+ -> Individual:,<I>,Facts:,<R> <I>+");
  ASSERT_EQ(r.pattern.size(), 4u);
  EXPECT_TRUE(std::holds_alternative<ListIntro>(r.pattern[2]));
  EXPECT_EQ(std::get<Placeholder>(r.pattern[3]), (Placeholder{K::Individual, true, 3}));
  EXPECT_TRUE(r.has_multi());
  EXPECT_EQ(render_pattern(r), "<I> <R> : <I>+");
}

TEST(RusGrammar, SampleFileHasThreeRulesAndIgnoresTrailingComments) {
  auto rus = parse_rus(testing::sample("model_upload.rus"));
  ASSERT_EQ(rus.rules.size(), 3u);
  EXPECT_EQ(rus.rules[0].source_line, 1u);
  EXPECT_EQ(rus.rules[2].target.value.size(), 2u);
}

TEST(RusGrammar, BareWordIsKeyword) {
  auto r = one_rule("<I> is a <T> -> Individual:,<I>,Types:,<T>");
  EXPECT_EQ(r.pattern[1], PatternToken(Keyword{"is"}));
  EXPECT_EQ(r.pattern[2], PatternToken(Keyword{"a"}));
  EXPECT_EQ(r.target.property_keyword, "Types:");
}

TEST(RusGrammar, NegatedRuleKeepsLiteralText) {
  auto r = one_rule("<I> does not <R> <I> -> Individual:,<I>,Facts:,not <R> <I>");
  std::vector<ValuePart> value = {std::string("not "), SlotRef{2}, std::string(" "), SlotRef{3}};
  EXPECT_EQ(r.target.value, value);
}

TEST(RusGrammar, Errors) {
  EXPECT_EQ(parse_error("<I> <R> <I>"), ErrorCode::MissingArrow);
  EXPECT_EQ(parse_error("<I> <X> <I> -> Individual:,<I>,Facts:,<I>"), ErrorCode::UnknownTag);
  EXPECT_EQ(parse_error("<I> <R> <I> -> Individual:,<I>,Facts:,<R> <D>"),
            ErrorCode::SlotResolutionError);
  EXPECT_EQ(parse_error("<I> <R> <I> -> Individual:,<I>,<R> <I>"), ErrorCode::TupleArityError);
  EXPECT_EQ(parse_error("<I>+ <R> <I> -> Individual:,<I>,Facts:,<R> <I>"),
            ErrorCode::MultiNotLast);
}

TEST(RusGrammar, ErrorsCarryLineNumbers) {
  try {
    parse_rus("// header\n<I> <R> <I> -> Individual:,<I>,Facts:,<R> <I>\n<I> <R> <I>\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingArrow);
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(RusGrammar, CheckCollectsEveryError) {
  auto errs = check_rus("<I> <R> <I>\n<I> <Q> <I> -> a,<I>,b,<I>\n");
  ASSERT_EQ(errs.size(), 2u);
  EXPECT_EQ(errs[0].code(), ErrorCode::MissingArrow);
  EXPECT_EQ(errs[1].code(), ErrorCode::UnknownTag);
}

TEST(RusGrammar, ParseIsDeterministic) {
  auto text = testing::sample("model_upload.rus");
  EXPECT_EQ(parse_rus(text), parse_rus(text));
}

TEST(RusGrammar, SlotTotality) {
  for (const auto& r : parse_rus(testing::sample("model_upload.rus")).rules) {
    EXPECT_TRUE(r.placeholder(r.target.entity_slot).has_value());
    for (const auto& part : r.target.value)
      if (const auto* ref = std::get_if<SlotRef>(&part))
        EXPECT_TRUE(r.placeholder(ref->slot).has_value());
  }
}

TEST(Matcher, SingleStatement) {
  auto m = testing::sample_matcher();
  auto res = m.match("user clicks newModel");
  ASSERT_TRUE(res);
  EXPECT_EQ(res.match->rule_index, 0u);
  Captures expected = {{1, "user"}, {2, "clicks"}, {3, "newModel"}};
  EXPECT_EQ(res.match->captures, expected);
}

TEST(Matcher, MultiStatement) {
  auto m = testing::sample_matcher();
  auto res = m.match("user inserts : name, description");
  ASSERT_TRUE(res);
  EXPECT_EQ(res.match->rule_index, 1u);
  Captures expected = {{1, "user"},
                       {2, "inserts"},
                       {3, std::vector<std::string>{"name", "description"}}};
  EXPECT_EQ(res.match->captures, expected);
}

TEST(Matcher, TooFewTokensMatchesNothing) {
  auto res = testing::sample_matcher().match("user clicks");
  EXPECT_FALSE(res);
  EXPECT_EQ(res.failures.size(), 3u);
}

TEST(Matcher, PunctuationIsStandalone) {
  EXPECT_EQ(tokenize_statement("a b:c,d"), (std::vector<std::string>{"a", "b", ":", "c", ",", "d"}));
}

TEST(Matcher, MalformedListsAreRejected) {
  auto m = testing::sample_matcher();
  EXPECT_FALSE(m.match("user inserts :"));
  EXPECT_FALSE(m.match("user inserts : a,"));
  EXPECT_FALSE(m.match("user inserts : a,, b"));
  EXPECT_FALSE(m.match("user inserts : a b"));
}

TEST(Matcher, FirstMatchWins) {
  auto m = testing::sample_matcher();
  auto res = m.match("x has secret");
  ASSERT_TRUE(res);
  EXPECT_EQ(res.match->rule_index, 0u);
}

TEST(Matcher, KeywordsAreCaseSensitive) {
  auto m = compile_matcher(parse_rus(R"(<I> _has <D>->Individual:,<I>,Facts:,<D>""^^xsd:string)"));
  EXPECT_TRUE(m.match("x has secret"));
  EXPECT_FALSE(m.match("x Has secret"));
}

TEST(Matcher, PunctuationIsNeverCaptured) {
  auto m = testing::sample_matcher();
  for (const auto* line : {"a b c", "a b : c", "a b : c, d, e", "a has b", "a , b", ": a b"}) {
    auto res = m.match(line);
    if (!res) continue;
    for (const auto& [slot, cap] : res.match->captures) {
      if (const auto* one = std::get_if<std::string>(&cap)) {
        EXPECT_NE(*one, ":");
        EXPECT_NE(*one, ",");
      } else {
        for (const auto& item : std::get<std::vector<std::string>>(cap)) {
          EXPECT_NE(item, ":");
          EXPECT_NE(item, ",");
        }
      }
    }
  }
}

}  // namespace
}  // namespace ucat

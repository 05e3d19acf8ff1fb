#include <gtest/gtest.h>

#include "support.hpp"
#include "ucat/type_assignment.hpp"

namespace ucat {
namespace {

ErrorCode types_error(const std::string& text) {
  try {
    parse_types(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for: " << text;
  return ErrorCode::IoError;
}

TEST(Types, SingleAssignment) {
  auto t = parse_types("class Actor\nuser: Actor\n");
  EXPECT_EQ(t.types.assignments, (std::map<std::string, std::set<std::string>>{{"user", {"Actor"}}}));
}

TEST(Types, MultipleClasses) {
  auto t = parse_types("class Field\nclass Text\nname: Field, Text\n");
  EXPECT_EQ(t.types.assignments.at("name"), (std::set<std::string>{"Field", "Text"}));
}

TEST(Types, SubclassEdgeRecorded) {
  auto t = parse_types("class Text < Object\nx: Text\n");
  ASSERT_EQ(t.classes.size(), 2u);
  EXPECT_EQ(t.classes[0], (ClassDecl{"Text", {"Object"}}));
  EXPECT_EQ(t.classes[1], (ClassDecl{"Object", {}}));
}

TEST(Types, DuplicateAssignmentMergesWithWarning) {
  auto t = parse_types("class A\nclass B\nx: A\nx: B\n");
  EXPECT_EQ(t.types.assignments.at("x"), (std::set<std::string>{"A", "B"}));
  ASSERT_EQ(t.warnings.size(), 1u);
  EXPECT_EQ(t.warnings[0].code, "DuplicateAssignmentLine");
  EXPECT_EQ(t.warnings[0].line, 4u);
}

TEST(Types, Errors) {
  EXPECT_EQ(types_error("user: Actor\n"), ErrorCode::UndeclaredClass);
  EXPECT_EQ(types_error("class A < B\nclass B < A\n"), ErrorCode::SubclassCycle);
  EXPECT_EQ(types_error("class A < A\n"), ErrorCode::SubclassCycle);
  EXPECT_EQ(types_error("just words\n"), ErrorCode::MalformedTypes);
  EXPECT_EQ(types_error("class A\nx:\n"), ErrorCode::MalformedTypes);
}

TEST(Types, RenderRoundTrip) {
  auto t = parse_types(testing::sample("model_upload.types"));
  auto again = parse_types(render_types(t.classes, t.types));
  EXPECT_EQ(again.classes, t.classes);
  EXPECT_EQ(again.types, t.types);
}

class SampleValidation : public ::testing::Test {
 protected:
  EntitySet entities =
      extract(testing::parse_text(testing::sample("model_upload.usecase")).statements).entities;
};

TEST_F(SampleValidation, SampleTypesCoverEveryIndividual) {
  auto r = validate_assignment(entities, parse_types(testing::sample("model_upload.types")).types);
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.unknown_individuals.empty());
}

TEST_F(SampleValidation, EmptyMapLeavesAllUntyped) {
  auto r = validate_assignment(entities, {});
  EXPECT_EQ(r.untyped, testing::kIndividuals);
}

TEST_F(SampleValidation, UnknownIndividualIsReported) {
  auto types = parse_types(testing::sample("model_upload.types") + "ghost: Actor\n").types;
  auto r = validate_assignment(entities, types);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.unknown_individuals, std::vector<std::string>{"ghost"});
}

}  // namespace
}  // namespace ucat

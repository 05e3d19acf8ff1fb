#include <set>

#include <gtest/gtest.h>

#include "support.hpp"
#include "ucat/brute_force.hpp"
#include "ucat/query_eval.hpp"

namespace ucat::query {
namespace {

std::set<Binding> as_set(const std::vector<Binding>& rows) { return {rows.begin(), rows.end()}; }

TEST(OracleEquivalence, RandomGraphsAndQueries) {
  testing::QueryCaseGenerator gen(12345);
  int non_empty = 0, with_filter = 0;
  for (int i = 0; i < 600; ++i) {
    auto g = gen.graph();
    auto q = gen.query();
    auto fast = eval_select(q, g);
    auto slow = brute_force_eval(q, g);
    ASSERT_EQ(as_set(fast), as_set(slow)) << "case " << i;
    EXPECT_EQ(fast.size(), as_set(fast).size()) << "duplicate rows in case " << i;
    non_empty += !fast.empty();
    with_filter += !q.body.not_exists.empty();
  }
  // Guard against a degenerate generator.
  EXPECT_GT(non_empty, 100);
  EXPECT_GT(with_filter, 100);
}

}  // namespace
}  // namespace ucat::query

#include <gtest/gtest.h>

#include "fjl/evaluator.hpp"
#include "fjl/harness/generator.hpp"
#include "fjl/subtyping.hpp"
#include "oracles.hpp"
#include "example_tables.hpp"

namespace fjl {
namespace {

using testing::SubtypeClosure;
using testing::table;
using testing::term;
using testing::type;

void expect_agreement(const ClassTable& ct) {
  SubtypeClosure closure(ct);
  const auto& u = closure.universe();
  for (const auto& a : u) {
    for (const auto& b : u) {
      ASSERT_EQ(subtype(ct, a, b), *closure.subtype(a, b)) << pretty(a) << " <: " << pretty(b);
    }
  }
  for (const auto& a : u) {
    for (const auto& b : u) {
      ASSERT_EQ(lub(ct, a, b), closure.enumerated_lub(ct, a, b))
          << "lub " << pretty(a) << ", " << pretty(b);
    }
  }
}

TEST(Oracles, SubtypingAndJoinOnExampleTables) {
  expect_agreement(table(testing::kSimpleTable));
  expect_agreement(table(testing::kDefaultTable));
  expect_agreement(table(testing::kLubTable));
}

TEST(Oracles, SubtypingAndJoinOnGeneratedTables) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    harness::GenConfig cfg;
    cfg.seed = seed;
    expect_agreement(harness::gen_table(cfg));
  }
}

TEST(Oracles, JoinIsBelowEveryMinimalCommonSupertype) {
  ClassTable ct = table(testing::kLubTable);
  SubtypeClosure closure(ct);
  for (const char* a : {"A", "B", "D", "C & I", "I"}) {
    for (const char* b : {"A", "B", "D", "I & E"}) {
      auto j = lub(ct, type(a), type(b));
      ASSERT_TRUE(j && closure.contains(*j));
      for (const auto& m : closure.minimal_common_supertypes(type(a), type(b))) {
        EXPECT_TRUE(*closure.subtype(*j, m)) << a << " " << b << " " << pretty(m);
      }
    }
  }
}

TEST(Oracles, AllReductionsFindsTheEvaluatorStep) {
  ClassTable ct = table(testing::kLubTable);
  Evaluator ev(ct);
  for (const char* src : {"new C().m(() -> new C())", "[() -> new C() : I].n()",
                          "(C)(new B())", "(I & E)(() -> new C())", "true ? new A() : new B()",
                          "new C().m((I)(new B()))"}) {
    auto all = testing::all_reductions(ct, term(src));
    ASSERT_EQ(all.size(), 1u) << src;
    StepResult s = ev.step(term(src));
    EXPECT_EQ(all[0].rule, s.rule) << src;
    EXPECT_EQ(all[0].result, s.term) << src;
  }
  EXPECT_TRUE(testing::all_reductions(ct, term("(C)(new Object())")).empty());
  EXPECT_TRUE(testing::all_reductions(ct, term("new B()")).empty());
}

}  // namespace
}  // namespace fjl

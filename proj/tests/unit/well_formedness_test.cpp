#include <gtest/gtest.h>

#include "fjl/error.hpp"
#include "fjl/parser.hpp"
#include "fjl/well_formedness.hpp"
#include "example_tables.hpp"

namespace fjl {
namespace {

using testing::table;

std::vector<std::string> premises(std::string_view src) {
  std::vector<std::string> out;
  for (const auto& e : ok_table(table(src))) out.push_back(e.premise);
  return out;
}

TEST(WellFormedness, ExampleTablesAreWellFormed) {
  EXPECT_TRUE(ok_table(table(testing::kSimpleTable)).empty());
  EXPECT_TRUE(ok_table(table(testing::kDefaultTable)).empty());
  EXPECT_TRUE(ok_table(table(testing::kLubTable)).empty());
}

TEST(WellFormedness, ConstructorShape) {
  EXPECT_EQ(premises("class A extends Object { Object f; A() { super(); } }"),
            std::vector<std::string>{premise::kConstructorShape});
  EXPECT_EQ(premises(R"(
    class A extends Object { Object f; A(Object f) { super(); this.f = f; } }
    class B extends A { B() { super(); } }
  )"),
            std::vector<std::string>{premise::kFieldForwarding});
  EXPECT_TRUE(premises(R"(
    class A extends Object { Object f; A(Object f) { super(); this.f = f; } }
    class B extends A { Object g; B(Object f, Object g) { super(f); this.g = g; } }
  )").empty());
}

TEST(WellFormedness, MethodBodies) {
  auto errors = ok_table(table(R"(
    class A extends Object { A() { super(); } A m() { return new Object(); } }
  )"));
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_EQ(errors[0].premise, premise::kMethodBody);
  EXPECT_EQ(errors[0].decl, "A");
  EXPECT_EQ(errors[0].method, "m");
  EXPECT_EQ(premises("interface I { Object m() { return x; } }"),
            std::vector<std::string>{premise::kMethodBody});
}

TEST(WellFormedness, Implementations) {
  EXPECT_EQ(premises("interface I { Object m(); } "
                     "class A extends Object implements I { A() { super(); } }"),
            std::vector<std::string>{premise::kUnimplementedMethod});
  EXPECT_TRUE(premises("interface I { Object m() { return new Object(); } } "
                       "class A extends Object implements I { A() { super(); } }")
                  .empty());
}

TEST(WellFormedness, HeaderConflicts) {
  EXPECT_EQ(premises("interface I { Object m(); } interface J { Object m(Object x); } "
                     "interface K extends I, J { }"),
            std::vector<std::string>{premise::kMhUndefined});
  EXPECT_EQ(premises("interface I { Object m() { return new Object(); } } "
                     "interface J { Object m() { return new Object(); } } "
                     "interface K extends I, J { }"),
            std::vector<std::string>{premise::kAmbiguousDefault});
  EXPECT_EQ(premises("class A extends Object { A() { super(); } Object m() { return new A(); } } "
                     "class B extends A { B() { super(); } A m() { return new A(); } }"),
            std::vector<std::string>{premise::kMhUndefined});
}

TEST(WellFormedness, OverridingDefaultInSubinterface) {
  EXPECT_TRUE(premises("interface I { Object m() { return new Object(); } } "
                       "interface J extends I { Object m() { return this; } } "
                       "interface K extends I, J { }")
                  .empty());
}

TEST(WellFormedness, Headers) {
  EXPECT_THROW(table("interface I { Object m(Object x, Object x); }"), ParseError);
  EXPECT_THROW(table("interface I { } interface J { Object m(I & J x); }"), ParseError);
  // Built directly, the same header reaches the checker.
  auto decls = parse_program("interface I { } interface J { Object m(Object x); }").decls;
  std::get<InterfaceDecl>(decls[1]).abstracts[0].params[0].type = PreType::intersection({"I", "J"});
  auto errors = ok_table(ClassTable(decls));
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_EQ(errors[0].premise, premise::kMalformedHeader);
  EXPECT_EQ(premises("interface I { Nope m(); }"),
            std::vector<std::string>{premise::kUnknownType});
  EXPECT_EQ(premises("class A extends Object { A() { super(); } Object m() { return this; } "
                     "Object m() { return this; } }"),
            std::vector<std::string>{premise::kDuplicateMember});
}

TEST(CheckProgram, Aggregates) {
  SourceProgram ok = parse_program(std::string(testing::kSimpleTable) +
                                   "main = new C().m(() -> new C());");
  ProgramCheck c = check_program(ok);
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c.judgement->type(), PreType::nominal("C"));

  SourceProgram unbound = parse_program(std::string(testing::kSimpleTable) + "main = x;");
  ProgramCheck u = check_program(unbound);
  EXPECT_FALSE(u.ok());
  EXPECT_TRUE(u.table_findings.empty());
  EXPECT_EQ(u.judgement->error().kind, TypeErrorKind::UnboundVar);

  SourceProgram cyclic = parse_program(
      "class A extends B { A() { super(); } } class B extends A { B() { super(); } } "
      "main = new A();");
  ProgramCheck y = check_program(cyclic);
  EXPECT_FALSE(y.ok());
  EXPECT_TRUE(y.table_error.has_value());
}

}  // namespace
}  // namespace fjl

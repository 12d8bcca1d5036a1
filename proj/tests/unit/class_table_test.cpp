#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "fjl/class_table.hpp"
#include "fjl/error.hpp"
#include "example_tables.hpp"

namespace fjl {
namespace {

using testing::table;
using testing::type;

MethodHeader header(std::string_view src) {
  // "R name(T1 x1, ...)" through a throwaway interface.
  auto p = parse_program("interface Tmp { " + std::string(src) + "; }");
  return std::get<InterfaceDecl>(p.decls[0]).abstracts[0];
}

HeaderSet headers(std::initializer_list<std::string_view> hs) {
  HeaderSet out;
  for (auto h : hs) out.insert(header(h));
  return out;
}

class SimpleTable : public ::testing::Test {
 protected:
  ClassTable ct = table(testing::kSimpleTable);
};

TEST_F(SimpleTable, HeaderUnionOfClassAndInterface) {
  auto mh = ct.mh(type("C & I"));
  ASSERT_TRUE(mh.has_value());
  EXPECT_EQ(*mh, headers({"C m(I x)", "C n()"}));
}

TEST_F(SimpleTable, ClashingHeadersUndefined) {
  auto look = ct.mh_lookup(type("C & J"));
  EXPECT_FALSE(look.defined());
  ASSERT_TRUE(look.conflict.has_value());
  EXPECT_EQ(look.conflict->kind, ConflictKind::HeaderClash);
  EXPECT_EQ(look.conflict->method, "m");
}

TEST_F(SimpleTable, ObjectHasNoHeaders) {
  auto mh = ct.mh(type("Object"));
  ASSERT_TRUE(mh.has_value());
  EXPECT_TRUE(mh->empty());
}

TEST_F(SimpleTable, AbstractHeaders) {
  EXPECT_EQ(*ct.a_mh(type("I")), headers({"C n()"}));
  EXPECT_TRUE(ct.d_mh(type("I"))->empty());
}

TEST_F(SimpleTable, IsType) {
  EXPECT_TRUE(ct.is_type(type("C & I")));
  EXPECT_FALSE(ct.is_type(type("C & J")));
  EXPECT_TRUE(ct.is_type(PreType::boolean()));
}

TEST_F(SimpleTable, FunctionalTypes) {
  auto h = ct.functional_header(type("I & E"));
  ASSERT_TRUE(h.has_value());
  EXPECT_TRUE(same_signature(*h, header("C n()")));
  EXPECT_FALSE(ct.functional_header(type("I & J")).has_value());
  EXPECT_FALSE(ct.functional_header(type("C & I")).has_value());
  EXPECT_FALSE(ct.functional_header(type("E")).has_value());
}

TEST_F(SimpleTable, Fields) {
  EXPECT_TRUE(ct.fields(kObject).empty());
  EXPECT_TRUE(ct.fields("C").empty());
  EXPECT_THROW(ct.fields("I"), LookupError);
  EXPECT_THROW(ct.fields("Nope"), LookupError);
}

TEST_F(SimpleTable, MethodTypes) {
  auto m = ct.mtype("m", type("C"));
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->params, std::vector<PreType>{type("I")});
  EXPECT_EQ(m->result, type("C"));
  auto n = ct.mtype("n", type("I & E"));
  ASSERT_TRUE(n.has_value());
  EXPECT_TRUE(n->params.empty());
  EXPECT_EQ(n->result, type("C"));
  EXPECT_FALSE(ct.mtype("p", type("Object")).has_value());
}

TEST_F(SimpleTable, MethodBodies) {
  auto b = ct.mbody("m", type("C"));
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->params, std::vector<Name>{"x"});
  EXPECT_EQ(b->body, testing::term("x.n()"));
  EXPECT_EQ(b->provider, "C");
  EXPECT_FALSE(ct.mbody("n", type("I")).has_value());
}

TEST_F(SimpleTable, ShapeOfPreTypes) {
  EXPECT_FALSE(ct.shape_error(type("C & I")).has_value());
  EXPECT_TRUE(ct.shape_error(type("I & C")).has_value());
  EXPECT_TRUE(ct.shape_error(type("I & I")).has_value());
  EXPECT_TRUE(ct.shape_error(type("C & Object")).has_value());
  EXPECT_EQ(ct.class_head(type("C & I")), std::optional<Name>("C"));
  EXPECT_EQ(ct.interface_part(type("C & I & E")), (std::vector<Name>{"I", "E"}));
}

TEST_F(SimpleTable, CacheAgreesWithRecomputation) {
  for (const char* t : {"C", "I", "C & I", "C & J", "I & E", "I & J & E"}) {
    EXPECT_EQ(ct.mh(type(t)), ct.mh_uncached(type(t))) << t;
  }
}

TEST_F(SimpleTable, ConcurrentLookupsAgree) {
  const auto expected = ct.mh(type("C & I & E"));
  std::vector<std::thread> threads;
  std::atomic<int> mismatches{0};
  for (int k = 0; k < 4; ++k) {
    threads.emplace_back([&, k] {
      ClassTable copy = ct;
      for (int i = 0; i < 200; ++i) {
        if (copy.mh(type("C & I & E")) != expected) ++mismatches;
        (void)copy.mh(type(k % 2 ? "I & E" : "C & J"));
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(mismatches.load(), 0);
}

TEST(DefaultTable, DefaultHeadersAndBodies) {
  ClassTable ct = table(testing::kDefaultTable);
  EXPECT_EQ(*ct.d_mh(type("J")), headers({"Object m()"}));
  EXPECT_TRUE(ct.a_mh(type("J"))->empty());
  auto h = ct.functional_header(type("I & J"));
  ASSERT_TRUE(h.has_value());
  EXPECT_TRUE(same_signature(*h, header("C n()")));
  auto b = ct.mbody("m", type("I & J"));
  ASSERT_TRUE(b.has_value());
  EXPECT_TRUE(b->params.empty());
  EXPECT_EQ(b->body, testing::term("new Object()"));
  EXPECT_EQ(b->provider, "J");
}

TEST(DefaultTable, UnrelatedDefaultsAreAmbiguous) {
  ClassTable ct = table(R"(
    interface I1 { Object m() { return new Object(); } }
    interface I2 { Object m() { return new Object(); } }
  )");
  auto look = ct.d_mh_lookup(type("I1 & I2"));
  EXPECT_FALSE(look.defined());
  EXPECT_EQ(look.conflict->kind, ConflictKind::DefaultAmbiguity);
  EXPECT_FALSE(ct.is_type(type("I1 & I2")));
}

TEST(DefaultTable, OverridingDefaultIsNotAmbiguous) {
  ClassTable ct = table(R"(
    interface I1 { Object m() { return new Object(); } }
    interface I2 extends I1 { Object m() { return this; } }
  )");
  EXPECT_TRUE(ct.is_type(type("I1 & I2")));
  auto b = ct.mbody("m", type("I1 & I2"));
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->provider, "I2");
}

TEST(DefaultTable, AbstractAgainstDefaultClash) {
  ClassTable ct = table(R"(
    interface I1 { Object m(); }
    interface I2 { Object m() { return new Object(); } }
  )");
  auto look = ct.mh_lookup(type("I1 & I2"));
  EXPECT_FALSE(look.defined());
  EXPECT_EQ(look.conflict->kind, ConflictKind::AbstractDefaultClash);
}

TEST(Fields, InheritedFirst) {
  ClassTable ct = table(R"(
    class T extends Object { T() { super(); } }
    class U extends Object { U() { super(); } }
    class P extends Object { T f; P(T f) { super(); this.f = f; } }
    class Q extends P { U g; Q(T f, U g) { super(f); this.g = g; } }
  )");
  auto fs = ct.fields("Q");
  ASSERT_EQ(fs.size(), 2u);
  EXPECT_EQ(fs[0], (TypedName{type("T"), "f"}));
  EXPECT_EQ(fs[1], (TypedName{type("U"), "g"}));
}

TEST(Construction, RejectsBadTables) {
  auto kind = [](std::string_view src) {
    try {
      table(src);
    } catch (const TableError& e) {
      return std::optional<TableErrorKind>(e.kind());
    }
    return std::optional<TableErrorKind>();
  };
  EXPECT_EQ(kind("class A extends B { A() { super(); } } class B extends A { B() { super(); } }"),
            TableErrorKind::Cycle);
  EXPECT_EQ(kind("interface I extends I { }"), TableErrorKind::Cycle);
  EXPECT_EQ(kind("class A extends Nope { A() { super(); } }"), TableErrorKind::UnknownName);
  EXPECT_EQ(kind("interface I { } class A extends I { A() { super(); } }"),
            TableErrorKind::WrongKind);
  EXPECT_EQ(kind("class A extends Object implements A { A() { super(); } }"),
            TableErrorKind::WrongKind);
  EXPECT_THROW(table("class Object extends Object { Object() { super(); } }"), ParseError);
  EXPECT_FALSE(kind(testing::kLubTable).has_value());
}

TEST(Construction, NominalSubtyping) {
  ClassTable ct = table(testing::kLubTable);
  EXPECT_TRUE(ct.nominal_subtype("B", "C"));
  EXPECT_TRUE(ct.nominal_subtype("B", "I"));
  EXPECT_TRUE(ct.nominal_subtype("B", kObject));
  EXPECT_FALSE(ct.nominal_subtype("A", "I"));
  EXPECT_FALSE(ct.nominal_subtype("C", "B"));
  EXPECT_EQ(ct.supertypes("B"), (std::set<Name>{"A", "C", "I", kObject}));
}

}  // namespace
}  // namespace fjl

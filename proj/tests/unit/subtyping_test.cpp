#include <gtest/gtest.h>

#include "fjl/subtyping.hpp"
#include "example_tables.hpp"

namespace fjl {
namespace {

using testing::table;
using testing::type;

class LubTable : public ::testing::Test {
 protected:
  ClassTable ct = table(testing::kLubTable);
  bool sub(const char* a, const char* b) { return subtype(ct, type(a), type(b)); }
};

TEST_F(LubTable, ObjectIsTop) {
  EXPECT_TRUE(sub("C", "Object"));
  EXPECT_TRUE(sub("I & E", "Object"));
  EXPECT_FALSE(sub("Object", "C"));
}

TEST_F(LubTable, ObjectInIntersectionIsInert) {
  EXPECT_TRUE(sub("I", "Object & I"));
  EXPECT_TRUE(sub("Object & I", "I"));
  EXPECT_TRUE(equiv(ct, type("I"), type("Object & I")));
}

TEST_F(LubTable, IntersectionRules) {
  EXPECT_TRUE(sub("I & E", "I"));
  EXPECT_FALSE(sub("I", "I & E"));
  EXPECT_TRUE(sub("I & E", "E & I"));
  EXPECT_TRUE(sub("B", "C & I"));
  EXPECT_TRUE(sub("B", "A & I"));
  EXPECT_FALSE(sub("A", "C & I"));
  EXPECT_TRUE(sub("D & E", "I & E & C"));
}

TEST_F(LubTable, Boolean) {
  EXPECT_TRUE(subtype(ct, PreType::boolean(), PreType::boolean()));
  EXPECT_FALSE(subtype(ct, PreType::boolean(), type("Object")));
  EXPECT_FALSE(subtype(ct, type("C"), PreType::boolean()));
}

TEST_F(LubTable, Equivalence) {
  EXPECT_FALSE(equiv(ct, type("B"), type("D")));
  EXPECT_TRUE(equiv(ct, type("C & I"), type("C & I")));
  EXPECT_TRUE(equiv(ct, type("I & E"), type("E & I")));
}

TEST_F(LubTable, ClassComponent) {
  EXPECT_EQ(class_component(ct, type("C & I")), "C");
  EXPECT_EQ(class_component(ct, type("I & E")), kObject);
  EXPECT_EQ(class_component(ct, type("D")), "D");
}

TEST_F(LubTable, JoinOfSiblings) {
  EXPECT_EQ(lub(ct, type("B"), type("D")), type("C & I"));
  EXPECT_EQ(lub(ct, type("I"), type("B")), type("I"));
  EXPECT_EQ(lub(ct, type("B"), type("I")), type("I"));
  EXPECT_EQ(lub(ct, type("A"), type("D")), type("C"));
  EXPECT_EQ(lub(ct, type("B"), type("B")), type("B & I"));
  EXPECT_EQ(lub(ct, type("C"), type("E")), type("Object"));
}

TEST_F(LubTable, JoinWithBoolean) {
  EXPECT_EQ(lub(ct, PreType::boolean(), PreType::boolean()), PreType::boolean());
  EXPECT_FALSE(lub(ct, PreType::boolean(), type("C")).has_value());
}

TEST_F(LubTable, JoinIsCommonSupertype) {
  for (const char* a : {"A", "B", "C", "D", "I", "E", "B & E", "I & E"}) {
    for (const char* b : {"A", "B", "C", "D", "I", "E", "D & E"}) {
      auto j = lub(ct, type(a), type(b));
      ASSERT_TRUE(j.has_value());
      EXPECT_TRUE(sub(a, pretty(*j).c_str())) << a << " " << b;
      EXPECT_TRUE(sub(b, pretty(*j).c_str())) << a << " " << b;
      EXPECT_TRUE(equiv(ct, *j, *lub(ct, type(b), type(a)))) << a << " " << b;
    }
  }
}

TEST(Lub, KeepsOnlyMinimalInterfaces) {
  ClassTable ct = table(R"(
    interface K { }
    interface L extends K { }
    class P extends Object implements L { P() { super(); } }
    class Q extends Object implements L, K { Q() { super(); } }
  )");
  EXPECT_EQ(lub(ct, type("P"), type("Q")), type("L"));
}

TEST(Lub, JoinNeedNotHaveHeaders) {
  // D's own declaration lists I2, whose default m clashes with the abstract
  // m that reaches D through I1; D is still a type because D' implements m.
  ClassTable ct = table(R"(
    interface I1 { Object m(); }
    interface I2 { Object m() { return new Object(); } }
    class Dp extends Object implements I1 {
      Dp() { super(); }
      Object m() { return new Object(); }
    }
    class D extends Dp implements I2 { D() { super(); } }
  )");
  ASSERT_TRUE(ct.is_type(type("D")));
  auto j = lub(ct, type("D"), type("D"));
  ASSERT_TRUE(j.has_value());
  EXPECT_EQ(*j, type("D & I1 & I2"));
  EXPECT_FALSE(ct.is_type(*j));
}

}  // namespace
}  // namespace fjl

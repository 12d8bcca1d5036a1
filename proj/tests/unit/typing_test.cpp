#include <gtest/gtest.h>

#include "fjl/parser.hpp"
#include "fjl/subtyping.hpp"
#include "fjl/typing.hpp"
#include "example_tables.hpp"

namespace fjl {
namespace {

using testing::table;
using testing::term;
using testing::type;

class Typing : public ::testing::Test {
 protected:
  ClassTable ct = table(testing::kLubTable);

  Judgement infer(const char* src, TypingOptions o = {}) { return t_inf(ct, env, term(src), o); }
  Judgement check(const char* src, const char* expected) {
    return t_ck(ct, env, term(src), type(expected));
  }
  std::optional<TypeErrorKind> error_of(const Judgement& j) {
    if (j.ok()) return std::nullopt;
    return j.error().kind;
  }

  TypeEnv env;
};

TEST_F(Typing, InvocationWithLambdaArgument) {
  Judgement j = infer("new C().m(() -> new C())");
  ASSERT_TRUE(j.ok()) << j.error().detail;
  EXPECT_EQ(j.type(), type("C"));
  std::vector<std::string> expected{"T-NEW", "T-NEW", "⊢⊢*", "T-λUD", "⊢⊢*", "T-INVK"};
  EXPECT_EQ(j.rule_trace, expected);
  ASSERT_NE(j.derivation, nullptr);
  EXPECT_EQ(j.derivation->rule, "T-INVK");
  EXPECT_EQ(j.derivation->premises.size(), 2u);
}

TEST_F(Typing, PureLambdaHasNoSynthesisedType) {
  EXPECT_EQ(error_of(infer("() -> new C()")), TypeErrorKind::LambdaNeedsTarget);
  EXPECT_EQ(error_of(infer("(I x) -> new C()")), TypeErrorKind::LambdaNeedsTarget);
}

TEST_F(Typing, ConditionalArgumentDecoratesBranches) {
  Judgement j = infer("new C().m(true ? () -> new C() : new B())");
  ASSERT_TRUE(j.ok()) << j.error().detail;
  EXPECT_EQ(j.type(), type("C"));
  EXPECT_TRUE(j.uses_rule("T-COND"));
  EXPECT_TRUE(j.uses_rule("T-λUD"));
}

TEST_F(Typing, ConditionalTakesTheJoin) {
  EXPECT_EQ(infer("true ? new B() : new D()").type(), type("C & I"));
  EXPECT_EQ(infer("false ? new A() : new D()").type(), type("C"));
  EXPECT_EQ(infer("true ? true : false").type(), PreType::boolean());
  EXPECT_EQ(error_of(infer("true ? true : new C()")), TypeErrorKind::CondBranchMismatch);
  EXPECT_EQ(error_of(infer("new C() ? new C() : new C()")), TypeErrorKind::NotBooleanGuard);
  EXPECT_EQ(error_of(infer("true ? () -> new C() : new C()")), TypeErrorKind::LambdaNeedsTarget);
}

TEST_F(Typing, ConditionalJoinIsAboveBothBranches) {
  for (const char* a : {"new A()", "new B()", "new C()", "new D()", "new Object()"}) {
    for (const char* b : {"new A()", "new B()", "new C()", "new D()", "new Object()"}) {
      std::string src = std::string("true ? ") + a + " : " + b;
      Judgement j = t_inf(ct, env, term(src));
      ASSERT_TRUE(j.ok()) << src;
      EXPECT_TRUE(subtype(ct, infer(a).type(), j.type())) << src;
      EXPECT_TRUE(subtype(ct, infer(b).type(), j.type())) << src;
    }
  }
}

TEST_F(Typing, Checking) {
  EXPECT_TRUE(check("() -> new C()", "I").ok());
  EXPECT_TRUE(check("() -> new B()", "I").ok());
  EXPECT_TRUE(check("new B()", "I").ok());
  EXPECT_TRUE(check("new B()", "C & I").ok());
  EXPECT_FALSE(check("new A()", "I").ok());
  EXPECT_EQ(error_of(check("() -> new C()", "C")), TypeErrorKind::TargetNotFunctional);
  EXPECT_EQ(error_of(check("() -> new C()", "E")), TypeErrorKind::TargetNotFunctional);
  EXPECT_EQ(error_of(check("(x) -> new C()", "I")), TypeErrorKind::ArityMismatch);
  EXPECT_EQ(error_of(check("() -> new Object()", "I")), TypeErrorKind::BodyMismatch);
  EXPECT_TRUE(check("true ? () -> new C() : () -> new D()", "I").ok());
}

TEST_F(Typing, CheckingAgreesWithSynthesisOutsideLambdas) {
  for (const char* t : {"new A()", "new B()", "new D()", "new C().m(new B())", "(I)(new B())"}) {
    for (const char* goal : {"Object", "C", "I", "C & I", "A", "I & E"}) {
      bool expected = subtype(ct, infer(t).type(), type(goal));
      EXPECT_EQ(check(t, goal).ok(), expected) << t << " against " << goal;
    }
  }
}

TEST(TypedLambda, AnnotationsMustMatchExactly) {
  ClassTable ct = table(R"(
    class C extends Object { C() { super(); } }
    class S extends C { S() { super(); } }
    interface F { C apply(C c); }
  )");
  EXPECT_TRUE(t_ck(ct, {}, term("(C c) -> c"), type("F")).ok());
  EXPECT_TRUE(t_ck(ct, {}, term("(c) -> new S()"), type("F")).ok());
  Judgement narrow = t_ck(ct, {}, term("(S c) -> c"), type("F"));
  ASSERT_FALSE(narrow.ok());
  EXPECT_EQ(narrow.error().kind, TypeErrorKind::ParamAnnotationMismatch);
  Judgement typed = t_ck(ct, {}, term("(C c) -> c"), type("F"));
  EXPECT_TRUE(typed.uses_rule("T-λTD"));
}

TEST_F(Typing, Casts) {
  Judgement up = infer("(I)(new B())");
  EXPECT_TRUE(up.ok());
  EXPECT_TRUE(up.uses_rule("T-UCAST"));
  Judgement lam = infer("(I & E)(() -> new C())");
  ASSERT_TRUE(lam.ok());
  EXPECT_EQ(lam.type(), type("I & E"));
  EXPECT_TRUE(lam.uses_rule("T-λUCAST"));
  Judgement down = infer("(B)(new C())");
  ASSERT_TRUE(down.ok());
  EXPECT_TRUE(down.uses_rule("T-UDCAST"));
  Judgement down_iface = infer("(A & I)(new C())");
  EXPECT_TRUE(down_iface.ok());
  EXPECT_TRUE(infer("(C)(new Object())").ok());
  EXPECT_EQ(error_of(infer("(D)(new A())")), TypeErrorKind::BadCast);
  EXPECT_EQ(error_of(infer("(C)(() -> new C())")), TypeErrorKind::BadCast);
  EXPECT_EQ(error_of(infer("(Object & I)(() -> new C())")), TypeErrorKind::BadCast);
}

TEST_F(Typing, CastMatrixFollowsClassComponents) {
  const char* names[] = {"Object", "C", "A", "B", "D"};
  for (const char* target : names) {
    for (const char* source : names) {
      std::string src = std::string("(") + target + ")(new " + source + "())";
      bool related = ct.nominal_subtype(source, target) || ct.nominal_subtype(target, source);
      EXPECT_EQ(t_inf(ct, {}, term(src)).ok(), related) << src;
    }
  }
}

TEST_F(Typing, StupidCasts) {
  TypingOptions stupid{.stupid_cast = true};
  Judgement j = infer("(D)(new A())", stupid);
  ASSERT_TRUE(j.ok());
  EXPECT_EQ(j.type(), type("D"));
  EXPECT_TRUE(j.uses_rule("T-STUPIDCAST"));
  Judgement up = infer("(I)(new B())", stupid);
  EXPECT_TRUE(up.uses_rule("T-UCAST"));
  EXPECT_FALSE(up.uses_rule("T-STUPIDCAST"));
  EXPECT_EQ(error_of(infer("(C)(true)", stupid)), TypeErrorKind::BadCast);
}

TEST_F(Typing, LookupErrors) {
  EXPECT_EQ(error_of(infer("x")), TypeErrorKind::UnboundVar);
  EXPECT_EQ(error_of(infer("new C().f")), TypeErrorKind::NoSuchField);
  EXPECT_EQ(error_of(infer("new C().n()")), TypeErrorKind::NoSuchMethod);
  EXPECT_EQ(error_of(infer("new C().m()")), TypeErrorKind::ArityMismatch);
  EXPECT_EQ(error_of(infer("new C().m(new A())")), TypeErrorKind::ArgMismatch);
  EXPECT_EQ(error_of(infer("new Nope()")), TypeErrorKind::UnknownType);
  env.bind("x", type("I"));
  EXPECT_EQ(infer("x.n()").type(), type("C"));
}

TEST_F(Typing, FieldsThroughIntersections) {
  ClassTable fields = table(R"(
    interface I { Object get(); }
    class P extends Object {
      Object f;
      P(Object f) { super(); this.f = f; }
    }
  )");
  TypeEnv e;
  e.bind("p", type("P & I"));
  Judgement j = t_inf(fields, e, term("p.f"));
  ASSERT_TRUE(j.ok());
  EXPECT_EQ(j.type(), type("Object"));
  EXPECT_EQ(t_inf(fields, e, term("p.get()")).type(), type("Object"));
}

TEST_F(Typing, SynthesisIsDeterministic) {
  TypeChecker checker(ct);
  Term t = term("new C().m(true ? () -> new C() : new B())");
  Judgement a = checker.infer({}, t);
  Judgement b = checker.infer({}, t);
  EXPECT_EQ(a.type(), b.type());
  EXPECT_EQ(a.rule_trace, b.rule_trace);
}

}  // namespace
}  // namespace fjl

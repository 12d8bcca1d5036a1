#include <gtest/gtest.h>

#include <filesystem>

#include "fjl/evaluator.hpp"
#include "fjl/harness/generator.hpp"
#include "fjl/harness/properties.hpp"
#include "fjl/harness/runner.hpp"
#include "fjl/parser.hpp"
#include "fjl/well_formedness.hpp"
#include "example_tables.hpp"

namespace fjl::harness {
namespace {

using testing::table;
using testing::term;
using testing::type;

TEST(Features, Parse) {
  Features f = parse_features("+udcast,-lambdas");
  EXPECT_TRUE(f.udcast);
  EXPECT_FALSE(f.lambdas);
  EXPECT_TRUE(f.defaults);
  EXPECT_EQ(parse_features(to_string(f)), f);
  EXPECT_THROW(parse_features("+generics"), std::invalid_argument);
}

TEST(Generator, TablesAreWellFormedAndDeterministic) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    ClassTable a = gen_table(cfg);
    EXPECT_TRUE(ok_table(a).empty()) << table_source(a);
    EXPECT_EQ(table_source(a), table_source(gen_table(cfg)));
  }
}

TEST(Generator, TermsHaveTheirRecordedTypes) {
  GenConfig cfg;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    cfg.seed = seed;
    ClassTable ct = gen_table(cfg);
    TermGenerator gen(ct, cfg, seed);
    for (int i = 0; i < 10; ++i) {
      TypedTerm t = gen.typed_term();
      Judgement j = t_inf(ct, {}, t.term);
      ASSERT_TRUE(j.ok()) << pretty(t.term) << ": " << j.error().detail;
      EXPECT_EQ(j.type(), t.type) << pretty(t.term);
      EXPECT_FALSE(j.uses_rule("T-UDCAST")) << pretty(t.term);
      EXPECT_FALSE(undecorated_eliminator(t.term)) << pretty(t.term);
    }
  }
}

TEST(Generator, SameSeedSameTerms) {
  GenConfig cfg;
  cfg.seed = 3;
  ClassTable ct = gen_table(cfg);
  TermGenerator a(ct, cfg, 99);
  TermGenerator b(ct, cfg, 99);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(a.typed_term().term, b.typed_term().term);
}

TEST(Generator, DisabledFeaturesStayAbsent) {
  GenConfig cfg;
  cfg.features = parse_features("-lambdas,-conditionals,-casts");
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    cfg.seed = seed;
    ClassTable ct = gen_table(cfg);
    TermGenerator gen(ct, cfg, seed);
    for (int i = 0; i < 10; ++i) {
      std::string s = pretty(gen.typed_term().term);
      EXPECT_EQ(s.find("->"), std::string::npos) << s;
      EXPECT_EQ(s.find('?'), std::string::npos) << s;
    }
  }
}

TEST(Generator, ValuesAreClosedProperValuesOrLambdas) {
  GenConfig cfg;
  cfg.seed = 4;
  ClassTable ct = gen_table(cfg);
  TermGenerator gen(ct, cfg, 4);
  for (const auto& t : gen.inhabited_types()) {
    Term v = gen.value(t, 3);
    EXPECT_TRUE(is_value(v)) << pretty(v);
    EXPECT_TRUE(free_vars(v).empty());
    EXPECT_TRUE(t_ck(ct, {}, v, t).ok()) << pretty(v) << " : " << pretty(t);
  }
}

TEST(Generator, UdcastReachesFailedCasts) {
  GenConfig cfg;
  cfg.features = parse_features("+udcast");
  int stuck = 0;
  for (std::uint64_t seed = 1; seed <= 60 && stuck == 0; ++seed) {
    cfg.seed = seed;
    ClassTable ct = gen_table(cfg);
    TermGenerator gen(ct, cfg, seed);
    Evaluator ev(ct, EvalOptions{.max_steps = 500});
    for (int i = 0; i < 20; ++i) {
      if (ev.eval(gen.typed_term().term).outcome == EvalResult::Outcome::Stuck) ++stuck;
    }
  }
  EXPECT_GT(stuck, 0);
}

TEST(Properties, SubjectReductionOnTheSimpleTable) {
  ClassTable ct = table(testing::kSimpleTable);
  EXPECT_EQ(check_subject_reduction(ct, term("new C().m(() -> new C())")).verdict, Verdict::Pass);
  EXPECT_EQ(check_progress(ct, term("new C().m(() -> new C())")).verdict, Verdict::Pass);
}

TEST(Properties, DowncastsAreOutsideTheTheorems) {
  ClassTable ct = table(testing::kSimpleTable);
  Term t = term("(C)(new Object())");
  EXPECT_EQ(check_subject_reduction(ct, t).verdict, Verdict::Excluded);
  EXPECT_EQ(check_progress(ct, t).verdict, Verdict::Excluded);
  EXPECT_EQ(check_stuck_classification(ct, t).verdict, Verdict::Pass);
}

TEST(Properties, BudgetMakesRunsInconclusive) {
  ClassTable ct = table(R"(
    class L extends Object {
      L() { super(); }
      L loop() { return this.loop(); }
    }
  )");
  EXPECT_EQ(check_progress(ct, term("new L().loop()"), 20).verdict, Verdict::Inconclusive);
  EXPECT_EQ(check_subject_reduction(ct, term("new L().loop()"), 20).verdict,
            Verdict::Inconclusive);
}

TEST(Properties, SubstitutionOnTheSimpleTable) {
  ClassTable ct = table(testing::kSimpleTable);
  TypeEnv env;
  env.bind("x", type("I"));
  SubstitutionInstance inst{env, "x", type("I"), term("x.n()"), type("C"), term("() -> new C()")};
  EXPECT_EQ(check_substitution_lemma(ct, inst).verdict, Verdict::Pass);
}

TEST(Properties, LookupLemmas) {
  EXPECT_EQ(check_lookup_lemmas(table(testing::kLubTable)).verdict, Verdict::Pass);
  EXPECT_EQ(check_lookup_lemmas(table(testing::kDefaultTable)).verdict, Verdict::Pass);
  Outcome bad = check_lookup_lemmas(table(R"(
    class A extends Object { A() { super(); } A m() { return new Object(); } }
  )"));
  EXPECT_EQ(bad.verdict, Verdict::Fail);
  EXPECT_FALSE(bad.witness.empty());
}

TEST(Properties, TypeUniverse) {
  ClassTable ct = table(testing::kSimpleTable);
  auto u = type_universe(ct, 2);
  EXPECT_NE(std::find(u.begin(), u.end(), type("C & I")), u.end());
  EXPECT_NE(std::find(u.begin(), u.end(), type("I & E")), u.end());
  EXPECT_EQ(std::find(u.begin(), u.end(), type("E & I")), u.end());
  EXPECT_EQ(std::find(u.begin(), u.end(), type("C & J")), u.end());
}

// Well-formed tables satisfy every property, so shrinking is exercised with
// a criterion of its own: the table still has an ill-typed body in A.m.
bool bad_body_in_a(const CounterExample& ce) {
  ClassTable ct(parse_program(ce.table_source).decls);
  for (const auto& e : ok_table(ct)) {
    if (e.decl == "A" && e.method == "m" && e.premise == premise::kMethodBody) return true;
  }
  return false;
}

CounterExample broken_table() {
  CounterExample ce;
  ce.property = Property::LookupLemmas;
  ce.table_source = R"(
    interface K { }
    class P extends Object { P() { super(); } }
    class A extends Object {
      A() { super(); }
      A m() { return (Object)(new P()); }
      Object k() { return new P(); }
    }
  )";
  ce.seed = 5;
  return ce;
}

TEST(Runner, ShrinkKeepsTheCriterion) {
  CounterExample ce = broken_table();
  ASSERT_TRUE(bad_body_in_a(ce));
  CounterExample small = shrink_while(ce, bad_body_in_a);
  EXPECT_TRUE(small.shrunk);
  EXPECT_TRUE(bad_body_in_a(small));
  EXPECT_EQ(small.table_source.find("interface K"), std::string::npos);
  EXPECT_EQ(small.table_source.find("class P"), std::string::npos);
  EXPECT_LT(small.table_source.size(), ce.table_source.size());
}

TEST(Runner, ReplayExcludesIllFormedTables) {
  EXPECT_EQ(replay(broken_table()).verdict, Verdict::Excluded);
}

TEST(Runner, ShrinkLeavesPassingInputsAlone) {
  CounterExample ce;
  ce.property = Property::SubjectReduction;
  ce.table_source = std::string(testing::kSimpleTable);
  ce.term_source = "new C().m(() -> new C())";
  CounterExample same = shrink(ce);
  EXPECT_FALSE(same.shrunk);
  EXPECT_EQ(same.term_source, ce.term_source);
}

TEST(Runner, SaveAndLoad) {
  auto dir = std::filesystem::temp_directory_path() / "fjl-runner-test";
  std::filesystem::remove_all(dir);
  CounterExample ce;
  ce.property = Property::Substitution;
  ce.table_source = table_source(table(testing::kSimpleTable));
  ce.term_source = "x.n()";
  ce.environment = "x : I";
  ce.variable = "x";
  ce.value_source = "() -> new C()";
  ce.seed = 42;
  auto paths = save(ce, dir);
  ASSERT_EQ(paths.size(), 2u);
  for (const auto& p : paths) EXPECT_TRUE(std::filesystem::exists(p));
  CounterExample back = load(paths[1].extension() == ".json" ? paths[1] : paths[0]);
  EXPECT_EQ(back.property, ce.property);
  EXPECT_EQ(back.table_source, ce.table_source);
  EXPECT_EQ(back.term_source, ce.term_source);
  EXPECT_EQ(back.environment, ce.environment);
  EXPECT_EQ(back.value_source, ce.value_source);
  EXPECT_EQ(back.seed, ce.seed);
  EXPECT_EQ(replay(back).verdict, Verdict::Pass);
  std::filesystem::remove_all(dir);
}

TEST(Runner, SeedsAreIndependentOfThreads) {
  EXPECT_EQ(run_seed(7, 3), run_seed(7, 3));
  EXPECT_NE(run_seed(7, 3), run_seed(7, 4));
  RunConfig cfg;
  cfg.property = Property::SubjectReduction;
  cfg.seed = 11;
  cfg.runs = 30;
  cfg.budget = 300;
  cfg.threads = 1;
  RunReport one = run_property(cfg);
  cfg.threads = 3;
  RunReport three = run_property(cfg);
  EXPECT_TRUE(one.ok());
  EXPECT_EQ(one.runs, 30);
  EXPECT_EQ(one.passed, three.passed);
  EXPECT_EQ(one.inconclusive, three.inconclusive);
}

TEST(Runner, RejectsUdcastForTheTheorems) {
  RunConfig cfg;
  cfg.property = Property::Progress;
  cfg.gen.features.udcast = true;
  EXPECT_THROW(run_property(cfg), std::invalid_argument);
  cfg.property = Property::StuckClassification;
  cfg.runs = 5;
  EXPECT_NO_THROW(run_property(cfg));
}

}  // namespace
}  // namespace fjl::harness

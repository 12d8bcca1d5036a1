#include <benchmark/benchmark.h>

#include "fjl/evaluator.hpp"
#include "fjl/harness/generator.hpp"
#include "fjl/harness/properties.hpp"
#include "fjl/parser.hpp"
#include "fjl/subtyping.hpp"
#include "fjl/typing.hpp"

namespace {

using namespace fjl;

const char* kTable = R"(
class C extends Object {
  C() { super(); }
  C m(I x) { return x.n(); }
}
interface I { C n(); }
interface J { C m(); }
interface E { }
class A extends C {
  A() { super(); }
}
class B extends A implements I {
  B() { super(); }
  C n() { return new C(); }
}
class D extends C implements I {
  D() { super(); }
  C n() { return new D(); }
}
)";

// A chain of n nested invocations.
Term nested(int n) {
  Term t = parse_term("new C()");
  for (int i = 0; i < n; ++i) {
    t = make_invoke(make_new("C"), "m", {make_cond(make_bool(true), make_lambda({}, t),
                                                   make_new("B"))});
  }
  return t;
}

void BM_ParseTable(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse_program(kTable));
}
BENCHMARK(BM_ParseTable);

void BM_Subtype(benchmark::State& state) {
  ClassTable ct(parse_program(kTable).decls);
  PreType a = parse_pretype("B & E");
  PreType b = parse_pretype("C & I");
  for (auto _ : state) benchmark::DoNotOptimize(subtype(ct, a, b));
}
BENCHMARK(BM_Subtype);

void BM_Lub(benchmark::State& state) {
  ClassTable ct(parse_program(kTable).decls);
  PreType a = parse_pretype("B");
  PreType b = parse_pretype("D");
  for (auto _ : state) benchmark::DoNotOptimize(lub(ct, a, b));
}
BENCHMARK(BM_Lub);

void BM_Infer(benchmark::State& state) {
  ClassTable ct(parse_program(kTable).decls);
  Term t = nested(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(t_inf(ct, {}, t));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Infer)->RangeMultiplier(4)->Range(1, 256)->Complexity();

void BM_Eval(benchmark::State& state) {
  ClassTable ct(parse_program(kTable).decls);
  Evaluator ev(ct);
  Term t = nested(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ev.eval(t));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Eval)->RangeMultiplier(4)->Range(1, 256)->Complexity();

void BM_GenerateTable(benchmark::State& state) {
  harness::GenConfig cfg;
  for (auto _ : state) {
    ++cfg.seed;
    benchmark::DoNotOptimize(harness::gen_table(cfg));
  }
}
BENCHMARK(BM_GenerateTable);

void BM_SubjectReduction(benchmark::State& state) {
  harness::GenConfig cfg;
  for (auto _ : state) {
    ++cfg.seed;
    ClassTable ct = harness::gen_table(cfg);
    Term t = harness::gen_typed_term(cfg, ct).term;
    benchmark::DoNotOptimize(harness::check_subject_reduction(ct, t, 500));
  }
}
BENCHMARK(BM_SubjectReduction);

}  // namespace

BENCHMARK_MAIN();

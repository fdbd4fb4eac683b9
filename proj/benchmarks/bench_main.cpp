#include <benchmark/benchmark.h>

#include <random>

#include "streamcra/combinators.hpp"
#include "streamcra/cra.hpp"
#include "streamcra/io.hpp"
#include "streamcra/rules.hpp"
#include "streamcra/weighted.hpp"

using namespace streamcra;

namespace {

std::string fixture(const char* name) { return read_text_file(std::string(STREAMCRA_FIXTURE_DIR) + "/" + name); }

// Blocks of 1..8 a's closed by #, values in 0..99.
DataWord block_stream(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(1, 8), val(0, 99);
  DataWord w;
  while (w.size() + 9 < n) {
    for (int i = len(rng); i > 0; --i) w.push_back({0, Value::integer(val(rng))});
    w.push_back({1, Value::integer(0)});
  }
  return w;
}

void BM_EvalBlockMax(benchmark::State& st) {
  Cra m = parse_cra(fixture("block_max.cra.json"));
  DataWord w = block_stream(static_cast<std::size_t>(st.range(0)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(eval_stream(m, w));
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * w.size()));
}
BENCHMARK(BM_EvalBlockMax)->Arg(1 << 12)->Arg(1 << 16);

void BM_EvalCompiledBlockMaxQuery(benchmark::State& st) {
  Cra m = compile(parse_query_program(fixture("q_block_max.query.json")));
  DataWord w = block_stream(static_cast<std::size_t>(st.range(0)), 2);
  for (auto _ : st) benchmark::DoNotOptimize(eval_stream(m, w));
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * w.size()));
}
BENCHMARK(BM_EvalCompiledBlockMaxQuery)->Arg(1 << 12)->Arg(1 << 16);

void BM_CompileQuery(benchmark::State& st) {
  QueryProgram p = parse_query_program(fixture("q_block_max.query.json"));
  for (auto _ : st) benchmark::DoNotOptimize(compile(p));
}
BENCHMARK(BM_CompileQuery);

void BM_CompileRules(benchmark::State& st) {
  RuleTransduction t = parse_rules(fixture("sum_a.rules.json"));
  for (auto _ : st) benchmark::DoNotOptimize(compile_to_ucra(t));
}
BENCHMARK(BM_CompileRules);

void BM_CheckWellformed(benchmark::State& st) {
  RuleTransduction t = parse_rules(fixture("sum_a.rules.json"));
  for (auto _ : st) benchmark::DoNotOptimize(check_wellformed(t));
}
BENCHMARK(BM_CheckWellformed);

void BM_Determinize(benchmark::State& st) {
  Cra m = parse_cra(fixture("f_star.cra.json"));
  for (auto _ : st) benchmark::DoNotOptimize(ucra_to_dcra(m));
}
BENCHMARK(BM_Determinize);

void BM_UnambConcat(benchmark::State& st) {
  Alphabet al{"a", "b"};
  Dfa a = regex_to_dfa("(a|b)*a(a|b)", al), b = regex_to_dfa("(b|ab)*", al);
  for (auto _ : st) benchmark::DoNotOptimize(unamb_concat_dfa(a, b));
}
BENCHMARK(BM_UnambConcat);

void BM_WaEval(benchmark::State& st) {
  WeightedAutomaton w = parse_wa(fixture("ab_count.wa.json"));
  std::mt19937_64 rng(3);
  Word word(static_cast<std::size_t>(st.range(0)));
  for (auto& a : word) a = static_cast<Symbol>(rng() % 2);
  for (auto _ : st) benchmark::DoNotOptimize(wa_eval(w, word));
}
BENCHMARK(BM_WaEval)->Arg(1 << 10);

}  // namespace

BENCHMARK_MAIN();

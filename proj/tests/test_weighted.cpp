#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "streamcra/error.hpp"
#include "streamcra/weighted.hpp"

using namespace streamcra;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::ParseError;
}

DataWord blind(const Word& w) {
  DataWord d;
  for (Symbol s : w) d.push_back({s, Value()});
  return d;
}

std::string show(const std::optional<Value>& v) { return v ? v->to_string() : "undefined"; }

std::size_t count_ab(const Word& w) {
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) n += (w[i] == 0 && w[i + 1] == 1);
  return n;
}

RegistryRef semiring_registry(const std::string& name) {
  RegistryDescriptor d;
  d.domain = "semiring";
  d.semiring = name;
  d.ops = {"0", "1", "+", "rmul"};
  return make_registry(d);
}

}  // namespace

TEST(WaEval, ZeroInitialIsZeroEverywhere) {
  WeightedAutomaton w = fixture::wa("ab_count.wa.json");
  for (auto& v : w.init) v = w.semiring.zero;
  for (const auto& word : oracle::all_words(2, 4)) EXPECT_EQ(wa_eval(w, word), Value::integer(0));
}

TEST(WaEval, CountsAbFactors) {
  WeightedAutomaton w = fixture::wa("ab_count.wa.json");
  EXPECT_EQ(wa_eval(w, {0, 1, 0, 1}), Value::integer(2));
  for (const auto& word : oracle::all_words(2, 6))
    ASSERT_EQ(wa_eval(w, word), Value::integer(static_cast<long long>(count_ab(word))));
}

TEST(WaEval, TropicalMinOverPaths) {
  // paths on "aa" from s0: 3+3+0, 3+1+1, 1+4+0, 1+2+1
  EXPECT_EQ(wa_eval(fixture::wa("tropical.wa.json"), {0, 0}), Value::integer(4));
}

TEST(WaEval, AgreesWithPathEnumeration) {
  for (const char* name : {"ab_count.wa.json", "tropical.wa.json"}) {
    WeightedAutomaton w = fixture::wa(name);
    for (const auto& word : oracle::all_words(2, 4)) {
      ASSERT_EQ(wa_eval(w, word), oracle::wa_paths(w, word)) << name;
      ASSERT_EQ(wa_path_oracle(w, word), oracle::wa_paths(w, word)) << name;
    }
  }
}

TEST(WaPathOracle, SinglePathIsProduct) {
  WeightedAutomaton w = make_wa("nat-arith", {"a"}, {"p", "q"});
  w.init[0] = Value::integer(2);
  w.weight(0, 0, 1) = Value::integer(3);
  w.final[1] = Value::integer(5);
  EXPECT_EQ(wa_path_oracle(w, {0}), Value::integer(30));
  EXPECT_EQ(wa_path_oracle(w, {0, 0}), Value::integer(0));
}

TEST(WaPathOracle, Bound) {
  WeightedAutomaton w = fixture::wa("ab_count.wa.json");
  EXPECT_EQ(code_of([&] { wa_path_oracle(w, Word(12, 0), 1000); }), ErrorCode::BoundExceeded);
}

TEST(Unambiguity, Support) {
  WeightedAutomaton w = make_wa("nat-arith", {"a"}, {"p", "q1", "q2"});
  w.init[0] = Value::integer(1);
  w.weight(0, 0, 1) = Value::integer(1);
  w.final[1] = Value::integer(1);
  w.final[2] = Value::integer(1);
  EXPECT_TRUE(is_unambiguous_wa(w));  // the zero edge p -a-> q2 is not in the support
  w.weight(0, 0, 2) = Value::integer(1);
  EXPECT_FALSE(is_unambiguous_wa(w));
  EXPECT_FALSE(is_unambiguous_wa(fixture::wa("ab_count.wa.json")));
}

TEST(WaToCra, AgreesWithWaEval) {
  for (const char* name : {"ab_count.wa.json", "tropical.wa.json"}) {
    WeightedAutomaton w = fixture::wa(name);
    Cra m = wa_to_cra(w);
    auto d = validate(m);
    EXPECT_EQ(m.num_states(), 1u);
    EXPECT_TRUE(d.deterministic);
    for (const auto& word : oracle::all_words(2, 5))
      ASSERT_EQ(eval_stream(m, blind(word)), wa_eval(w, word)) << name;
  }
}

TEST(WaToCra, ZeroAutomatonIsConstantZero) {
  WeightedAutomaton w = make_wa("nat-arith", {"a", "b"}, {"p", "q"});
  Cra m = wa_to_cra(w);
  for (const auto& word : oracle::all_words(2, 3)) EXPECT_EQ(eval_stream(m, blind(word)), Value::integer(0));
}

TEST(WaToCra, RegistryMismatch) {
  WeightedAutomaton w = fixture::wa("ab_count.wa.json");
  EXPECT_EQ(code_of([&] { wa_to_cra(w, semiring_registry("tropical")); }), ErrorCode::RegistryMismatch);
}

TEST(LinearNormalize, DistributesRightMultiplication) {
  auto reg = semiring_registry("nat-arith");
  const Semiring& s = *reg->semiring();
  std::vector<std::string> xy{"x", "y"};
  Expr e = parse_expr("rmul[3](rmul[2](x) + y) + 1", *reg, xy);
  LinearForm f = linear_normalize(e, 2, s);
  EXPECT_EQ(f.coeffs, (std::vector<Value>{Value::integer(6), Value::integer(3)}));
  EXPECT_EQ(f.constant, Value::integer(1));

  std::mt19937_64 rng(kDefaultSeed);
  std::uniform_int_distribution<int> pick(0, 50);
  for (const char* text : {"rmul[3](rmul[2](x) + y) + 1", "x + x", "rmul[4](x + rmul[5](y + 1)) + rmul[0](x)", "0"}) {
    Expr t = parse_expr(text, *reg, xy);
    LinearForm g = linear_normalize(t, 2, s);
    for (int i = 0; i < 100; ++i) {
      Valuation env{Value::integer(pick(rng)), Value::integer(pick(rng))};
      Value lin = g.constant;
      for (std::size_t r = 0; r < 2; ++r) lin = s.plus(lin, s.times(env[r], g.coeffs[r]));
      ASSERT_EQ(lin, eval_expr(t, env, nullptr)) << text;
    }
  }
}

TEST(LinearNormalize, ZeroAndDoubling) {
  auto reg = semiring_registry("nat-arith");
  const Semiring& s = *reg->semiring();
  LinearForm z = linear_normalize(parse_expr("0", *reg, {"x"}), 1, s);
  EXPECT_EQ(z.coeffs, std::vector<Value>{Value::integer(0)});
  EXPECT_EQ(z.constant, Value::integer(0));
  LinearForm d = linear_normalize(parse_expr("x + x", *reg, {"x"}), 1, s);
  EXPECT_EQ(d.coeffs, std::vector<Value>{Value::integer(2)});
}

TEST(LinearNormalize, RejectsValAndProducts) {
  auto reg = semiring_registry("nat-arith");
  const Semiring& s = *reg->semiring();
  EXPECT_EQ(code_of([&] { linear_normalize(parse_expr("x + val", *reg, {"x"}), 1, s); }),
            ErrorCode::NonLinearizableExpression);
  EXPECT_EQ(code_of([&] { cra_to_wa(fixture::cra("binary_times.cra.json")); }), ErrorCode::NonLinearizableExpression);
}

TEST(CraToWa, SelfLoopWeight) {
  Cra m;
  m.alphabet = {"a"};
  m.registry = semiring_registry("nat-arith");
  m.registers = {"x"};
  std::size_t q = m.add_state("q");
  m.transitions.push_back({q, 0, Update{parse_expr("rmul[5](x)", *m.registry, m.registers)}, q});
  m.init[q] = Update{parse_expr("1", *m.registry, m.registers)};
  m.final[q] = Expr::reg(0);
  WeightedAutomaton w = cra_to_wa(m);
  bool loop5 = false;
  for (std::size_t p = 0; p < w.num_states(); ++p) loop5 = loop5 || w.weight(p, 0, p) == Value::integer(5);
  EXPECT_TRUE(loop5);
  long long pow = 1;
  for (std::size_t n = 0; n <= 6; ++n, pow *= 5) EXPECT_EQ(wa_eval(w, Word(n, 0)), Value::integer(pow));
}

TEST(CraToWa, PartialRateRejected) {
  Cra m = wa_to_cra(fixture::wa("ab_count.wa.json"));
  Cra p = product_with_dfa(m, regex_to_dfa("a*", m.alphabet));
  EXPECT_EQ(code_of([&] { cra_to_wa(p); }), ErrorCode::PartialRate);
}

TEST(CraToWa, RoundTrip) {
  for (const char* name : {"ab_count.wa.json", "tropical.wa.json"}) {
    WeightedAutomaton w = fixture::wa(name);
    WeightedAutomaton back = cra_to_wa(wa_to_cra(w));
    for (const auto& word : oracle::all_words(2, 4)) ASSERT_EQ(wa_eval(back, word), wa_eval(w, word)) << name;
  }
}

TEST(Uwa, EndLetterBlock) {
  MonoidWa w = fixture::monoid_wa("f_block.uwa.json");
  EXPECT_TRUE(is_unambiguous_wa(w));
  Cra m = uwa_to_copyless_ucra(w);
  auto d = validate(m);
  EXPECT_TRUE(d.copyless);
  EXPECT_TRUE(d.unambiguous);
  EXPECT_EQ(m.num_registers(), 1u);
  for (const auto& word : oracle::all_words(3, 5)) {
    std::optional<std::string> want;
    if (word.size() >= 2 && word.back() == 2) {
      Word u(word.begin(), word.end() - 1);
      if (std::none_of(u.begin(), u.end(), [](Symbol s) { return s == 2; }))
        want = std::string(u.size(), u.back() == 0 ? 'a' : 'b') + "#";
    }
    auto got = eval_stream(m, blind(word));
    ASSERT_EQ(show(got), want ? show(Value::word(*want)) : "undefined") << format_word(w.alphabet, word);
    ASSERT_EQ(show(monoid_wa_eval(w, word)), show(got));
  }
}

TEST(Uwa, SingleLoop) {
  MonoidWa w = fixture::monoid_wa("int_loop.uwa.json");
  Cra m = uwa_to_copyless_ucra(w);
  for (long long n = 0; n <= 5; ++n)
    EXPECT_EQ(eval_stream(m, blind(Word(static_cast<std::size_t>(n), 0))), Value::integer(2 + 3 * n + 5));
}

TEST(Uwa, AmbiguousRejected) {
  MonoidWa w = monoid_view(fixture::wa("ab_count.wa.json"));
  EXPECT_EQ(code_of([&] { uwa_to_copyless_ucra(w); }), ErrorCode::NotUnambiguous);
}

TEST(Uwa, MonoidViewOfDeterministicTropical) {
  WeightedAutomaton t = make_wa("tropical", {"a", "b"}, {"p", "q"});
  t.init[0] = Value::integer(1);
  t.weight(0, 0, 0) = Value::integer(2);
  t.weight(0, 1, 1) = Value::integer(7);
  t.weight(1, 0, 0) = Value::integer(0);
  t.final[0] = Value::integer(3);
  MonoidWa w = monoid_view(t);
  EXPECT_TRUE(is_unambiguous_wa(w));
  Cra m = uwa_to_copyless_ucra(w);
  for (const auto& word : oracle::all_words(2, 5)) {
    Value want = wa_eval(t, word);
    auto got = eval_stream(m, blind(word));
    ASSERT_EQ(show(got), want == Value::inf() ? "undefined" : want.to_string()) << format_word(t.alphabet, word);
  }
}

TEST(Uwa, CopylessRoundTrip) {
  for (const char* name : {"f_block.uwa.json", "int_loop.uwa.json"}) {
    MonoidWa w = fixture::monoid_wa(name);
    MonoidWa back = copyless_ucra_to_uwa(uwa_to_copyless_ucra(w));
    EXPECT_TRUE(is_unambiguous_wa(back));
    for (const auto& word : oracle::all_words(w.alphabet.size(), 5))
      ASSERT_EQ(show(monoid_wa_eval(back, word)), show(monoid_wa_eval(w, word))) << name;
  }
}

TEST(Uwa, TwoRegisterUnaryMachine) {
  Cra m = fixture::cra("unary2.cra.json");
  MonoidWa w = copyless_ucra_to_uwa(m);
  EXPECT_LE(w.num_states(), m.num_states() * (m.num_registers() + 1) + m.num_states());
  for (const auto& word : oracle::all_words(2, 5))
    ASSERT_EQ(show(monoid_wa_eval(w, word)), show(eval_stream(m, blind(word)))) << format_word(m.alphabet, word);
}

TEST(Uwa, OneRegisterOneState) {
  RegistryDescriptor d;
  d.domain = "monoid-unary";
  d.monoid = "int-add";
  Cra m;
  m.alphabet = {"a"};
  m.registry = make_registry(d);
  m.registers = {"x"};
  std::size_t q = m.add_state("q");
  m.transitions.push_back({q, 0, Update{parse_expr("rmul[4](x)", *m.registry, m.registers)}, q});
  m.init[q] = Update{parse_expr("1", *m.registry, m.registers)};
  m.final[q] = Expr::reg(0);
  MonoidWa w = copyless_ucra_to_uwa(m);
  for (std::size_t n = 0; n <= 4; ++n)
    EXPECT_EQ(monoid_wa_eval(w, Word(n, 0)), Value::integer(4 * static_cast<long long>(n)));
}

#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "streamcra/combinators.hpp"
#include "streamcra/error.hpp"

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

std::string show(const std::optional<Value>& v) { return v ? v->to_string() : "undefined"; }

long long iv(const Value& v) { return static_cast<long long>(v.as_int()); }

using Hand = std::function<std::optional<long long>(const DataWord&)>;

long long total(const DataWord& w) {
  long long s = 0;
  for (const auto& it : w) s += iv(it.value);
  return s;
}

// Hand-written meaning of each fixture query over tags {a=0, b=1}.
std::optional<long long> op_combine(const DataWord& w) {
  return std::max<long long>(total(w), static_cast<long long>(w.size()));
}

std::optional<long long> else_query(const DataWord& w) {
  if (std::all_of(w.begin(), w.end(), [](const Item& it) { return it.tag == 0; })) return total(w);
  long long m = 0;
  for (const auto& it : w) m = std::max(m, iv(it.value));
  return m;
}

std::optional<long long> iter_query(const DataWord& w) {
  std::size_t run = 0;
  for (const auto& it : w) {
    if (it.tag == 1) {
      ++run;
    } else if (run % 2) {
      return std::nullopt;
    }
  }
  if (run % 2) return std::nullopt;
  return total(w);
}

std::optional<long long> split_query(const DataWord& w) {
  if (!w.empty() && w.back().tag == 1) return std::nullopt;
  return total(w);
}

std::optional<long long> prefixsum_query(const DataWord& w) {
  long long s = 0, m = 0;
  for (const auto& it : w) {
    m = std::max(m, iv(it.value));
    s += m;
  }
  return s;
}

// Blocks are a*#, so an empty block contributes 0.
std::optional<long long> block_max_query(const DataWord& w) {
  long long best = 0, cur = 0;
  bool open = false;
  for (const auto& it : w) {
    if (it.tag == 0) {
      cur += iv(it.value);
      open = true;
    } else {
      best = std::max(best, cur);
      cur = 0;
      open = false;
    }
  }
  if (open) return std::nullopt;
  return best;
}

struct Case {
  const char* file;
  Hand hand;
};

const std::vector<Case>& cases() {
  static const std::vector<Case> c = {{"q_op_combine.query.json", op_combine}, {"q_else.query.json", else_query},
                                      {"q_iter.query.json", iter_query},       {"q_split.query.json", split_query},
                                      {"q_prefixsum.query.json", prefixsum_query},
                                      {"q_block_max.query.json", block_max_query}};
  return c;
}

std::string show(const std::optional<long long>& v) { return v ? std::to_string(*v) : "undefined"; }

const std::vector<std::string> kIntOps = {"0", "1", "+", "max", "min", "monus", "ITE", "const"};

QueryProgram program(const std::string& text, const Alphabet& al, std::vector<std::string> ops = kIntOps) {
  RegistryDescriptor d;
  d.domain = "int";
  d.ops = std::move(ops);
  QueryProgram p;
  p.alphabet = al;
  p.registry = make_registry(d);
  p.root = parse_query(text, al, *p.registry);
  return p;
}

}  // namespace

TEST(OracleEval, SingleForcedCut) {
  auto p = program("split(item([a], val); item([b], val); +)", {"a", "b"});
  EXPECT_EQ(oracle_eval(p, oracle::data_word({{0, 2}, {1, 5}})), Value::integer(7));
}

TEST(OracleEval, TwoLevelBlockMax) {
  auto p = fixture::query("q_block_max.query.json");
  EXPECT_EQ(oracle_eval(p, oracle::data_word({{0, 2}, {0, 3}, {1, 0}, {0, 4}, {1, 0}})), Value::integer(5));
}

TEST(OracleEval, AmbiguousCutIsUndefined) {
  auto p = fixture::query("q_split.query.json");
  EXPECT_FALSE(oracle_eval(p, oracle::data_word({{0, 1}, {1, 1}})).has_value());
}

TEST(OracleEval, ElsePrefersLeft) {
  auto p = fixture::query("q_else.query.json");
  EXPECT_EQ(oracle_eval(p, oracle::data_word({{0, 2}, {0, 2}})), Value::integer(4));
  EXPECT_EQ(eval_stream(compile(p), oracle::data_word({{0, 2}, {0, 2}})), Value::integer(4));
  EXPECT_EQ(oracle_eval(p, oracle::data_word({{0, 2}, {1, 2}})), Value::integer(2));
}

TEST(OracleEval, LengthBound) {
  auto p = fixture::query("q_split.query.json");
  DataWord w(13, Item{0, Value::integer(0)});
  EXPECT_EQ(code_of([&] { oracle_eval(p, w); }), ErrorCode::BoundExceeded);
}

TEST(OracleEval, AgreesWithHandOracles) {
  for (const auto& c : cases()) {
    auto p = fixture::query(c.file);
    for (const auto& w : oracle::all_data_words(2, oracle::ints({0, 1, 2}), 5))
      ASSERT_EQ(show(oracle_eval(p, w)), show(c.hand(w))) << c.file << " on " << format_word(p.alphabet, oracle::tags(w));
  }
}

TEST(Compile, EpsilonOnly) {
  auto p = program("eps(0)", {"a"});
  Cra m = compile(p);
  EXPECT_EQ(eval_stream(m, {}), Value::integer(0));
  EXPECT_FALSE(eval_stream(m, oracle::data_word({{0, 0}})).has_value());
  EXPECT_TRUE(copyless_report(p));
}

TEST(Compile, AgreesWithOracleAndHand) {
  for (const auto& c : cases()) {
    auto p = fixture::query(c.file);
    Cra m = compile(p);
    auto d = validate(m);
    EXPECT_TRUE(d.unambiguous) << c.file;
    EXPECT_TRUE(d.trim) << c.file;
    EXPECT_TRUE(d.epsilon_free) << c.file;
    for (const auto& w : oracle::all_data_words(2, oracle::ints({0, 1, 2}), 5))
      ASSERT_EQ(show(eval_stream(m, w)), show(c.hand(w))) << c.file << " on " << format_word(p.alphabet, oracle::tags(w));
  }
}

TEST(Compile, RateHomomorphism) {
  for (const auto& c : cases()) {
    auto p = fixture::query(c.file);
    Dfa got = determinize(rate(compile(p)));
    EXPECT_TRUE(language_equal(got, query_rate(p))) << c.file;
    // membership against the hand oracle's domain
    for (const auto& w : oracle::all_words(2, 6)) {
      DataWord dw;
      for (Symbol s : w) dw.push_back({s, Value::integer(0)});
      ASSERT_EQ(got.accepts(w), c.hand(dw).has_value()) << c.file << " on " << format_word(p.alphabet, w);
    }
  }
}

TEST(Compile, ElseRateIsUnion) {
  Alphabet al{"a", "b"};
  auto p = program("else(item([a], val); split(item([a b], val); item([b], 0); +))", al);
  auto f = program("item([a], val)", al);
  auto g = program("split(item([a b], val); item([b], 0); +)", al);
  EXPECT_TRUE(language_equal(determinize(rate(compile(p))), unite(query_rate(f), query_rate(g))));
}

TEST(Compile, PrefixSumNeedsTotalBody) {
  auto p = program("prefixsum(item([a], val); 0; +)", {"a", "b"});
  EXPECT_EQ(code_of([&] { compile(p); }), ErrorCode::PrefixSumOnPartial);
  EXPECT_EQ(code_of([&] { oracle_eval(p, oracle::data_word({{0, 1}})); }), ErrorCode::PrefixSumOnPartial);
}

TEST(Compile, IterOverEpsilonIsEmptyWithWarning) {
  auto p = program("iter(eps(0); 0; +)", {"a"});
  std::vector<std::string> warnings;
  Cra m = compile(p, &warnings);
  EXPECT_FALSE(warnings.empty());
  EXPECT_TRUE(is_empty(rate(m)));
}

TEST(CopylessReport, BlockMaxIsCopyless) {
  EXPECT_TRUE(copyless_report(fixture::query("q_block_max.query.json")));
  EXPECT_FALSE(copyless_report(fixture::query("q_prefixsum.query.json")));
}

TEST(CopylessReport, StringPrefixSumGrowsQuadratically) {
  RegistryDescriptor d;
  d.domain = "str";
  d.alphabet = {"a"};
  d.ops = {"eps", "concat", "app[a]"};
  QueryProgram p;
  p.alphabet = {"a"};
  p.registry = make_registry(d);
  p.root = parse_query("prefixsum(iter(item([a], app[a](eps)); eps; concat); eps; concat)", p.alphabet, *p.registry);
  EXPECT_FALSE(copyless_report(p));
  Cra m = compile(p);
  for (std::size_t n = 0; n <= 8; ++n) {
    DataWord w(n, Item{0, Value()});
    auto out = eval_stream(m, w);
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(out->as_str().size(), n * (n + 1) / 2);
  }
}

TEST(Query, FormatParseRoundTrip) {
  for (const auto& c : cases()) {
    auto p = fixture::query(c.file);
    std::string text = format_query(*p.root, p.alphabet);
    auto back = parse_query(text, p.alphabet, *p.registry);
    EXPECT_EQ(format_query(*back, p.alphabet), text);
  }
}

TEST(Query, BuilderErrors) {
  Alphabet al{"a"};
  RegistryDescriptor d;
  d.domain = "int";
  d.ops = kIntOps;
  auto reg = make_registry(d);
  EXPECT_EQ(code_of([&] { parse_query("split(item([a], val); item([a], val); max(", al, *reg); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { parse_query("item([z], val)", al, *reg); }), ErrorCode::TagOutOfAlphabet);
  EXPECT_EQ(code_of([&] { parse_query("iter(item([a], val); 0; ITE)", al, *reg); }), ErrorCode::ArityMismatch);
}

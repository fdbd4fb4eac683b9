#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "streamcra/error.hpp"
#include "streamcra/io.hpp"

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

}  // namespace

TEST(DetectKind, ByFieldAndByKeys) {
  EXPECT_EQ(detect_kind(fixture::text("sum_dcra.cra.json")), ArtifactKind::Cra);
  EXPECT_EQ(detect_kind(fixture::text("q_split.query.json")), ArtifactKind::Query);
  EXPECT_EQ(detect_kind(fixture::text("sum_a.rules.json")), ArtifactKind::Rules);
  EXPECT_EQ(detect_kind(fixture::text("tropical.wa.json")), ArtifactKind::Wa);
  EXPECT_EQ(detect_kind(fixture::text("int_loop.uwa.json")), ArtifactKind::MonoidWa);
  EXPECT_EQ(detect_kind(R"({"transitions": []})"), ArtifactKind::Cra);
  EXPECT_EQ(detect_kind(R"({"weights": [], "monoid": "free"})"), ArtifactKind::MonoidWa);
  EXPECT_EQ(code_of([] { detect_kind("{"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { detect_kind(R"({"hello": 1})"); }), ErrorCode::ParseError);
}

TEST(CraJson, RoundTripPreservesTransduction) {
  for (const char* name : {"sum_dcra.cra.json", "block_max.cra.json", "drawdown.cra.json", "sum_ucra.cra.json"}) {
    Cra m = fixture::cra(name);
    Cra back = parse_cra(dump_cra(m));
    EXPECT_EQ(back.states, m.states);
    EXPECT_EQ(back.registers, m.registers);
    EXPECT_EQ(back.transitions.size(), m.transitions.size());
    EXPECT_EQ(dump_cra(back), dump_cra(m)) << name;
    for (const auto& w : oracle::all_data_words(2, oracle::ints({0, 2}), 4)) {
      auto a = eval_paths_oracle(m, w), b = eval_paths_oracle(back, w);
      ASSERT_EQ(a, b) << name;
    }
  }
}

TEST(CraJson, Errors) {
  EXPECT_EQ(code_of([] { parse_cra("[1, 2"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] {
              parse_cra(R"({"alphabet": ["a"], "registry": {"domain": "int", "ops": ["0"]}, "registers": ["x"],
                 "states": ["p"], "transitions": [{"from": "p", "tag": "z", "to": "p"}],
                 "init": {"p": {"x": "0"}}, "final": {"p": "x"}})");
            }),
            ErrorCode::TagOutOfAlphabet);
  EXPECT_EQ(code_of([] {
              parse_cra(R"({"alphabet": ["a"], "registry": {"domain": "int", "ops": ["0"]}, "registers": ["x"],
                 "states": ["p"], "transitions": [{"from": "p", "tag": "a", "to": "p", "update": {"x": "x + val"}}],
                 "init": {"p": {"x": "0"}}, "final": {"p": "x"}})");
            }),
            ErrorCode::UnknownOperation);
  EXPECT_EQ(code_of([] {
              parse_cra(R"({"alphabet": ["a"], "registry": {"domain": "int", "ops": ["0"]}, "registers": ["x", "y"],
                 "states": ["p"], "transitions": [], "init": {"p": {"x": "0"}}, "final": {"p": "x"}})");
            }),
            ErrorCode::ParseError);
}

TEST(RulesJson, RoundTrip) {
  auto t = fixture::rules("sum_a.rules.json");
  auto back = parse_rules(dump_rules(t));
  EXPECT_EQ(back.copies, t.copies);
  ASSERT_EQ(back.vertex_rules.size(), t.vertex_rules.size());
  for (std::size_t i = 0; i < t.vertex_rules.size(); ++i) {
    EXPECT_TRUE(language_equal(back.vertex_rules[i].r1, t.vertex_rules[i].r1));
    EXPECT_TRUE(language_equal(back.vertex_rules[i].r2, t.vertex_rules[i].r2));
  }
  for (const auto& w : oracle::all_data_words(2, oracle::ints({0, 1}), 4))
    ASSERT_EQ(show(dag_oracle_eval(back, w)), show(dag_oracle_eval(t, w)));
}

TEST(WaJson, RoundTrip) {
  for (const char* name : {"ab_count.wa.json", "tropical.wa.json"}) {
    WeightedAutomaton w = fixture::wa(name);
    WeightedAutomaton back = parse_wa(dump_wa(w));
    EXPECT_EQ(back.delta, w.delta);
    EXPECT_EQ(back.init, w.init);
    EXPECT_EQ(back.final, w.final);
  }
}

TEST(WaJson, OmittedWeightsAreZero) {
  WeightedAutomaton w = parse_wa(R"({"alphabet": ["a"], "semiring": "tropical", "states": ["s"], "weights": []})");
  EXPECT_EQ(w.weight(0, 0, 0), Value::inf());
  EXPECT_EQ(w.init[0], Value::inf());
}

TEST(MonoidWaJson, RoundTrip) {
  for (const char* name : {"f_block.uwa.json", "int_loop.uwa.json"}) {
    MonoidWa w = fixture::monoid_wa(name);
    MonoidWa back = parse_monoid_wa(dump_monoid_wa(w));
    EXPECT_EQ(back.edges.size(), w.edges.size());
    for (const auto& word : oracle::all_words(w.alphabet.size(), 4))
      ASSERT_EQ(show(monoid_wa_eval(back, word)), show(monoid_wa_eval(w, word))) << name;
  }
}

TEST(Streams, JsonlAndCsvAgree) {
  Cra m = fixture::cra("sum_dcra.cra.json");
  std::istringstream jsonl(R"({"tag": "a", "value": 1}
{"tag": "b", "value": "2"}

{"tag": "a", "value": 3}
)");
  std::istringstream csv("tag,value\na, 1\nb,2\r\na,3\n");
  DataWord x = read_stream(jsonl, false, m.alphabet, *m.registry);
  DataWord y = read_stream(csv, true, m.alphabet, *m.registry);
  ASSERT_EQ(x.size(), 3u);
  ASSERT_EQ(y.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(x[i].tag, y[i].tag);
    EXPECT_EQ(x[i].value, y[i].value);
  }
  EXPECT_EQ(eval_stream(m, x), Value::integer(4));
}

TEST(Streams, CsvColumnOrderFromHeader) {
  Cra m = fixture::cra("sum_dcra.cra.json");
  std::istringstream csv("value,tag\n5,b\n");
  DataWord w = read_stream(csv, true, m.alphabet, *m.registry);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].tag, 1u);
  EXPECT_EQ(w[0].value, Value::integer(5));
}

TEST(Streams, Errors) {
  Cra m = fixture::cra("sum_dcra.cra.json");
  auto run = [&](const std::string& text, bool csv) {
    std::istringstream in(text);
    read_stream(in, csv, m.alphabet, *m.registry);
  };
  EXPECT_EQ(code_of([&] { run(R"({"tag": "c", "value": 1})", false); }), ErrorCode::TagOutOfAlphabet);
  EXPECT_EQ(code_of([&] { run(R"({"tag": "a", "value": "x"})", false); }), ErrorCode::ValueParseError);
  EXPECT_EQ(code_of([&] { run("{not json", false); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { run("tag,val\na,1\n", true); }), ErrorCode::ParseError);
}

TEST(ValueJson, SmallIntegersAreNumbers) {
  EXPECT_EQ(value_to_json(Value::integer(-3)), "-3");
  EXPECT_EQ(value_to_json(Value::word("ab")), "\"ab\"");
  EXPECT_EQ(value_to_json(Value(Int("100000000000000000000000"))), "\"100000000000000000000000\"");
}

TEST(Files, MissingFileIsIoError) {
  EXPECT_EQ(code_of([] { read_text_file("/nonexistent/streamcra.json"); }), ErrorCode::IoError);
}

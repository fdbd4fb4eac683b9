#include <gtest/gtest.h>

#include <random>

#include "streamcra/error.hpp"
#include "streamcra/expr.hpp"
#include "streamcra/registry.hpp"

using namespace streamcra;

namespace {

RegistryRef int_registry(std::vector<std::string> ops) {
  RegistryDescriptor d;
  d.domain = "int";
  d.ops = std::move(ops);
  return make_registry(d);
}

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

const std::vector<std::string> kXY = {"x", "y"};

}  // namespace

TEST(EvalExpr, AddsRegisterAndCurrentValue) {
  auto reg = int_registry({"0", "+"});
  Expr e = parse_expr("x + val", *reg, {"x"});
  Value cur = Value::integer(4);
  EXPECT_EQ(eval_expr(e, {Value::integer(3)}, &cur), Value::integer(7));
}

TEST(EvalExpr, Constant) {
  auto reg = int_registry({"0", "+"});
  EXPECT_EQ(eval_expr(Expr::constant(reg->lookup("0")), {}, nullptr), Value::integer(0));
}

TEST(EvalExpr, DrawdownUpdate) {
  auto reg = int_registry({"0", "max", "monus"});
  Expr e = parse_expr("max(y, monus(max(x, val), val))", *reg, kXY);
  Value cur = Value::integer(1);
  // max(x,val) = 5, 5 ⊖ 1 = 4, max(2, 4) = 4
  EXPECT_EQ(eval_expr(e, {Value::integer(5), Value::integer(2)}, &cur), Value::integer(4));
}

TEST(EvalExpr, CountsOperationApplications) {
  auto reg = int_registry({"0", "+", "max"});
  Expr e = parse_expr("max(x + val, y)", *reg, kXY);
  Value cur = Value::integer(1);
  std::uint64_t ops = 0;
  eval_expr(e, {Value::integer(1), Value::integer(1)}, &cur, &ops);
  EXPECT_EQ(ops, 2u);
}

TEST(EvalExpr, UnboundRegisterAndMissingVal) {
  auto reg = int_registry({"0", "+"});
  Expr e = parse_expr("y + 0", *reg, kXY);
  EXPECT_EQ(code_of([&] { eval_expr(e, {Value::integer(1)}, nullptr); }), ErrorCode::UnboundRegister);
  EXPECT_EQ(code_of([&] { eval_expr(Expr::val(), {}, nullptr); }), ErrorCode::MissingCurrentVal);
}

TEST(RegisterOccurrences, SumUpdate) {
  auto reg = int_registry({"0", "+"});
  std::vector<Expr> u = {parse_expr("x + val", *reg, kXY), parse_expr("y", *reg, kXY)};
  auto occ = register_occurrences(u);
  EXPECT_EQ(occ, (std::map<RegId, std::size_t>{{0, 1}, {1, 1}}));
}

TEST(RegisterOccurrences, DrawdownUsesXTwice) {
  auto reg = int_registry({"0", "max", "monus"});
  std::vector<Expr> u = {parse_expr("max(x, val)", *reg, kXY),
                         parse_expr("max(y, monus(max(x, val), val))", *reg, kXY)};
  auto occ = register_occurrences(u);
  EXPECT_EQ(occ, (std::map<RegId, std::size_t>{{0, 2}, {1, 1}}));
}

TEST(RegisterOccurrences, EmptyUpdate) { EXPECT_TRUE(register_occurrences(std::vector<Expr>{}).empty()); }

TEST(Registry, IntWithZeroAndPlus) {
  auto reg = int_registry({"0", "+"});
  EXPECT_EQ(reg->ops().size(), 2u);
  EXPECT_EQ(reg->lookup("+")->arity, 2u);
  EXPECT_EQ(reg->first_constant()->name, "0");
}

TEST(Registry, UnaryMonoidOverFreeMonoid) {
  RegistryDescriptor d;
  d.domain = "monoid-unary";
  d.monoid = "free";
  d.alphabet = {"a", "b", "#"};
  auto reg = make_registry(d);
  std::vector<std::string> names;
  for (const auto& op : reg->ops()) names.push_back(op->name);
  EXPECT_EQ(names, (std::vector<std::string>{"1", "rmul[a]", "rmul[b]", "rmul[#]"}));
  EXPECT_TRUE(reg->unary_only());
  Value ab = reg->parse_value("ab");
  std::vector<Value> arg{ab};
  EXPECT_EQ(reg->lookup("rmul[#]")->eval(arg), Value::word("ab#"));
}

TEST(Registry, IfThenElse) {
  auto reg = int_registry({"ITE"});
  auto ite = reg->lookup("ITE");
  EXPECT_EQ(ite->arity, 4u);
  std::vector<Value> a = {Value::integer(2), Value::integer(2), Value::integer(7), Value::integer(9)};
  EXPECT_EQ(ite->eval(a), Value::integer(7));
  a[1] = Value::integer(3);
  EXPECT_EQ(ite->eval(a), Value::integer(9));
}

TEST(Registry, ConstantFamilyResolvesOnLookup) {
  auto reg = int_registry({"0", "+", "const"});
  EXPECT_EQ(eval_expr(parse_expr("x + 17", *reg, {"x"}), {Value::integer(3)}, nullptr), Value::integer(20));
  EXPECT_EQ(reg->find("const[5]")->eval({}), Value::integer(5));
}

TEST(Registry, Errors) {
  EXPECT_EQ(code_of([] { int_registry({"frobnicate"}); }), ErrorCode::UnknownOperation);
  EXPECT_EQ(code_of([] { int_registry({"-"}); }), ErrorCode::PartialOperationRejected);
  EXPECT_EQ(code_of([] {
              RegistryDescriptor d;
              d.domain = "quaternion";
              make_registry(d);
            }),
            ErrorCode::UnknownDomain);
  auto reg = int_registry({"0", "+"});
  EXPECT_EQ(code_of([&] { reg->lookup("max"); }), ErrorCode::UnknownOperation);
  EXPECT_EQ(code_of([&] { parse_expr("max(x, val)", *reg, {"x"}); }), ErrorCode::UnknownOperation);
  EXPECT_EQ(code_of([&] { Expr::apply(reg->lookup("+"), {Expr::val()}); }), ErrorCode::ArityMismatch);
  EXPECT_EQ(code_of([&] { parse_expr("x +", *reg, {"x"}); }), ErrorCode::ParseError);
}

TEST(Registry, ParsesValuesPerDomain) {
  auto ints = int_registry({"0"});
  EXPECT_EQ(ints->parse_value("-12"), Value::integer(-12));
  EXPECT_EQ(code_of([&] { ints->parse_value("1.5"); }), ErrorCode::ValueParseError);

  RegistryDescriptor r;
  r.domain = "rat";
  EXPECT_EQ(make_registry(r)->parse_value("6/8"), Value(Rat(3, 4)));

  RegistryDescriptor s;
  s.domain = "str";
  s.alphabet = {"a", "b"};
  auto strs = make_registry(s);
  EXPECT_EQ(strs->parse_value("abba"), Value::word("abba"));
  EXPECT_EQ(code_of([&] { strs->parse_value("abc"); }), ErrorCode::ValueParseError);

  RegistryDescriptor t;
  t.domain = "semiring";
  t.semiring = "tropical";
  auto trop = make_registry(t);
  EXPECT_EQ(trop->parse_value("inf"), Value::inf());
  EXPECT_EQ(trop->semiring()->plus(Value::integer(3), Value::inf()), Value::integer(3));
  EXPECT_EQ(trop->semiring()->times(Value::integer(3), Value::inf()), Value::inf());
}

TEST(Semiring, CatalogueSatisfiesLaws) {
  for (const char* name : {"nat-arith", "int-arith", "rat-arith", "tropical", "boolean"})
    EXPECT_TRUE(check_semiring_laws(semiring_by_name(name), kDefaultSeed).empty()) << name;
}

TEST(Semiring, BrokenDistributivityIsReported) {
  Semiring s = semiring_by_name("nat-arith");
  s.times = [](const Value& a, const Value& b) { return Value(Int(a.as_int() + b.as_int() + 1)); };
  auto bad = check_semiring_laws(s, kDefaultSeed);
  EXPECT_FALSE(bad.empty());
}

TEST(Monoid, CatalogueSatisfiesLaws) {
  EXPECT_TRUE(check_monoid_laws(monoid_by_name("free", {"a", "b"}), 7).empty());
  EXPECT_TRUE(check_monoid_laws(monoid_by_name("int-add"), 7).empty());
  EXPECT_TRUE(check_monoid_laws(monoid_by_name("int-mul"), 7).empty());
  EXPECT_TRUE(check_monoid_laws(multiplicative_monoid(semiring_by_name("tropical")), 7).empty());
}

TEST(Monoid, NonAssociativeDotIsReported) {
  Monoid m = monoid_by_name("int-add");
  m.dot = [](const Value& a, const Value& b) { return Value(Int(a.as_int() - b.as_int())); };
  EXPECT_FALSE(check_monoid_laws(m, 7).empty());
}

TEST(Expr, FormatParseRoundTrip) {
  auto reg = int_registry({"0", "+", "max", "monus"});
  for (const char* text : {"max(y, monus(max(x, val), val))", "x + val", "0", "x + y + val"}) {
    Expr e = parse_expr(text, *reg, kXY);
    EXPECT_EQ(parse_expr(format_expr(e, kXY), *reg, kXY), e) << text;
  }
}

TEST(Expr, SubstitutionIsSharing) {
  auto reg = int_registry({"0", "+"});
  Expr e = parse_expr("x + x", *reg, {"x"});
  Expr big = parse_expr("val + 0", *reg, {"x"});
  Expr s = substitute(e, std::vector<Expr>{big});
  Value cur = Value::integer(5);
  EXPECT_EQ(eval_expr(s, {}, &cur), Value::integer(10));
  EXPECT_TRUE(s.args()[0].same_node(s.args()[1]));
  EXPECT_TRUE(s.uses_val());
  EXPECT_FALSE(s.is_closed());
}

TEST(Value, Ordering) {
  EXPECT_LT(Value::integer(2), Value::integer(10));
  EXPECT_LT(Value::integer(10), Value::inf());
  EXPECT_LT(Value::word("ab"), Value::word("b"));
  EXPECT_EQ(Value::integer(3).to_string(), "3");
}

#include "streamcra/registry.hpp"

#include <algorithm>
#include <cctype>

#include "streamcra/error.hpp"

namespace streamcra {

namespace {

bool is_int_literal(std::string_view s) {
  std::size_t i = 0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

Int parse_int(std::string_view s) {
  if (!is_int_literal(s)) fail(ErrorCode::ValueParseError, "not an integer: '" + std::string(s) + "'");
  if (s[0] == '+') s.remove_prefix(1);
  return Int(std::string(s));
}

Int parse_nat(std::string_view s) {
  Int v = parse_int(s);
  if (v < 0) fail(ErrorCode::ValueParseError, "not a natural number: '" + std::string(s) + "'");
  return v;
}

Rat parse_rat(std::string_view s) {
  auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    Int n = parse_int(s.substr(0, slash));
    Int d = parse_int(s.substr(slash + 1));
    if (d == 0) fail(ErrorCode::ValueParseError, "zero denominator: '" + std::string(s) + "'");
    return Rat(n, d);
  }
  auto dot = s.find('.');
  if (dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole = "0";
    if (frac.empty() || !is_int_literal(frac) || frac[0] == '-' || frac[0] == '+')
      fail(ErrorCode::ValueParseError, "not a rational: '" + std::string(s) + "'");
    Int den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    Rat r(parse_int(whole));
    Rat f(Int(std::string(frac)), den);
    return neg ? Rat(r - f) : Rat(r + f);
  }
  return Rat(parse_int(s));
}

std::string check_word(std::string_view s, const std::vector<std::string>& alphabet) {
  for (char c : s) {
    bool ok = std::any_of(alphabet.begin(), alphabet.end(),
                          [c](const std::string& a) { return a.size() == 1 && a[0] == c; });
    if (!ok)
      fail(ErrorCode::ValueParseError,
           "letter '" + std::string(1, c) + "' of '" + std::string(s) + "' not in output alphabet");
  }
  return std::string(s);
}

Value sample_int(std::mt19937_64& rng, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return Value::integer(d(rng));
}

Value sample_rat(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n(-10, 10);
  std::uniform_int_distribution<int> d(1, 5);
  return Value(Rat(n(rng), d(rng)));
}

Value sample_word(std::mt19937_64& rng, const std::vector<std::string>& alphabet) {
  if (alphabet.empty()) return Value::word("");
  std::uniform_int_distribution<int> len(0, 3);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string s;
  for (int i = len(rng); i > 0; --i) s += alphabet[pick(rng)];
  return Value::word(s);
}

// Tropical helpers: Int or +inf.
Value trop_min(const Value& a, const Value& b) {
  if (a.is_inf()) return b;
  if (b.is_inf()) return a;
  return a.as_int() <= b.as_int() ? a : b;
}

Value trop_add(const Value& a, const Value& b) {
  if (a.is_inf() || b.is_inf()) return Value::inf();
  return Value(Int(a.as_int() + b.as_int()));
}

Value parse_trop(std::string_view s) {
  if (s == "inf" || s == "+inf" || s == "∞") return Value::inf();
  return Value(parse_int(s));
}

Value num_add(const Value& a, const Value& b) {
  if (a.is_rat()) return Value(Rat(a.as_rat() + b.as_rat()));
  return Value(Int(a.as_int() + b.as_int()));
}

Value num_mul(const Value& a, const Value& b) {
  if (a.is_rat()) return Value(Rat(a.as_rat() * b.as_rat()));
  return Value(Int(a.as_int() * b.as_int()));
}

Value num_sub(const Value& a, const Value& b) {
  if (a.is_rat()) return Value(Rat(a.as_rat() - b.as_rat()));
  return Value(Int(a.as_int() - b.as_int()));
}

Value num_zero(bool rat) { return rat ? Value(Rat(0)) : Value::integer(0); }

OpRef make_op(std::string name, std::size_t arity, std::function<Value(std::span<const Value>)> f,
              AlgebraicTags tags = {}) {
  auto op = std::make_shared<Operation>();
  op->name = std::move(name);
  op->arity = arity;
  op->eval = std::move(f);
  op->tags = std::move(tags);
  return op;
}

OpRef constant_op(std::string name, Value v) {
  return make_op(std::move(name), 0, [v](std::span<const Value>) { return v; });
}

AlgebraicTags ac(std::optional<Value> identity = std::nullopt,
                 std::optional<Value> absorbing = std::nullopt) {
  AlgebraicTags t;
  t.associative = true;
  t.commutative = true;
  t.identity = std::move(identity);
  t.absorbing = std::move(absorbing);
  return t;
}

bool is_partial_name(DomainKind k, std::string_view name) {
  static const char* const int_partial[] = {"-", "sub", "/", "div", "mod", "pred"};
  static const char* const rat_partial[] = {"/", "div", "inv"};
  if (k == DomainKind::Int)
    return std::find(std::begin(int_partial), std::end(int_partial), name) != std::end(int_partial);
  if (k == DomainKind::Rat)
    return std::find(std::begin(rat_partial), std::end(rat_partial), name) != std::end(rat_partial);
  if (k == DomainKind::Str) return name == "lquot" || name == "rquot";
  return false;
}

// Catalogue of fixed-name operations per domain.
OpRef catalogue_op(DomainKind k, const Semiring* sr, const Monoid* mo, std::string_view name) {
  const bool rat = k == DomainKind::Rat;
  if (k == DomainKind::Int || k == DomainKind::Rat) {
    auto lit = [rat](int v) { return rat ? Value(Rat(v)) : Value::integer(v); };
    if (name == "0") return constant_op("0", lit(0));
    if (name == "1") return constant_op("1", lit(1));
    if (name == "+")
      return make_op("+", 2, [](std::span<const Value> a) { return num_add(a[0], a[1]); },
                     ac(lit(0)));
    if (name == "*")
      return make_op("*", 2, [](std::span<const Value> a) { return num_mul(a[0], a[1]); },
                     ac(lit(1), lit(0)));
    if (name == "max")
      return make_op("max", 2, [](std::span<const Value> a) { return a[0] < a[1] ? a[1] : a[0]; },
                     ac());
    if (name == "min")
      return make_op("min", 2, [](std::span<const Value> a) { return a[1] < a[0] ? a[1] : a[0]; },
                     ac());
    if (name == "monus")
      return make_op("monus", 2, [rat](std::span<const Value> a) {
        Value d = num_sub(a[0], a[1]);
        return d < num_zero(rat) ? num_zero(rat) : d;
      });
    if (name == "ITE")
      return make_op("ITE", 4,
                     [](std::span<const Value> a) { return a[0] == a[1] ? a[2] : a[3]; });
    if (rat && name == "-")
      return make_op("-", 2, [](std::span<const Value> a) { return num_sub(a[0], a[1]); });
    if (name == "neg" && rat)
      return make_op("neg", 1, [](std::span<const Value> a) { return Value(Rat(-a[0].as_rat())); });
    return nullptr;
  }
  if (k == DomainKind::Str) {
    if (name == "eps") return constant_op("eps", Value::word(""));
    if (name == "concat")
      return make_op("concat", 2,
                     [](std::span<const Value> a) { return Value::word(a[0].as_str() + a[1].as_str()); },
                     [] {
                       AlgebraicTags t;
                       t.associative = true;
                       t.identity = Value::word("");
                       return t;
                     }());
    return nullptr;
  }
  if (k == DomainKind::Semiring) {
    if (name == "0") return constant_op("0", sr->zero);
    if (name == "1") return constant_op("1", sr->one);
    if (name == "+") {
      auto plus = sr->plus;
      return make_op("+", 2, [plus](std::span<const Value> a) { return plus(a[0], a[1]); },
                     ac(sr->zero));
    }
    if (name == "*") {
      auto times = sr->times;
      AlgebraicTags t;
      t.associative = true;
      t.identity = sr->one;
      t.absorbing = sr->zero;
      return make_op("*", 2, [times](std::span<const Value> a) { return times(a[0], a[1]); }, t);
    }
    return nullptr;
  }
  if (k == DomainKind::MonoidUnary) {
    if (name == "1") return constant_op("1", mo->one);
    return nullptr;
  }
  return nullptr;
}

bool family_known(DomainKind k, std::string_view fam) {
  switch (k) {
    case DomainKind::Int:
    case DomainKind::Rat: return fam == "const";
    case DomainKind::Str: return fam == "app" || fam == "str";
    case DomainKind::Semiring: return fam == "rmul" || fam == "const";
    case DomainKind::MonoidUnary: return fam == "rmul";
  }
  return false;
}

bool split_family(std::string_view name, std::string_view& fam, std::string_view& param) {
  auto lb = name.find('[');
  if (lb == std::string_view::npos || lb == 0 || name.back() != ']') return false;
  fam = name.substr(0, lb);
  param = name.substr(lb + 1, name.size() - lb - 2);
  return true;
}

void check_tags(const Operation& op, const std::function<Value(std::mt19937_64&)>& sample,
                std::mt19937_64& rng, int samples) {
  const auto& t = op.tags;
  auto eval2 = [&](const Value& a, const Value& b) {
    Value args[2] = {a, b};
    return op.eval(std::span<const Value>(args, 2));
  };
  auto violation = [&](const std::string& law, const std::string& detail) {
    fail(ErrorCode::AlgebraicTagViolation, "operation '" + op.name + "' violates " + law + ": " + detail);
  };
  if (op.arity != 2) return;
  for (int i = 0; i < samples; ++i) {
    Value a = sample(rng), b = sample(rng), c = sample(rng);
    if (t.associative && !(eval2(eval2(a, b), c) == eval2(a, eval2(b, c))))
      violation("associativity", a.to_string() + "," + b.to_string() + "," + c.to_string());
    if (t.commutative && !(eval2(a, b) == eval2(b, a)))
      violation("commutativity", a.to_string() + "," + b.to_string());
    if (t.identity && !(eval2(a, *t.identity) == a && eval2(*t.identity, a) == a))
      violation("identity", a.to_string());
    if (t.absorbing && !(eval2(a, *t.absorbing) == *t.absorbing && eval2(*t.absorbing, a) == *t.absorbing))
      violation("absorption", a.to_string());
  }
}

}  // namespace

const char* domain_name(DomainKind k) {
  switch (k) {
    case DomainKind::Int: return "int";
    case DomainKind::Rat: return "rat";
    case DomainKind::Str: return "str";
    case DomainKind::Semiring: return "semiring";
    case DomainKind::MonoidUnary: return "monoid-unary";
  }
  return "?";
}

Semiring semiring_by_name(std::string_view name) {
  Semiring s;
  s.name = std::string(name);
  if (name == "nat-arith" || name == "int-arith") {
    bool nat = name == "nat-arith";
    s.plus = [](const Value& a, const Value& b) { return Value(Int(a.as_int() + b.as_int())); };
    s.times = [](const Value& a, const Value& b) { return Value(Int(a.as_int() * b.as_int())); };
    s.zero = Value::integer(0);
    s.one = Value::integer(1);
    if (nat) {
      s.parse = [](std::string_view t) { return Value(parse_nat(t)); };
      s.sample = [](std::mt19937_64& r) { return sample_int(r, 0, 12); };
    } else {
      s.parse = [](std::string_view t) { return Value(parse_int(t)); };
      s.sample = [](std::mt19937_64& r) { return sample_int(r, -12, 12); };
    }
    return s;
  }
  if (name == "rat-arith") {
    s.plus = [](const Value& a, const Value& b) { return Value(Rat(a.as_rat() + b.as_rat())); };
    s.times = [](const Value& a, const Value& b) { return Value(Rat(a.as_rat() * b.as_rat())); };
    s.zero = Value(Rat(0));
    s.one = Value(Rat(1));
    s.parse = [](std::string_view t) { return Value(parse_rat(t)); };
    s.sample = sample_rat;
    return s;
  }
  if (name == "tropical") {
    s.plus = trop_min;
    s.times = trop_add;
    s.zero = Value::inf();
    s.one = Value::integer(0);
    s.parse = parse_trop;
    s.sample = [](std::mt19937_64& r) {
      std::uniform_int_distribution<int> coin(0, 7);
      if (coin(r) == 0) return Value::inf();
      return sample_int(r, -10, 10);
    };
    return s;
  }
  if (name == "boolean") {
    s.plus = [](const Value& a, const Value& b) { return a < b ? b : a; };
    s.times = [](const Value& a, const Value& b) { return b < a ? b : a; };
    s.zero = Value::integer(0);
    s.one = Value::integer(1);
    s.parse = [](std::string_view t) {
      Int v = parse_int(t);
      if (v != 0 && v != 1) fail(ErrorCode::ValueParseError, "boolean weight must be 0 or 1");
      return Value(v);
    };
    s.sample = [](std::mt19937_64& r) { return sample_int(r, 0, 1); };
    return s;
  }
  fail(ErrorCode::UnknownDomain, "unknown semiring '" + std::string(name) + "'");
}

Monoid monoid_by_name(std::string_view name, const std::vector<std::string>& alphabet) {
  Monoid m;
  m.name = std::string(name);
  if (name == "free") {
    for (const auto& a : alphabet)
      if (a.size() != 1) fail(ErrorCode::ParseError, "output letters must be single characters: '" + a + "'");
    m.alphabet = alphabet;
    m.dot = [](const Value& a, const Value& b) { return Value::word(a.as_str() + b.as_str()); };
    m.one = Value::word("");
    m.parse = [alphabet](std::string_view t) { return Value::word(check_word(t, alphabet)); };
    m.sample = [alphabet](std::mt19937_64& r) { return sample_word(r, alphabet); };
    return m;
  }
  if (name == "int-add") {
    m.dot = [](const Value& a, const Value& b) { return Value(Int(a.as_int() + b.as_int())); };
    m.one = Value::integer(0);
    m.parse = [](std::string_view t) { return Value(parse_int(t)); };
    m.sample = [](std::mt19937_64& r) { return sample_int(r, -12, 12); };
    return m;
  }
  if (name == "int-mul") {
    m.dot = [](const Value& a, const Value& b) { return Value(Int(a.as_int() * b.as_int())); };
    m.one = Value::integer(1);
    m.parse = [](std::string_view t) { return Value(parse_int(t)); };
    m.sample = [](std::mt19937_64& r) { return sample_int(r, -6, 6); };
    return m;
  }
  fail(ErrorCode::UnknownDomain, "unknown monoid '" + std::string(name) + "'");
}

Monoid multiplicative_monoid(const Semiring& s) {
  Monoid m;
  m.name = s.name + "-times";
  m.dot = s.times;
  m.one = s.one;
  m.parse = s.parse;
  m.sample = s.sample;
  return m;
}

std::vector<std::string> check_semiring_laws(const Semiring& s, std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  std::set<std::string> bad;
  for (int i = 0; i < samples; ++i) {
    Value a = s.sample(rng), b = s.sample(rng), c = s.sample(rng);
    if (!(s.plus(s.plus(a, b), c) == s.plus(a, s.plus(b, c)))) bad.insert("plus-associative");
    if (!(s.plus(a, b) == s.plus(b, a))) bad.insert("plus-commutative");
    if (!(s.plus(a, s.zero) == a)) bad.insert("plus-identity");
    if (!(s.times(s.times(a, b), c) == s.times(a, s.times(b, c)))) bad.insert("times-associative");
    if (!(s.times(a, s.one) == a && s.times(s.one, a) == a)) bad.insert("times-identity");
    if (!(s.times(a, s.zero) == s.zero && s.times(s.zero, a) == s.zero)) bad.insert("zero-absorbing");
    if (!(s.times(a, s.plus(b, c)) == s.plus(s.times(a, b), s.times(a, c))))
      bad.insert("left-distributive");
    if (!(s.times(s.plus(a, b), c) == s.plus(s.times(a, c), s.times(b, c))))
      bad.insert("right-distributive");
  }
  return {bad.begin(), bad.end()};
}

std::vector<std::string> check_monoid_laws(const Monoid& m, std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  std::set<std::string> bad;
  for (int i = 0; i < samples; ++i) {
    Value a = m.sample(rng), b = m.sample(rng), c = m.sample(rng);
    if (!(m.dot(m.dot(a, b), c) == m.dot(a, m.dot(b, c)))) bad.insert("associative");
    if (!(m.dot(a, m.one) == a && m.dot(m.one, a) == a)) bad.insert("identity");
  }
  return {bad.begin(), bad.end()};
}

OpRef OperationRegistry::instantiate(std::string_view fam, std::string_view param) const {
  std::string name = std::string(fam) + "[" + std::string(param) + "]";
  if (fam == "const") {
    Value v = parse_value(param);
    return constant_op(name, v);
  }
  if (fam == "str") return constant_op(name, Value::word(check_word(param, alphabet_)));
  if (fam == "app") {
    std::string w = check_word(param, alphabet_);
    return make_op(name, 1, [w](std::span<const Value> a) { return Value::word(a[0].as_str() + w); });
  }
  if (fam == "rmul") {
    Value d = parse_value(param);
    AlgebraicTags t;
    t.right_mult_const = d;
    if (kind_ == DomainKind::Semiring) {
      auto times = semiring_->times;
      return make_op(name, 1, [times, d](std::span<const Value> a) { return times(a[0], d); }, t);
    }
    auto dot = monoid_->dot;
    return make_op(name, 1, [dot, d](std::span<const Value> a) { return dot(a[0], d); }, t);
  }
  return nullptr;
}

OpRef OperationRegistry::find(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it != by_name_.end()) return it->second;
  std::string_view fam, param;
  if (split_family(name, fam, param) && families_.count(std::string(fam))) {
    try {
      return instantiate(fam, param);
    } catch (const Error&) {
      return nullptr;
    }
  }
  return nullptr;
}

OpRef OperationRegistry::lookup(std::string_view name) const {
  OpRef op = find(name);
  if (!op)
    fail(ErrorCode::UnknownOperation,
         "operation '" + std::string(name) + "' not in " + domain_name(kind_) + " registry");
  return op;
}

OpRef OperationRegistry::first_constant() const {
  for (const auto& op : ops_)
    if (op->arity == 0) return op;
  return nullptr;
}

bool OperationRegistry::unary_only() const {
  if (kind_ == DomainKind::MonoidUnary) return true;
  for (const auto& op : ops_)
    if (op->arity > 1) return false;
  for (const auto& f : families_)
    if (f != "const" && f != "str" && f != "app" && f != "rmul") return false;
  return true;
}

Value OperationRegistry::parse_value(std::string_view text) const {
  switch (kind_) {
    case DomainKind::Int: return Value(parse_int(text));
    case DomainKind::Rat: return Value(parse_rat(text));
    case DomainKind::Str: return Value::word(check_word(text, alphabet_));
    case DomainKind::Semiring: return semiring_->parse(text);
    case DomainKind::MonoidUnary: return monoid_->parse(text);
  }
  fail(ErrorCode::ValueParseError, "cannot parse value");
}

Value OperationRegistry::sample_value(std::mt19937_64& rng) const {
  switch (kind_) {
    case DomainKind::Int: return sample_int(rng, -20, 20);
    case DomainKind::Rat: return sample_rat(rng);
    case DomainKind::Str: return sample_word(rng, alphabet_);
    case DomainKind::Semiring: return semiring_->sample(rng);
    case DomainKind::MonoidUnary: return monoid_->sample(rng);
  }
  return Value();
}

bool OperationRegistry::same_domain(const OperationRegistry& o) const {
  if (kind_ != o.kind_ || alphabet_ != o.alphabet_) return false;
  if (kind_ == DomainKind::Semiring) return semiring_->name == o.semiring_->name;
  if (kind_ == DomainKind::MonoidUnary) return monoid_->name == o.monoid_->name;
  return true;
}

RegistryRef make_registry(const RegistryDescriptor& desc, std::uint64_t seed) {
  auto reg = std::make_shared<OperationRegistry>();
  reg->descriptor_ = desc;
  const std::string& d = desc.domain;
  std::vector<std::string> defaults;
  if (d == "int" || d == "nat") {
    reg->kind_ = DomainKind::Int;
    defaults = {"0", "1", "+", "max", "min", "monus", "ITE", "const"};
  } else if (d == "rat") {
    reg->kind_ = DomainKind::Rat;
    defaults = {"0", "1", "+", "-", "*", "max", "min", "monus", "ITE", "const"};
  } else if (d == "str") {
    reg->kind_ = DomainKind::Str;
    defaults = {"eps"};
    for (const auto& a : desc.alphabet) defaults.push_back("app[" + a + "]");
    defaults.push_back("concat");
    defaults.push_back("app");
    defaults.push_back("str");
  } else if (d == "semiring") {
    reg->kind_ = DomainKind::Semiring;
    reg->semiring_ = semiring_by_name(desc.semiring.empty() ? "nat-arith" : desc.semiring);
    defaults = {"0", "1", "+", "rmul"};
  } else if (d == "monoid-unary") {
    reg->kind_ = DomainKind::MonoidUnary;
    std::string mname = desc.monoid.empty() ? "free" : desc.monoid;
    reg->monoid_ = monoid_by_name(mname, desc.alphabet);
    defaults = {"1"};
    if (mname == "free")
      for (const auto& a : desc.alphabet) defaults.push_back("rmul[" + a + "]");
    defaults.push_back("rmul");
  } else {
    fail(ErrorCode::UnknownDomain, "unknown domain '" + d + "'");
  }
  if (reg->kind_ == DomainKind::Str || reg->kind_ == DomainKind::MonoidUnary) {
    for (const auto& a : desc.alphabet)
      if (a.size() != 1) fail(ErrorCode::ParseError, "output letters must be single characters: '" + a + "'");
    reg->alphabet_ = desc.alphabet;
  }

  const Semiring* sr = reg->semiring_ ? &*reg->semiring_ : nullptr;
  const Monoid* mo = reg->monoid_ ? &*reg->monoid_ : nullptr;
  const std::vector<std::string>& names = desc.ops ? *desc.ops : defaults;
  for (const auto& name : names) {
    if (is_partial_name(reg->kind_, name))
      fail(ErrorCode::PartialOperationRejected,
           "operation '" + name + "' is partial on the " + domain_name(reg->kind_) +
               " domain (use monus for truncated subtraction)");
    if (family_known(reg->kind_, name)) {
      reg->families_.insert(name);
      continue;
    }
    if (reg->by_name_.count(name)) continue;
    OpRef op = catalogue_op(reg->kind_, sr, mo, name);
    std::string_view fam, param;
    if (!op && split_family(name, fam, param) && family_known(reg->kind_, fam))
      op = reg->instantiate(fam, param);
    if (!op)
      fail(ErrorCode::UnknownOperation,
           "operation '" + name + "' is not catalogued for the " + domain_name(reg->kind_) + " domain");
    reg->ops_.push_back(op);
    reg->by_name_.emplace(op->name, op);
  }

  std::mt19937_64 rng(seed);
  const OperationRegistry& r = *reg;
  auto sample = [&r](std::mt19937_64& g) { return r.sample_value(g); };
  for (const auto& op : reg->ops_) check_tags(*op, sample, rng, 1000);
  return reg;
}

}  // namespace streamcra

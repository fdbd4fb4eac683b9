#include "streamcra/expr.hpp"

#include <array>
#include <cctype>
#include <unordered_map>

#include "streamcra/error.hpp"

namespace streamcra {

struct Expr::Node {
  Kind kind = Kind::Val;
  RegId reg = 0;
  OpRef op;
  std::vector<Expr> args;
  bool closed = false;
  bool val = false;
  bool regs = false;
  std::size_t size = 1;
};

namespace {

const std::shared_ptr<const Expr::Node>& val_node();

}  // namespace

Expr::Expr() : node_(val_node()) {}

namespace {

const std::shared_ptr<const Expr::Node>& val_node() {
  static const std::shared_ptr<const Expr::Node> n = [] {
    auto v = std::make_shared<Expr::Node>();
    v->kind = Expr::Kind::Val;
    v->val = true;
    return v;
  }();
  return n;
}

}  // namespace

Expr Expr::constant(OpRef op) {
  if (op->arity != 0)
    fail(ErrorCode::ArityMismatch, "operation '" + op->name + "' is not a constant");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->op = std::move(op);
  n->closed = true;
  return Expr(std::move(n));
}

Expr Expr::reg(RegId r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Reg;
  n->reg = r;
  n->regs = true;
  return Expr(std::move(n));
}

Expr Expr::val() { return Expr(val_node()); }

Expr Expr::apply(OpRef op, std::vector<Expr> args) {
  if (op->arity != args.size())
    fail(ErrorCode::ArityMismatch, "operation '" + op->name + "' expects " +
                                       std::to_string(op->arity) + " arguments, got " +
                                       std::to_string(args.size()));
  if (args.empty()) return constant(std::move(op));
  auto n = std::make_shared<Node>();
  n->kind = Kind::Apply;
  n->op = std::move(op);
  n->closed = true;
  for (const auto& a : args) {
    n->closed = n->closed && a.node_->closed;
    n->val = n->val || a.node_->val;
    n->regs = n->regs || a.node_->regs;
    n->size += a.node_->size;
  }
  n->args = std::move(args);
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
RegId Expr::reg_id() const { return node_->reg; }
const OpRef& Expr::op() const { return node_->op; }
const std::vector<Expr>& Expr::args() const { return node_->args; }
bool Expr::is_closed() const { return node_->closed; }
bool Expr::uses_val() const { return node_->val; }
bool Expr::uses_regs() const { return node_->regs; }
std::size_t Expr::size() const { return node_->size; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::Val: return true;
    case Expr::Kind::Reg: return a.reg_id() == b.reg_id();
    case Expr::Kind::Const: return a.op()->name == b.op()->name;
    case Expr::Kind::Apply:
      if (a.op()->name != b.op()->name || a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!(a.args()[i] == b.args()[i])) return false;
      return true;
  }
  return false;
}

Value eval_expr(const Expr& e, const Valuation& env, const Value* current, std::uint64_t* op_count) {
  switch (e.kind()) {
    case Expr::Kind::Reg:
      if (e.reg_id() >= env.size())
        fail(ErrorCode::UnboundRegister, "register #" + std::to_string(e.reg_id()) + " is unbound");
      return env[e.reg_id()];
    case Expr::Kind::Val:
      if (!current) fail(ErrorCode::MissingCurrentVal, "val used without a current data value");
      return *current;
    case Expr::Kind::Const:
      if (op_count) ++*op_count;
      return e.op()->eval({});
    case Expr::Kind::Apply: {
      const auto& args = e.args();
      if (op_count) ++*op_count;
      if (args.size() <= 4) {
        std::array<Value, 4> vals;
        for (std::size_t i = 0; i < args.size(); ++i) vals[i] = eval_expr(args[i], env, current, op_count);
        return e.op()->eval(std::span<const Value>(vals.data(), args.size()));
      }
      std::vector<Value> vals;
      vals.reserve(args.size());
      for (const auto& a : args) vals.push_back(eval_expr(a, env, current, op_count));
      return e.op()->eval(vals);
    }
  }
  return Value();
}

namespace {

struct Substituter {
  const std::function<Expr(RegId)>* by_reg = nullptr;
  const Expr* val_replacement = nullptr;
  std::unordered_map<const void*, Expr> memo;

  Expr run(const Expr& e) {
    switch (e.kind()) {
      case Expr::Kind::Const: return e;
      case Expr::Kind::Reg: return by_reg ? (*by_reg)(e.reg_id()) : e;
      case Expr::Kind::Val: return val_replacement ? *val_replacement : e;
      case Expr::Kind::Apply: break;
    }
    if (!by_reg && !e.uses_val()) return e;
    if (by_reg && !e.uses_regs() && !(val_replacement && e.uses_val())) return e;
    const void* key = &e.args();
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<Expr> args;
    args.reserve(e.args().size());
    bool changed = false;
    for (const auto& a : e.args()) {
      args.push_back(run(a));
      changed = changed || !args.back().same_node(a);
    }
    Expr out = changed ? Expr::apply(e.op(), std::move(args)) : e;
    memo.emplace(key, out);
    return out;
  }
};

}  // namespace

Expr substitute(const Expr& e, const std::function<Expr(RegId)>& by_reg) {
  Substituter s;
  s.by_reg = &by_reg;
  return s.run(e);
}

Expr substitute(const Expr& e, std::span<const Expr> by_reg) {
  std::function<Expr(RegId)> f = [by_reg](RegId r) {
    if (r >= by_reg.size())
      fail(ErrorCode::UnboundRegister, "register #" + std::to_string(r) + " has no substitute");
    return by_reg[r];
  };
  return substitute(e, f);
}

Expr substitute_val(const Expr& e, const Expr& replacement) {
  Substituter s;
  s.val_replacement = &replacement;
  return s.run(e);
}

void count_registers(const Expr& e, std::vector<std::size_t>& counts) {
  switch (e.kind()) {
    case Expr::Kind::Reg:
      if (e.reg_id() >= counts.size()) counts.resize(e.reg_id() + 1, 0);
      ++counts[e.reg_id()];
      return;
    case Expr::Kind::Apply:
      if (!e.uses_regs()) return;
      for (const auto& a : e.args()) count_registers(a, counts);
      return;
    default: return;
  }
}

std::map<RegId, std::size_t> register_occurrences(std::span<const Expr> rhs) {
  std::vector<std::size_t> counts;
  for (const auto& e : rhs) count_registers(e, counts);
  std::map<RegId, std::size_t> out;
  for (std::size_t r = 0; r < counts.size(); ++r)
    if (counts[r]) out[static_cast<RegId>(r)] = counts[r];
  return out;
}

bool arity_ok(const Expr& e) {
  if (e.kind() == Expr::Kind::Const) return e.op()->arity == 0;
  if (e.kind() != Expr::Kind::Apply) return true;
  if (e.op()->arity != e.args().size()) return false;
  for (const auto& a : e.args())
    if (!arity_ok(a)) return false;
  return true;
}

namespace {

class ExprParser {
 public:
  ExprParser(std::string_view text, const OperationRegistry& reg, const std::vector<std::string>& regs)
      : s_(text), reg_(reg), regs_(regs) {}

  Expr parse() {
    Expr e = sum();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& msg) {
    fail(ErrorCode::ParseError, "expression '" + std::string(s_) + "' at " + std::to_string(pos_) + ": " + msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'';
  }

  Expr sum() {
    Expr e = product();
    while (eat('+')) e = Expr::apply(reg_.lookup("+"), {e, product()});
    return e;
  }

  Expr product() {
    Expr e = atom();
    while (eat('*')) e = Expr::apply(reg_.lookup("*"), {e, atom()});
    return e;
  }

  Expr atom() {
    skip();
    if (eat('(')) {
      Expr e = sum();
      if (!eat(')')) error("expected ')'");
      return e;
    }
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+') && pos_ + 1 < s_.size() &&
        std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))
      ++pos_;
    while (pos_ < s_.size() && name_char(s_[pos_])) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '/' && pos_ > start) {  // rational numeral
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ < s_.size() && s_[pos_] == '[') {
      std::size_t close = s_.find(']', pos_);
      if (close == std::string_view::npos) error("unterminated '['");
      pos_ = close + 1;
    }
    std::string name(s_.substr(start, pos_ - start));
    if (name.empty()) error("expected an operand");
    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      OpRef op = reg_.lookup(name);
      std::vector<Expr> args;
      if (!eat(')')) {
        do {
          args.push_back(sum());
        } while (eat(','));
        if (!eat(')')) error("expected ')' after arguments of '" + name + "'");
      }
      return Expr::apply(op, std::move(args));
    }
    if (name == "val") return Expr::val();
    for (std::size_t i = 0; i < regs_.size(); ++i)
      if (regs_[i] == name) return Expr::reg(static_cast<RegId>(i));
    if (OpRef op = reg_.find(name)) {
      if (op->arity != 0)
        fail(ErrorCode::ArityMismatch, "operation '" + name + "' used without arguments");
      return Expr::constant(op);
    }
    bool numeral = std::isdigit(static_cast<unsigned char>(name.back())) != 0;
    if (!numeral) fail(ErrorCode::UnknownOperation, "unknown identifier '" + name + "' in expression '" + std::string(s_) + "'");
    if (OpRef op = reg_.find("const[" + name + "]")) return Expr::constant(op);
    if (OpRef one = reg_.find("1"); one && reg_.kind() == DomainKind::Semiring) {
      if (OpRef mul = reg_.find("rmul[" + name + "]"))
        return Expr::apply(mul, {Expr::constant(one)});
    }
    fail(ErrorCode::UnknownOperation, "unknown identifier '" + name + "' in expression '" +
                                          std::string(s_) + "'");
  }

  std::string_view s_;
  const OperationRegistry& reg_;
  const std::vector<std::string>& regs_;
  std::size_t pos_ = 0;
};

int precedence(const Expr& e) {
  if (e.kind() == Expr::Kind::Apply && e.args().size() == 2) {
    if (e.op()->name == "+") return 1;
    if (e.op()->name == "*") return 2;
  }
  return 3;
}

void format_into(const Expr& e, const std::vector<std::string>& names, std::string& out) {
  switch (e.kind()) {
    case Expr::Kind::Val: out += "val"; return;
    case Expr::Kind::Reg:
      if (e.reg_id() < names.size()) out += names[e.reg_id()];
      else out += "r" + std::to_string(e.reg_id());
      return;
    case Expr::Kind::Const: out += e.op()->name; return;
    case Expr::Kind::Apply: break;
  }
  int p = precedence(e);
  if (p < 3) {
    const Expr& l = e.args()[0];
    const Expr& r = e.args()[1];
    bool lp = precedence(l) < p;
    bool rp = precedence(r) <= p;
    if (lp) out += '(';
    format_into(l, names, out);
    if (lp) out += ')';
    out += p == 1 ? " + " : " * ";
    if (rp) out += '(';
    format_into(r, names, out);
    if (rp) out += ')';
    return;
  }
  out += e.op()->name;
  out += '(';
  for (std::size_t i = 0; i < e.args().size(); ++i) {
    if (i) out += ", ";
    format_into(e.args()[i], names, out);
  }
  out += ')';
}

}  // namespace

Expr parse_expr(std::string_view text, const OperationRegistry& reg,
                const std::vector<std::string>& register_names) {
  return ExprParser(text, reg, register_names).parse();
}

std::string format_expr(const Expr& e, const std::vector<std::string>& register_names) {
  std::string out;
  format_into(e, register_names, out);
  return out;
}

}  // namespace streamcra

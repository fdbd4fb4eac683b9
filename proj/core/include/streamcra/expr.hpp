#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "streamcra/registry.hpp"
#include "streamcra/value.hpp"

namespace streamcra {

using RegId = std::uint32_t;

/// Immutable expression over registers and the current data value `val`.
/// Subtrees are shared, so substitution never copies.
class Expr {
 public:
  enum class Kind : std::uint8_t { Const, Reg, Val, Apply };

  Expr();  // Val
  static Expr constant(OpRef op);
  static Expr reg(RegId r);
  static Expr val();
  /// Throws ArityMismatch when args.size() != op->arity.
  static Expr apply(OpRef op, std::vector<Expr> args);

  Kind kind() const;
  RegId reg_id() const;
  const OpRef& op() const;
  const std::vector<Expr>& args() const;

  bool is_closed() const;   // no Reg and no Val
  bool uses_val() const;
  bool uses_regs() const;
  std::size_t size() const;  // node count, shared nodes counted per occurrence

  bool same_node(const Expr& o) const { return node_ == o.node_; }
  friend bool operator==(const Expr& a, const Expr& b);

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

using Valuation = std::vector<Value>;
using Update = std::vector<Expr>;  // indexed by register

/// Errors: UnboundRegister, MissingCurrentVal.
Value eval_expr(const Expr& e, const Valuation& env, const Value* current,
                std::uint64_t* op_count = nullptr);

/// Replace each register r by by_reg(r); `val` is kept.
Expr substitute(const Expr& e, const std::function<Expr(RegId)>& by_reg);
Expr substitute(const Expr& e, std::span<const Expr> by_reg);
Expr substitute_val(const Expr& e, const Expr& replacement);

/// Occurrence count per register over all right-hand sides (val excluded).
std::map<RegId, std::size_t> register_occurrences(std::span<const Expr> rhs);
void count_registers(const Expr& e, std::vector<std::size_t>& counts);

/// True iff every Apply node's child count equals its operation's arity.
bool arity_ok(const Expr& e);

/// Infix `+` and `*`, prefix `name(args)`, parametric `name[p](args)`,
/// register names, `val`, constants by name or numeral.
/// Errors: ParseError, UnknownOperation, ArityMismatch.
Expr parse_expr(std::string_view text, const OperationRegistry& reg,
                const std::vector<std::string>& register_names);
std::string format_expr(const Expr& e, const std::vector<std::string>& register_names);

}  // namespace streamcra

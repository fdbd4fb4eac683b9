#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "streamcra/cra.hpp"

namespace streamcra {

struct Query;
using QueryRef = std::shared_ptr<const Query>;

struct Query {
  enum class Kind { Eps, Item, Op, Else, Split, Iter, PrefixSum };
  Kind kind = Kind::Eps;
  std::vector<Symbol> tags;  // Item
  Expr expr;                 // Eps and Item: output; Iter and PrefixSum: initial value
  OpRef op;                  // Op, Split, Iter, PrefixSum
  std::vector<QueryRef> kids;
};

/// Errors for all builders: ArityMismatch, PreconditionViolation.
QueryRef q_eps(Expr c);
QueryRef q_item(std::vector<Symbol> tags, Expr e);
QueryRef q_op(OpRef op, std::vector<QueryRef> kids);
QueryRef q_else(QueryRef f, QueryRef g);
QueryRef q_split(QueryRef f, QueryRef g, OpRef op);
QueryRef q_iter(QueryRef f, Expr c, OpRef op);
QueryRef q_prefixsum(QueryRef f, Expr c, OpRef op);

struct QueryProgram {
  Alphabet alphabet;
  RegistryRef registry;
  QueryRef root;
};

/// `eps(c)`, `item([a b], expr)`, `op(name; q1; ...; qn)`, `else(q1; q2)`,
/// `split(q1; q2; name)`, `iter(q; c; name)`, `prefixsum(q; c; name)`.
/// Errors: ParseError, UnknownOperation, ArityMismatch, TagOutOfAlphabet.
QueryRef parse_query(std::string_view text, const Alphabet& alphabet, const OperationRegistry& reg);
std::string format_query(const Query& q, const Alphabet& alphabet);

/// Rate computed from leaf rates with ∩, ∪, ⊙, ⊙* and Σ*.
Dfa query_rate(const QueryProgram& p);
Dfa query_rate(const QueryRef& q, const Alphabet& alphabet);

/// Literal definitional semantics. Errors: BoundExceeded, PrefixSumOnPartial.
std::optional<Value> oracle_eval(const QueryProgram& p, const DataWord& w, std::size_t bound = 12);

/// ε-free, trim, unambiguous machine. Errors: PrefixSumOnPartial, NoConstant.
Cra compile(const QueryProgram& p, std::vector<std::string>* warnings = nullptr);

bool copyless_report(const QueryProgram& p);

}  // namespace streamcra

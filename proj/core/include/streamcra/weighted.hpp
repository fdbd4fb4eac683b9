#pragma once

#include <optional>
#include <string>
#include <vector>

#include "streamcra/cra.hpp"

namespace streamcra {

/// Weighted automaton over a semiring with a dense transition tensor.
struct WeightedAutomaton {
  Alphabet alphabet;
  std::string semiring_name;
  Semiring semiring;
  std::vector<std::string> states;
  std::vector<Value> delta;  // ((p * |Σ|) + a) * |Q| + q
  std::vector<Value> init;
  std::vector<Value> final;

  std::size_t num_states() const { return states.size(); }
  const Value& weight(std::size_t p, Symbol a, std::size_t q) const;
  Value& weight(std::size_t p, Symbol a, std::size_t q);
};

/// All weights zero.
WeightedAutomaton make_wa(const std::string& semiring, const Alphabet& alphabet, std::vector<std::string> states);

Value wa_eval(const WeightedAutomaton& w, const Word& word);
/// Explicit sum over all |Q|^(n+1) paths. Errors: BoundExceeded.
Value wa_path_oracle(const WeightedAutomaton& w, const Word& word, std::size_t max_paths = 1000000);
/// Nonzero edges, nonzero initial and final weights.
Nfa support_nfa(const WeightedAutomaton& w);
bool is_unambiguous_wa(const WeightedAutomaton& w);

/// Single-state copyful machine with one register per state.
Cra wa_to_cra(const WeightedAutomaton& w);
/// Errors: RegistryMismatch, UnknownOperation.
Cra wa_to_cra(const WeightedAutomaton& w, const RegistryRef& registry);

struct LinearForm {
  std::vector<Value> coeffs;  // per register
  Value constant;
};

/// x1·d1 + ... + xn·dn + d. Errors: NonLinearizableExpression.
LinearForm linear_normalize(const Expr& e, std::size_t num_registers, const Semiring& s);

/// States Q ∪ Q×X. Errors: NonLinearizableExpression, PartialRate, RegistryMismatch.
WeightedAutomaton cra_to_wa(const Cra& m);

/// Unambiguous weighted automaton over a monoid: partial initial and final
/// weights, one weight per edge. The registry is a monoid-unary registry.
struct MonoidWa {
  struct Edge {
    std::size_t from;
    Symbol tag;
    Value weight;
    std::size_t to;
  };
  Alphabet alphabet;
  RegistryRef registry;
  std::vector<std::string> states;
  std::vector<Edge> edges;
  std::vector<std::optional<Value>> init;
  std::vector<std::optional<Value>> final;

  std::size_t num_states() const { return states.size(); }
};

Nfa support_nfa(const MonoidWa& w);
bool is_unambiguous_wa(const MonoidWa& w);
/// Product along the unique successful path. Errors: AmbiguityDetected.
std::optional<Value> monoid_wa_eval(const MonoidWa& w, const Word& word);

/// Multiplicative monoid of the semiring; zero weights become absent.
/// Errors: RegistryMismatch when no monoid registry matches the semiring.
MonoidWa monoid_view(const WeightedAutomaton& w);

/// One register, x := x·d per edge. Errors: NotUnambiguous.
Cra uwa_to_copyless_ucra(const MonoidWa& w);
/// Through unary_to_copyless. Errors: NonUnaryOperation, PreconditionViolation.
MonoidWa copyless_ucra_to_uwa(const Cra& m);

}  // namespace streamcra

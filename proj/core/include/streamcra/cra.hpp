#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "streamcra/automata.hpp"
#include "streamcra/expr.hpp"
#include "streamcra/registry.hpp"

namespace streamcra {

struct Transition {
  std::size_t from = 0;
  int tag = kEpsilon;  // kEpsilon or a Symbol
  Update update;       // one expression per register
  std::size_t to = 0;
};

/// Cost register automaton. `init[q]` is set for initial states and holds
/// closed expressions; `final[q]` is set for accepting states.
struct Cra {
  Alphabet alphabet;
  std::vector<std::string> registers;
  std::vector<std::string> states;
  std::vector<Transition> transitions;
  std::vector<std::optional<Update>> init;
  std::vector<std::optional<Expr>> final;
  RegistryRef registry;

  std::size_t num_states() const { return states.size(); }
  std::size_t num_registers() const { return registers.size(); }
  std::size_t add_state(std::string name);
  bool has_epsilon() const;
  /// x := x for every register.
  Update identity_update() const;
};

struct CraDiagnostics {
  bool deterministic = false;
  bool unambiguous = false;
  bool copyless = false;
  bool trim = false;
  bool arity_ok = false;
  bool epsilon_free = false;
  std::vector<std::string> messages;
};

/// Errors: ArityMismatch, EpsilonCycle.
CraDiagnostics validate(const Cra& m);

/// Removes states that are unreachable or cannot reach an accepting state.
Cra trim(const Cra& m);
/// Underlying NFA with updates erased (keeps ε-transitions).
Nfa rate(const Cra& m);
/// Composes updates along ε-paths. Errors: EpsilonCycle, PreconditionViolation
/// (val on an ε-transition).
Cra eliminate_epsilon(const Cra& m);

struct EvalStats {
  std::uint64_t items = 0;
  std::size_t max_live_tokens = 0;
  std::size_t max_stored_values = 0;
  std::uint64_t op_applications = 0;
};

struct Item {
  Symbol tag = 0;
  Value value;
};
using DataWord = std::vector<Item>;

/// One token per state. The machine must be ε-free, trim and unambiguous.
class StreamEvaluator {
 public:
  /// Errors: PreconditionViolation. `check` validates the machine first.
  explicit StreamEvaluator(const Cra& m, bool check = true);

  /// Errors: TagOutOfAlphabet, AmbiguityDetected.
  void push(Symbol tag, const Value& value);
  /// Output on the input consumed so far; nullopt when undefined.
  std::optional<Value> result() const;
  const EvalStats& stats() const { return stats_; }
  std::size_t live_tokens() const;
  void reset();

 private:
  void note_tokens();

  const Cra* m_;
  std::vector<std::vector<std::size_t>> by_state_tag_;  // (q * k + a) -> transitions
  std::vector<std::optional<Valuation>> tokens_;
  mutable EvalStats stats_;
};

std::optional<Value> eval_stream(const Cra& m, const DataWord& w, EvalStats* stats = nullptr);

/// Values of all accepting runs, ε-transitions included.
/// Errors: BoundExceeded when |w| > bound, EpsilonCycle.
std::vector<Value> eval_paths_oracle(const Cra& m, const DataWord& w, std::size_t bound = 12);

/// Subset construction with registers Q×X, named "q.x".
/// Errors: NotUnambiguous, NoConstant.
Cra ucra_to_dcra(const Cra& m);

/// One-register copyless machine over states Q×(X∪{⊥}).
/// Errors: NonUnaryOperation, NoConstant.
Cra unary_to_copyless(const Cra& m);

/// Restricts the rate to L(d). Errors: AlphabetMismatch.
Cra product_with_dfa(const Cra& m, const Dfa& d);

std::string to_dot(const Cra& m, const std::string& name = "cra");

}  // namespace streamcra

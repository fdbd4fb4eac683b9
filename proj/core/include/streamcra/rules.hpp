#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "streamcra/cra.hpp"

namespace streamcra {

/// Rule patterns are kept as minimal complete DFAs; regex text is accepted
/// and produced at the I/O boundary.
struct VertexRule {
  std::size_t copy = 0;
  std::string label;  // "val", "id", or a registry operation
  Dfa r1, r2;
};

struct EdgeRule {
  std::size_t src = 0;  // argument vertex
  std::size_t dst = 0;  // consuming vertex
  std::size_t arg = 1;  // 1-based argument index
  Dfa r1, r2, r3;
};

/// Forward-only word-to-DAG transduction in regex-rule normal form.
struct RuleTransduction {
  Alphabet alphabet;
  RegistryRef registry;
  std::vector<std::string> copies;
  Dfa domain;
  std::vector<VertexRule> vertex_rules;
  std::vector<EdgeRule> edge_rules;

  /// Throws ParseError for an undeclared copy.
  std::size_t copy_index(std::string_view name) const;
  std::size_t add_copy(std::string name);
};

/// Empty rule set over `domain`.
RuleTransduction make_rules(const Alphabet& alphabet, RegistryRef registry, std::vector<std::string> copies,
                            std::string_view domain_regex);
/// Errors: ParseError, UnknownOperation.
void add_vertex_rule(RuleTransduction& t, std::string_view copy, std::string label, std::string_view r1,
                     std::string_view r2);
void add_edge_rule(RuleTransduction& t, std::string_view src, std::string_view dst, std::size_t arg,
                   std::string_view r1, std::string_view r2, std::string_view r3);

/// Arity of val (0), id (1) or a registry operation. Errors: UnknownOperation.
std::size_t label_arity(const RuleTransduction& t, const std::string& label);
std::size_t max_arity(const RuleTransduction& t);

enum class CheckStatus { Pass, Fail, Skipped };

struct ConditionReport {
  CheckStatus status = CheckStatus::Pass;
  std::string message;
  std::optional<std::string> witness;  // "prefix | suffix" or a plain word
};

/// Conditions 1..7 in order: one label, active endpoints, output existence,
/// no local cycle, arity, unique sink, no val at position 0. Conditions 5
/// and 6 are decided on the future-past automaton and are skipped while any
/// of 1..4 fails.
struct WellFormedness {
  std::array<ConditionReport, 7> conditions;
  bool ok() const;
  std::vector<int> failed() const;  // 1-based
};

WellFormedness check_wellformed(const RuleTransduction& t);

/// No vertex can have two outgoing edges.
bool is_tree(const RuleTransduction& t);
/// Every edge middle is ε or a single letter.
bool is_single_step(const RuleTransduction& t);

struct OutputDag {
  struct Vertex {
    std::size_t copy;
    std::size_t position;
    std::string label;
  };
  struct Edge {
    std::size_t src;
    std::size_t arg;
    std::size_t dst;
  };
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::size_t sink = 0;
};

/// nullopt outside the domain. Errors: MalformedDag.
std::optional<OutputDag> materialize_dag(const RuleTransduction& t, const Word& w);
/// Errors: MalformedDag.
Value eval_dag(const RuleTransduction& t, const OutputDag& g, const DataWord& w);
std::optional<Value> dag_oracle_eval(const RuleTransduction& t, const DataWord& w);

/// Long edges become chains of fresh id copies, one per state of the pruned
/// minimal DFA of the middle pattern.
RuleTransduction single_step(const RuleTransduction& t);

/// Product of prefix-test DFAs, reduced by test profile.
struct PastAutomaton {
  Dfa dfa;
  std::vector<Dfa> tests;
  std::vector<std::vector<bool>> holds;  // [state][test]
};

PastAutomaton past_automaton(const std::vector<Dfa>& tests, const Alphabet& alphabet);
/// Prefix tests of vertex rules and of single-step edge rules.
PastAutomaton past_automaton(const RuleTransduction& t);

/// Atomaton of the suffix tests; the domain is one of the tests.
struct FutureAutomaton {
  Atomaton atoms;
  std::vector<Dfa> tests;
  std::vector<std::vector<bool>> holds;  // [atom][test]
  std::vector<bool> initial;             // atom inside the domain
};

FutureAutomaton future_automaton(const std::vector<Dfa>& tests, const Alphabet& alphabet);
/// Errors: PreconditionViolation when t is not single-step.
FutureAutomaton future_automaton(const RuleTransduction& t);

/// What the enabled rules say about one position.
struct Shape {
  struct Edge {
    std::size_t src;
    std::size_t arg;
    std::size_t dst;
  };
  std::vector<std::vector<std::size_t>> rules;  // per copy: firing vertex rules
  std::vector<Edge> eps_edges;
  std::vector<std::pair<Symbol, Edge>> letter_edges;  // into the next position
  std::vector<std::size_t> sinks;                     // active copies without outgoing edges
  std::vector<std::size_t> needed;                    // copies read at the next position

  bool active(std::size_t c) const { return !rules[c].empty(); }
};

struct FuturePast {
  struct Transition {
    std::size_t from;
    Symbol tag;
    std::size_t to;
  };
  RuleTransduction rules;  // single-step
  PastAutomaton past;
  FutureAutomaton future;
  std::vector<std::pair<std::size_t, std::size_t>> states;  // (past state, atom)
  std::vector<bool> initial;
  std::vector<bool> accepting;
  std::vector<Transition> transitions;
  std::vector<Shape> shapes;
};

/// Reachable part of future × past. Errors: PreconditionViolation when t is
/// not single-step.
FuturePast future_past(const RuleTransduction& t);

/// Errors: NotWellFormed, NoConstant.
Cra compile_to_ucra(const RuleTransduction& t);

/// Single-step rules with one copy per register and per expression node.
/// Errors: PreconditionViolation.
RuleTransduction cra_to_rules(const Cra& m);

std::string format_rules(const RuleTransduction& t);
std::string to_dot(const RuleTransduction& t, const OutputDag& g, const std::string& name = "dag");
std::string to_dot(const FuturePast& fp, const std::string& name = "future_past");

}  // namespace streamcra

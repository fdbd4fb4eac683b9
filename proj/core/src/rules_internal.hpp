#pragma once

#include <optional>
#include <string>
#include <vector>

#include "streamcra/rules.hpp"

namespace streamcra::detail {

inline constexpr std::size_t kNone = static_cast<std::size_t>(-1);

std::string marked_word(const Alphabet& alphabet, const Word& u, const Word& v);
Dfa letter_dfa(const Alphabet& alphabet, Symbol a);
/// Languages in this set are ⊆ {ε} ∪ Σ.
bool short_middle(const Dfa& middle);

/// Test languages of a single-step transduction, deduplicated by language.
struct RuleTests {
  std::vector<Dfa> past, future;
  std::vector<std::size_t> v_past, v_future;              // per vertex rule
  std::vector<std::size_t> e_past;                        // per edge rule
  std::vector<std::size_t> e_eps;                         // r3, or kNone when ε ∉ r2
  std::vector<std::vector<std::size_t>> e_letter;         // [edge][a]: a·r3, or kNone
  std::size_t domain = 0;
};

RuleTests collect_tests(const RuleTransduction& t);
std::size_t intern_dfa(std::vector<Dfa>& pool, const Dfa& d);

/// future × past × the copy whose value is the finished output.
struct CarrierGraph {
  struct Node {
    std::size_t fp;
    std::size_t carrier;  // kNone before the sink
  };
  struct Arc {
    std::size_t from;
    Symbol tag;
    std::size_t to;
  };
  std::vector<Node> nodes;
  std::vector<bool> initial;
  std::vector<Arc> arcs;
};

/// Shortest tag word from an initial state to each state; empty if unreachable.
std::vector<std::optional<Word>> fp_access_words(const FuturePast& fp);
/// Conditions 5 and 6 on the future-past automaton.
void fp_conditions(const FuturePast& fp, ConditionReport& c5, ConditionReport& c6);
/// Errors: NotWellFormed when a sink appears twice or never.
CarrierGraph carrier_graph(const FuturePast& fp);

}  // namespace streamcra::detail

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace streamcra {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;
using Alphabet = std::vector<std::string>;

inline constexpr int kEpsilon = -1;

/// Index of `tag` in `alphabet`; throws TagOutOfAlphabet.
Symbol symbol_of(const Alphabet& alphabet, std::string_view tag);
Word word_of(const Alphabet& alphabet, const std::vector<std::string>& tags);
std::string format_word(const Alphabet& alphabet, const Word& w);

struct Regex {
  enum class Kind { Empty, Eps, Lit, LitSet, Concat, Union, Star, Plus };
  Kind kind = Kind::Empty;
  std::vector<Symbol> syms;  // Lit: one symbol, LitSet: sorted set
  std::vector<Regex> kids;

  static Regex empty();
  static Regex eps();
  static Regex lit(Symbol s);
  static Regex lit_set(std::vector<Symbol> s);
  static Regex any(std::size_t alphabet_size);
  static Regex concat(Regex a, Regex b);
  static Regex alt(Regex a, Regex b);
  static Regex star(Regex a);
  static Regex plus(Regex a);

  friend bool operator==(const Regex&, const Regex&) = default;
};

/// Syntax: `|`, juxtaposition, postfix `*` `+` `?`, `( )`, classes `[ab]`,
/// `eps`, `empty`, `.` for any tag; single-character tags, `<name>` otherwise.
Regex parse_regex(std::string_view text, const Alphabet& alphabet);
std::string format_regex(const Regex& r, const Alphabet& alphabet);

struct Nfa {
  struct Edge {
    std::size_t from;
    int sym;  // kEpsilon or a Symbol
    std::size_t to;
  };

  Alphabet alphabet;
  std::size_t num_states = 0;
  std::vector<Edge> edges;  // a multiset: parallel duplicates count as distinct runs
  std::vector<bool> initial;
  std::vector<bool> final;

  std::size_t add_state(bool is_initial = false, bool is_final = false);
  void add_edge(std::size_t from, int sym, std::size_t to) { edges.push_back({from, sym, to}); }
  bool has_epsilon() const;
};

struct Dfa {
  Alphabet alphabet;
  std::size_t num_states = 0;
  std::size_t start = 0;
  std::vector<std::size_t> delta;  // num_states * |alphabet|
  std::vector<bool> final;

  std::size_t k() const { return alphabet.size(); }
  std::size_t next(std::size_t q, Symbol a) const { return delta[q * alphabet.size() + a]; }
  std::size_t run(std::size_t q, const Word& w) const;
  bool accepts(const Word& w) const;
  /// Structural equality; on minimized automata this is language equality.
  friend bool operator==(const Dfa&, const Dfa&) = default;
};

Nfa regex_to_nfa(const Regex& r, const Alphabet& alphabet);
/// Minimal complete DFA.
Dfa regex_to_dfa(const Regex& r, const Alphabet& alphabet);
Dfa regex_to_dfa(std::string_view text, const Alphabet& alphabet);

Dfa determinize(const Nfa& n);
/// Minimal complete DFA with canonical (breadth-first) state numbering.
Dfa minimize(const Dfa& d);
Dfa complement(const Dfa& d);
Dfa intersect(const Dfa& a, const Dfa& b);
Dfa unite(const Dfa& a, const Dfa& b);
Dfa difference(const Dfa& a, const Dfa& b);
Dfa concat(const Dfa& a, const Dfa& b);
Dfa star(const Dfa& a);
Dfa universal_dfa(const Alphabet& alphabet);
Dfa empty_dfa(const Alphabet& alphabet);
Dfa epsilon_dfa(const Alphabet& alphabet);
/// DFA for the language read from state `q` of `d`.
Dfa residual(const Dfa& d, std::size_t q);

Nfa to_nfa(const Dfa& d);
Nfa reverse(const Nfa& n);
Nfa trim(const Nfa& n);

bool is_empty(const Dfa& d);
bool is_empty(const Nfa& n);
/// L(sub) ⊆ L(super).
bool contains(const Dfa& super, const Dfa& sub);
bool language_equal(const Dfa& a, const Dfa& b);
std::optional<Word> shortest_word(const Dfa& d);
std::optional<Word> shortest_word(const Nfa& n);
bool accepts(const Nfa& n, const Word& w);

/// Errors: EpsilonCycle. Accepting-run counts per word are preserved.
Nfa eliminate_epsilon(const Nfa& n);
/// Number of accepting runs on w, saturating at `cap`.
std::size_t count_runs(const Nfa& n, const Word& w, std::size_t cap = 2);
bool is_unambiguous(const Nfa& n);

/// Words with exactly one factorization uv, u in L(a), v in L(b).
Dfa unamb_concat_dfa(const Dfa& a, const Dfa& b);
/// Words with exactly one factorization into blocks of L(a); empty if ε ∈ L(a).
Dfa unamb_iter_dfa(const Dfa& a);

struct Atomaton {
  /// State i accepts exactly atom i; all states are initial.
  Nfa nfa;
  /// Distinct derivatives of the base languages.
  std::vector<Dfa> derivatives;
  /// atom_in_derivative[i][j]: atom i ⊆ derivatives[j].
  std::vector<std::vector<bool>> atom_in_derivative;
  /// atom_in_base[i][j]: atom i ⊆ base[j].
  std::vector<std::vector<bool>> atom_in_base;
  /// Minimal DFA of each atom.
  std::vector<Dfa> atoms;
  /// The atom containing the empty word.
  std::size_t epsilon_atom = 0;
};

Atomaton atomaton(const std::vector<Dfa>& base, const Alphabet& alphabet);

/// Regular expression by state elimination.
Regex dfa_to_regex(const Dfa& d);

std::string to_dot(const Nfa& n, const std::string& name = "nfa");
std::string to_dot(const Dfa& d, const std::string& name = "dfa");

}  // namespace streamcra

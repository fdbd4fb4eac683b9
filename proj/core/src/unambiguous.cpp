#include <algorithm>
#include <map>
#include <tuple>

#include "streamcra/automata.hpp"
#include "streamcra/error.hpp"

namespace streamcra {

namespace {

using Counts = std::vector<std::uint8_t>;

std::uint8_t add_capped(std::uint8_t x, std::uint8_t y) { return static_cast<std::uint8_t>(std::min(2, x + y)); }

}  // namespace

Dfa unamb_concat_dfa(const Dfa& a, const Dfa& b) {
  if (a.alphabet != b.alphabet) fail(ErrorCode::AlphabetMismatch, "unamb_concat_dfa over different alphabets");
  const std::size_t k = a.k();
  using State = std::pair<std::size_t, Counts>;
  std::map<State, std::size_t> index;
  std::vector<State> states;
  auto intern = [&](State s) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    index.emplace(s, states.size());
    states.push_back(std::move(s));
    return states.size() - 1;
  };
  Counts c0(b.num_states, 0);
  if (a.final[a.start]) c0[b.start] = 1;
  intern({a.start, c0});
  Dfa d;
  d.alphabet = a.alphabet;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (Symbol s = 0; s < k; ++s) {
      const auto& [p, counts] = states[i];
      std::size_t p2 = a.next(p, s);
      Counts c(b.num_states, 0);
      for (std::size_t q = 0; q < b.num_states; ++q)
        if (counts[q]) c[b.next(q, s)] = add_capped(c[b.next(q, s)], counts[q]);
      if (a.final[p2]) c[b.start] = add_capped(c[b.start], 1);
      std::size_t t = intern({p2, std::move(c)});
      d.delta.push_back(t);
    }
  }
  d.num_states = states.size();
  d.final.assign(d.num_states, false);
  for (std::size_t i = 0; i < states.size(); ++i) {
    std::uint8_t total = 0;
    for (std::size_t q = 0; q < b.num_states; ++q)
      if (b.final[q]) total = add_capped(total, states[i].second[q]);
    d.final[i] = total == 1;
  }
  return minimize(d);
}

Dfa unamb_iter_dfa(const Dfa& a) {
  if (a.final[a.start]) return empty_dfa(a.alphabet);
  const std::size_t k = a.k();
  // counts of partial decompositions per current block state; the flag marks
  // the initial configuration, whose single complete decomposition is empty
  using State = std::pair<bool, Counts>;
  std::map<State, std::size_t> index;
  std::vector<State> states;
  auto intern = [&](State s) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    index.emplace(s, states.size());
    states.push_back(std::move(s));
    return states.size() - 1;
  };
  Counts c0(a.num_states, 0);
  c0[a.start] = 1;
  intern({true, c0});
  Dfa d;
  d.alphabet = a.alphabet;
  auto completed = [&a](const Counts& c) {
    std::uint8_t total = 0;
    for (std::size_t q = 0; q < a.num_states; ++q)
      if (a.final[q]) total = add_capped(total, c[q]);
    return total;
  };
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (Symbol s = 0; s < k; ++s) {
      const Counts& counts = states[i].second;
      Counts c(a.num_states, 0);
      for (std::size_t q = 0; q < a.num_states; ++q)
        if (counts[q]) c[a.next(q, s)] = add_capped(c[a.next(q, s)], counts[q]);
      std::uint8_t done = completed(c);
      if (done) c[a.start] = add_capped(c[a.start], done);
      d.delta.push_back(intern({false, std::move(c)}));
    }
  }
  d.num_states = states.size();
  d.final.assign(d.num_states, false);
  for (std::size_t i = 0; i < states.size(); ++i)
    d.final[i] = states[i].first || completed(states[i].second) == 1;
  return minimize(d);
}

Atomaton atomaton(const std::vector<Dfa>& base_in, const Alphabet& alphabet) {
  const std::size_t k = alphabet.size();
  std::vector<Dfa> base;
  for (const auto& b : base_in) {
    if (b.alphabet != alphabet) fail(ErrorCode::AlphabetMismatch, "atomaton base over a different alphabet");
    base.push_back(minimize(b));
  }
  Atomaton out;
  // distinct derivative languages, keyed by their canonical minimal DFA
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> coord;  // (base, state) -> derivative
  std::vector<std::pair<std::size_t, std::size_t>> witness;           // derivative -> (base, state)
  for (std::size_t i = 0; i < base.size(); ++i)
    for (std::size_t q = 0; q < base[i].num_states; ++q) {
      Dfa r = residual(base[i], q);
      auto it = std::find(out.derivatives.begin(), out.derivatives.end(), r);
      std::size_t j;
      if (it == out.derivatives.end()) {
        j = out.derivatives.size();
        out.derivatives.push_back(std::move(r));
        witness.push_back({i, q});
      } else {
        j = static_cast<std::size_t>(it - out.derivatives.begin());
      }
      coord[{i, q}] = j;
    }
  const std::size_t m = out.derivatives.size();
  // succ[j][a]: derivative index of D_a(derivative j)
  std::vector<std::vector<std::size_t>> succ(m, std::vector<std::size_t>(k));
  for (std::size_t j = 0; j < m; ++j)
    for (Symbol a = 0; a < k; ++a) {
      auto [i, q] = witness[j];
      succ[j][a] = coord[{i, base[i].next(q, a)}];
    }
  // reverse determinization over membership profiles
  using Profile = std::vector<bool>;
  std::map<Profile, std::size_t> index;
  std::vector<Profile> profiles;
  Profile eps(m);
  for (std::size_t j = 0; j < m; ++j) eps[j] = out.derivatives[j].final[out.derivatives[j].start];
  index[eps] = 0;
  profiles.push_back(eps);
  std::vector<std::tuple<std::size_t, Symbol, std::size_t>> edges;  // (from, a, to) in reading direction
  for (std::size_t i = 0; i < profiles.size(); ++i)
    for (Symbol a = 0; a < k; ++a) {
      Profile pre(m);
      for (std::size_t j = 0; j < m; ++j) pre[j] = profiles[i][succ[j][a]];
      auto it = index.find(pre);
      if (it == index.end()) {
        it = index.emplace(pre, profiles.size()).first;
        profiles.push_back(pre);
      }
      edges.emplace_back(it->second, a, i);
    }
  Nfa& n = out.nfa;
  n.alphabet = alphabet;
  for (std::size_t i = 0; i < profiles.size(); ++i) n.add_state(true, i == 0);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (auto [from, a, to] : edges) n.add_edge(from, static_cast<int>(a), to);
  out.epsilon_atom = 0;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    out.atom_in_derivative.push_back(profiles[i]);
    std::vector<bool> in_base(base.size());
    for (std::size_t b = 0; b < base.size(); ++b) in_base[b] = profiles[i][coord[{b, base[b].start}]];
    out.atom_in_base.push_back(std::move(in_base));
    Nfa single = n;
    for (std::size_t q = 0; q < single.num_states; ++q) single.initial[q] = q == i;
    out.atoms.push_back(minimize(determinize(single)));
  }
  return out;
}

}  // namespace streamcra

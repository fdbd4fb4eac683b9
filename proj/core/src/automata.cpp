#include "streamcra/automata.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>

#include "streamcra/error.hpp"

namespace streamcra {

std::size_t Nfa::add_state(bool is_initial, bool is_final) {
  initial.push_back(is_initial);
  final.push_back(is_final);
  return num_states++;
}

bool Nfa::has_epsilon() const {
  return std::any_of(edges.begin(), edges.end(), [](const Edge& e) { return e.sym == kEpsilon; });
}

std::size_t Dfa::run(std::size_t q, const Word& w) const {
  for (Symbol a : w) q = next(q, a);
  return q;
}

bool Dfa::accepts(const Word& w) const { return final[run(start, w)]; }

namespace {

void require_same(const Alphabet& a, const Alphabet& b) {
  if (a != b) fail(ErrorCode::AlphabetMismatch, "automata over different alphabets");
}

std::vector<std::vector<std::size_t>> epsilon_adjacency(const Nfa& n) {
  std::vector<std::vector<std::size_t>> adj(n.num_states);
  for (const auto& e : n.edges)
    if (e.sym == kEpsilon) adj[e.from].push_back(e.to);
  return adj;
}

void close(std::vector<std::size_t>& set, const std::vector<std::vector<std::size_t>>& eps,
           std::vector<char>& mark) {
  std::vector<std::size_t> stack = set;
  for (std::size_t q : set) mark[q] = 1;
  while (!stack.empty()) {
    std::size_t q = stack.back();
    stack.pop_back();
    for (std::size_t r : eps[q])
      if (!mark[r]) {
        mark[r] = 1;
        set.push_back(r);
        stack.push_back(r);
      }
  }
  for (std::size_t q : set) mark[q] = 0;
  std::sort(set.begin(), set.end());
}

}  // namespace

Dfa determinize(const Nfa& n) {
  const std::size_t k = n.alphabet.size();
  auto eps = epsilon_adjacency(n);
  std::vector<std::vector<std::vector<std::size_t>>> out(n.num_states, std::vector<std::vector<std::size_t>>(k));
  for (const auto& e : n.edges)
    if (e.sym != kEpsilon) out[e.from][static_cast<std::size_t>(e.sym)].push_back(e.to);
  std::vector<char> mark(n.num_states, 0);

  Dfa d;
  d.alphabet = n.alphabet;
  std::map<std::vector<std::size_t>, std::size_t> index;
  std::vector<std::vector<std::size_t>> sets;
  std::vector<std::size_t> init;
  for (std::size_t q = 0; q < n.num_states; ++q)
    if (n.initial[q]) init.push_back(q);
  close(init, eps, mark);
  index[init] = 0;
  sets.push_back(init);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t a = 0; a < k; ++a) {
      std::vector<std::size_t> next;
      for (std::size_t q : sets[i])
        for (std::size_t r : out[q][a])
          if (!mark[r]) {
            mark[r] = 1;
            next.push_back(r);
          }
      for (std::size_t r : next) mark[r] = 0;
      close(next, eps, mark);
      auto it = index.find(next);
      std::size_t id;
      if (it == index.end()) {
        id = sets.size();
        index.emplace(next, id);
        sets.push_back(std::move(next));
      } else {
        id = it->second;
      }
      d.delta.push_back(id);
    }
  }
  d.num_states = sets.size();
  d.start = 0;
  d.final.assign(d.num_states, false);
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t q : sets[i])
      if (n.final[q]) d.final[i] = true;
  if (k == 0) d.delta.clear();
  return d;
}

Dfa minimize(const Dfa& d) {
  const std::size_t k = d.k();
  // reachable states
  std::vector<std::size_t> reach_id(d.num_states, SIZE_MAX);
  std::vector<std::size_t> reach;
  reach_id[d.start] = 0;
  reach.push_back(d.start);
  for (std::size_t i = 0; i < reach.size(); ++i)
    for (Symbol a = 0; a < k; ++a) {
      std::size_t t = d.next(reach[i], a);
      if (reach_id[t] == SIZE_MAX) {
        reach_id[t] = reach.size();
        reach.push_back(t);
      }
    }
  const std::size_t n = reach.size();
  std::vector<std::size_t> cls(n);
  for (std::size_t i = 0; i < n; ++i) cls[i] = d.final[reach[i]] ? 1 : 0;
  std::size_t num_classes = 0;
  // Moore refinement until the number of classes is stable
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> sig_index;
    std::vector<std::size_t> next_cls(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> sig;
      sig.reserve(k + 1);
      sig.push_back(cls[i]);
      for (Symbol a = 0; a < k; ++a) sig.push_back(cls[reach_id[d.next(reach[i], a)]]);
      auto it = sig_index.emplace(std::move(sig), sig_index.size()).first;
      next_cls[i] = it->second;
    }
    std::size_t count = sig_index.size();
    cls = std::move(next_cls);
    if (count == num_classes) break;
    num_classes = count;
  }
  // canonical breadth-first numbering of classes
  std::vector<std::size_t> repr(num_classes, SIZE_MAX);
  for (std::size_t i = 0; i < n; ++i)
    if (repr[cls[i]] == SIZE_MAX) repr[cls[i]] = i;
  std::vector<std::size_t> canon(num_classes, SIZE_MAX);
  std::vector<std::size_t> order;
  canon[cls[0]] = 0;
  order.push_back(cls[0]);
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::size_t r = repr[order[i]];
    for (Symbol a = 0; a < k; ++a) {
      std::size_t c = cls[reach_id[d.next(reach[r], a)]];
      if (canon[c] == SIZE_MAX) {
        canon[c] = order.size();
        order.push_back(c);
      }
    }
  }
  Dfa m;
  m.alphabet = d.alphabet;
  m.num_states = order.size();
  m.start = 0;
  m.final.assign(m.num_states, false);
  m.delta.assign(m.num_states * k, 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::size_t r = repr[order[i]];
    m.final[i] = d.final[reach[r]];
    for (Symbol a = 0; a < k; ++a) m.delta[i * k + a] = canon[cls[reach_id[d.next(reach[r], a)]]];
  }
  return m;
}

namespace {

template <class Accept>
Dfa product(const Dfa& a, const Dfa& b, Accept accept) {
  require_same(a.alphabet, b.alphabet);
  const std::size_t k = a.k();
  Dfa d;
  d.alphabet = a.alphabet;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  std::vector<std::pair<std::size_t, std::size_t>> states{{a.start, b.start}};
  index[states[0]] = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto [p, q] = states[i];
    for (Symbol s = 0; s < k; ++s) {
      std::pair<std::size_t, std::size_t> t{a.next(p, s), b.next(q, s)};
      auto it = index.find(t);
      if (it == index.end()) {
        it = index.emplace(t, states.size()).first;
        states.push_back(t);
      }
      d.delta.push_back(it->second);
    }
  }
  d.num_states = states.size();
  d.final.resize(d.num_states);
  for (std::size_t i = 0; i < states.size(); ++i)
    d.final[i] = accept(a.final[states[i].first], b.final[states[i].second]);
  return minimize(d);
}

}  // namespace

Dfa complement(const Dfa& d) {
  Dfa c = d;
  for (std::size_t q = 0; q < c.num_states; ++q) c.final[q] = !c.final[q];
  return minimize(c);
}

Dfa intersect(const Dfa& a, const Dfa& b) {
  return product(a, b, [](bool x, bool y) { return x && y; });
}

Dfa unite(const Dfa& a, const Dfa& b) {
  return product(a, b, [](bool x, bool y) { return x || y; });
}

Dfa difference(const Dfa& a, const Dfa& b) {
  return product(a, b, [](bool x, bool y) { return x && !y; });
}

Nfa to_nfa(const Dfa& d) {
  Nfa n;
  n.alphabet = d.alphabet;
  for (std::size_t q = 0; q < d.num_states; ++q) n.add_state(q == d.start, d.final[q]);
  for (std::size_t q = 0; q < d.num_states; ++q)
    for (Symbol a = 0; a < d.k(); ++a) n.add_edge(q, static_cast<int>(a), d.next(q, a));
  return n;
}

Dfa concat(const Dfa& a, const Dfa& b) {
  require_same(a.alphabet, b.alphabet);
  Nfa n = to_nfa(a);
  std::size_t off = n.num_states;
  for (std::size_t q = 0; q < off; ++q) n.final[q] = false;
  for (std::size_t q = 0; q < b.num_states; ++q) n.add_state(false, b.final[q]);
  for (std::size_t q = 0; q < b.num_states; ++q)
    for (Symbol s = 0; s < b.k(); ++s) n.add_edge(off + q, static_cast<int>(s), off + b.next(q, s));
  for (std::size_t q = 0; q < a.num_states; ++q)
    if (a.final[q]) n.add_edge(q, kEpsilon, off + b.start);
  return minimize(determinize(n));
}

Dfa star(const Dfa& a) {
  Nfa n = to_nfa(a);
  for (std::size_t q = 0; q < n.num_states; ++q) n.initial[q] = false;
  std::size_t s = n.add_state(true, true);
  n.add_edge(s, kEpsilon, a.start);
  for (std::size_t q = 0; q < a.num_states; ++q)
    if (a.final[q]) n.add_edge(q, kEpsilon, s);
  return minimize(determinize(n));
}

Dfa universal_dfa(const Alphabet& alphabet) {
  Dfa d;
  d.alphabet = alphabet;
  d.num_states = 1;
  d.delta.assign(alphabet.size(), 0);
  d.final = {true};
  return d;
}

Dfa empty_dfa(const Alphabet& alphabet) {
  Dfa d = universal_dfa(alphabet);
  d.final = {false};
  return d;
}

Dfa epsilon_dfa(const Alphabet& alphabet) {
  Dfa d;
  d.alphabet = alphabet;
  d.num_states = 2;
  d.delta.assign(2 * alphabet.size(), 1);
  d.final = {true, false};
  return d;
}

Dfa residual(const Dfa& d, std::size_t q) {
  Dfa r = d;
  r.start = q;
  return minimize(r);
}

Nfa reverse(const Nfa& n) {
  Nfa r;
  r.alphabet = n.alphabet;
  r.num_states = n.num_states;
  r.initial = n.final;
  r.final = n.initial;
  for (const auto& e : n.edges) r.add_edge(e.to, e.sym, e.from);
  return r;
}

namespace {

std::vector<bool> forward_reach(const Nfa& n) {
  std::vector<std::vector<std::size_t>> adj(n.num_states);
  for (const auto& e : n.edges) adj[e.from].push_back(e.to);
  std::vector<bool> seen(n.num_states, false);
  std::vector<std::size_t> stack;
  for (std::size_t q = 0; q < n.num_states; ++q)
    if (n.initial[q]) {
      seen[q] = true;
      stack.push_back(q);
    }
  while (!stack.empty()) {
    std::size_t q = stack.back();
    stack.pop_back();
    for (std::size_t r : adj[q])
      if (!seen[r]) {
        seen[r] = true;
        stack.push_back(r);
      }
  }
  return seen;
}

}  // namespace

Nfa trim(const Nfa& n) {
  std::vector<bool> fwd = forward_reach(n);
  std::vector<bool> bwd = forward_reach(reverse(n));
  std::vector<std::size_t> id(n.num_states, SIZE_MAX);
  Nfa t;
  t.alphabet = n.alphabet;
  for (std::size_t q = 0; q < n.num_states; ++q)
    if (fwd[q] && bwd[q]) id[q] = t.add_state(n.initial[q], n.final[q]);
  for (const auto& e : n.edges)
    if (id[e.from] != SIZE_MAX && id[e.to] != SIZE_MAX) t.add_edge(id[e.from], e.sym, id[e.to]);
  return t;
}

bool is_empty(const Dfa& d) { return !shortest_word(d).has_value(); }

bool is_empty(const Nfa& n) { return !shortest_word(n).has_value(); }

bool contains(const Dfa& super, const Dfa& sub) { return is_empty(difference(sub, super)); }

bool language_equal(const Dfa& a, const Dfa& b) {
  require_same(a.alphabet, b.alphabet);
  return minimize(a) == minimize(b);
}

std::optional<Word> shortest_word(const Dfa& d) {
  std::vector<std::size_t> parent(d.num_states, SIZE_MAX);
  std::vector<Symbol> via(d.num_states, 0);
  std::vector<bool> seen(d.num_states, false);
  std::deque<std::size_t> queue{d.start};
  seen[d.start] = true;
  while (!queue.empty()) {
    std::size_t q = queue.front();
    queue.pop_front();
    if (d.final[q]) {
      Word w;
      for (std::size_t c = q; parent[c] != SIZE_MAX; c = parent[c]) w.push_back(via[c]);
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (Symbol a = 0; a < d.k(); ++a) {
      std::size_t t = d.next(q, a);
      if (!seen[t]) {
        seen[t] = true;
        parent[t] = q;
        via[t] = a;
        queue.push_back(t);
      }
    }
  }
  return std::nullopt;
}

std::optional<Word> shortest_word(const Nfa& n) {
  // 0-1 BFS: epsilon edges cost nothing
  std::vector<std::size_t> dist(n.num_states, SIZE_MAX);
  std::vector<std::size_t> parent(n.num_states, SIZE_MAX);
  std::vector<int> via(n.num_states, kEpsilon);
  std::vector<std::vector<const Nfa::Edge*>> out(n.num_states);
  for (const auto& e : n.edges) out[e.from].push_back(&e);
  std::deque<std::size_t> dq;
  for (std::size_t q = 0; q < n.num_states; ++q)
    if (n.initial[q]) {
      dist[q] = 0;
      dq.push_back(q);
    }
  std::vector<bool> done(n.num_states, false);
  while (!dq.empty()) {
    std::size_t q = dq.front();
    dq.pop_front();
    if (done[q]) continue;
    done[q] = true;
    if (n.final[q]) {
      Word w;
      for (std::size_t c = q; parent[c] != SIZE_MAX; c = parent[c])
        if (via[c] != kEpsilon) w.push_back(static_cast<Symbol>(via[c]));
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (const auto* e : out[q]) {
      std::size_t cost = e->sym == kEpsilon ? 0 : 1;
      if (dist[q] + cost < dist[e->to]) {
        dist[e->to] = dist[q] + cost;
        parent[e->to] = q;
        via[e->to] = e->sym;
        if (cost == 0) dq.push_front(e->to);
        else dq.push_back(e->to);
      }
    }
  }
  return std::nullopt;
}

bool accepts(const Nfa& n, const Word& w) { return determinize(n).accepts(w); }

Nfa eliminate_epsilon(const Nfa& n) {
  if (!n.has_epsilon()) return n;
  auto eps = epsilon_adjacency(n);
  // cycle detection
  std::vector<int> color(n.num_states, 0);
  std::function<void(std::size_t)> dfs = [&](std::size_t q) {
    color[q] = 1;
    for (std::size_t r : eps[q]) {
      if (color[r] == 1) fail(ErrorCode::EpsilonCycle, "epsilon cycle through state " + std::to_string(r));
      if (color[r] == 0) dfs(r);
    }
    color[q] = 2;
  };
  for (std::size_t q = 0; q < n.num_states; ++q)
    if (color[q] == 0) dfs(q);

  std::vector<std::vector<const Nfa::Edge*>> letters(n.num_states);
  for (const auto& e : n.edges)
    if (e.sym != kEpsilon) letters[e.from].push_back(&e);

  Nfa out;
  out.alphabet = n.alphabet;
  for (std::size_t q = 0; q < n.num_states; ++q) out.add_state(n.initial[q], false);
  std::vector<std::size_t> final_paths(n.num_states, 0);
  for (std::size_t p = 0; p < n.num_states; ++p) {
    // every epsilon path from p, with multiplicity
    std::vector<std::size_t> stack{p};
    while (!stack.empty()) {
      std::size_t r = stack.back();
      stack.pop_back();
      for (const auto* e : letters[r]) out.add_edge(p, e->sym, e->to);
      if (n.final[r]) ++final_paths[p];
      for (std::size_t s : eps[r]) stack.push_back(s);
    }
  }
  std::vector<Nfa::Edge> base_edges = out.edges;
  for (std::size_t p = 0; p < n.num_states; ++p) {
    if (final_paths[p] == 0) continue;
    out.final[p] = true;
    // one accepting sink clone per additional epsilon path to acceptance
    for (std::size_t c = 1; c < final_paths[p]; ++c) {
      std::size_t clone = out.add_state(n.initial[p], true);
      for (const auto& e : base_edges)
        if (e.to == p) out.add_edge(e.from, e.sym, clone);
    }
  }
  return out;
}

std::size_t count_runs(const Nfa& n0, const Word& w, std::size_t cap) {
  const Nfa n = eliminate_epsilon(n0);
  std::vector<std::size_t> cur(n.num_states, 0);
  for (std::size_t q = 0; q < n.num_states; ++q)
    if (n.initial[q]) cur[q] = 1;
  for (Symbol a : w) {
    std::vector<std::size_t> next(n.num_states, 0);
    for (const auto& e : n.edges)
      if (e.sym == static_cast<int>(a) && cur[e.from]) next[e.to] = std::min(cap, next[e.to] + cur[e.from]);
    cur = std::move(next);
  }
  std::size_t total = 0;
  for (std::size_t q = 0; q < n.num_states; ++q)
    if (n.final[q]) total = std::min(cap, total + cur[q]);
  return total;
}

bool is_unambiguous(const Nfa& n0) {
  const Nfa n = eliminate_epsilon(n0);
  const std::size_t k = n.alphabet.size();
  const std::size_t ns = n.num_states;
  std::vector<std::vector<std::vector<std::size_t>>> out(ns, std::vector<std::vector<std::size_t>>(k));
  for (std::size_t i = 0; i < n.edges.size(); ++i)
    out[n.edges[i].from][static_cast<std::size_t>(n.edges[i].sym)].push_back(i);
  // configurations (p, q, diverged)
  std::vector<char> seen(ns * ns * 2, 0);
  auto key = [ns](std::size_t p, std::size_t q, bool f) { return (p * ns + q) * 2 + (f ? 1 : 0); };
  std::vector<std::size_t> stack;
  for (std::size_t p = 0; p < ns; ++p)
    for (std::size_t q = 0; q < ns; ++q)
      if (n.initial[p] && n.initial[q]) {
        std::size_t c = key(p, q, p != q);
        if (!seen[c]) {
          seen[c] = 1;
          stack.push_back(c);
        }
      }
  while (!stack.empty()) {
    std::size_t c = stack.back();
    stack.pop_back();
    bool f = c % 2;
    std::size_t p = (c / 2) / ns, q = (c / 2) % ns;
    if (f && n.final[p] && n.final[q]) return false;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t e1 : out[p][a])
        for (std::size_t e2 : out[q][a]) {
          std::size_t d = key(n.edges[e1].to, n.edges[e2].to, f || e1 != e2);
          if (!seen[d]) {
            seen[d] = 1;
            stack.push_back(d);
          }
        }
  }
  return true;
}

std::string to_dot(const Nfa& n, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n  rankdir=LR;\n";
  for (std::size_t q = 0; q < n.num_states; ++q) {
    os << "  q" << q << " [shape=" << (n.final[q] ? "doublecircle" : "circle") << "];\n";
    if (n.initial[q]) os << "  init" << q << " [shape=point];\n  init" << q << " -> q" << q << ";\n";
  }
  for (const auto& e : n.edges)
    os << "  q" << e.from << " -> q" << e.to << " [label=\""
       << (e.sym == kEpsilon ? std::string("ε") : n.alphabet[static_cast<std::size_t>(e.sym)]) << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string to_dot(const Dfa& d, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n  rankdir=LR;\n  init [shape=point];\n  init -> q" << d.start << ";\n";
  for (std::size_t q = 0; q < d.num_states; ++q)
    os << "  q" << q << " [shape=" << (d.final[q] ? "doublecircle" : "circle") << "];\n";
  for (std::size_t q = 0; q < d.num_states; ++q) {
    std::map<std::size_t, std::string> labels;
    for (Symbol a = 0; a < d.k(); ++a) {
      std::string& l = labels[d.next(q, a)];
      if (!l.empty()) l += ",";
      l += d.alphabet[a];
    }
    for (const auto& [t, l] : labels) os << "  q" << q << " -> q" << t << " [label=\"" << l << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace streamcra

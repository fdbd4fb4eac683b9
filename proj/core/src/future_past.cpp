#include <algorithm>
#include <map>

#include "rules_internal.hpp"
#include "streamcra/error.hpp"
#include "streamcra/rules.hpp"

namespace streamcra {

using detail::kNone;

namespace detail {

std::size_t intern_dfa(std::vector<Dfa>& pool, const Dfa& d) {
  Dfa m = minimize(d);
  auto it = std::find(pool.begin(), pool.end(), m);
  if (it != pool.end()) return static_cast<std::size_t>(it - pool.begin());
  pool.push_back(std::move(m));
  return pool.size() - 1;
}

RuleTests collect_tests(const RuleTransduction& t) {
  RuleTests rt;
  const std::size_t k = t.alphabet.size();
  for (const auto& r : t.vertex_rules) {
    rt.v_past.push_back(intern_dfa(rt.past, r.r1));
    rt.v_future.push_back(intern_dfa(rt.future, r.r2));
  }
  for (const auto& e : t.edge_rules) {
    rt.e_past.push_back(intern_dfa(rt.past, e.r1));
    rt.e_eps.push_back(e.r2.final[e.r2.start] ? intern_dfa(rt.future, e.r3) : kNone);
    std::vector<std::size_t> by_letter(k, kNone);
    for (Symbol a = 0; a < k; ++a)
      if (e.r2.accepts(Word{a})) by_letter[a] = intern_dfa(rt.future, concat(letter_dfa(t.alphabet, a), e.r3));
    rt.e_letter.push_back(std::move(by_letter));
  }
  rt.domain = intern_dfa(rt.future, t.domain);
  return rt;
}

}  // namespace detail

PastAutomaton past_automaton(const std::vector<Dfa>& tests_in, const Alphabet& alphabet) {
  const std::size_t k = alphabet.size();
  std::vector<Dfa> tests;
  for (const auto& d : tests_in) {
    if (d.alphabet != alphabet) fail(ErrorCode::AlphabetMismatch, "prefix test over a different alphabet");
    tests.push_back(minimize(d));
  }
  // reachable product
  std::map<std::vector<std::size_t>, std::size_t> index;
  std::vector<std::vector<std::size_t>> tuples;
  std::vector<std::size_t> delta;
  std::vector<std::size_t> start;
  for (const auto& d : tests) start.push_back(d.start);
  index[start] = 0;
  tuples.push_back(start);
  for (std::size_t i = 0; i < tuples.size(); ++i)
    for (Symbol a = 0; a < k; ++a) {
      std::vector<std::size_t> next;
      for (std::size_t j = 0; j < tests.size(); ++j) next.push_back(tests[j].next(tuples[i][j], a));
      auto it = index.find(next);
      if (it == index.end()) {
        it = index.emplace(next, tuples.size()).first;
        tuples.push_back(next);
      }
      delta.push_back(it->second);
    }
  const std::size_t n = tuples.size();
  auto profile = [&](std::size_t i) {
    std::vector<bool> p;
    for (std::size_t j = 0; j < tests.size(); ++j) p.push_back(tests[j].final[tuples[i][j]]);
    return p;
  };
  // Moore refinement starting from the test profiles
  std::vector<std::size_t> cls(n);
  {
    std::map<std::vector<bool>, std::size_t> ids;
    for (std::size_t i = 0; i < n; ++i) cls[i] = ids.emplace(profile(i), ids.size()).first->second;
  }
  for (std::size_t count = 0;;) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> sig{cls[i]};
      for (Symbol a = 0; a < k; ++a) sig.push_back(cls[delta[i * k + a]]);
      next[i] = ids.emplace(sig, ids.size()).first->second;
    }
    cls = std::move(next);
    if (ids.size() == count) break;
    count = ids.size();
  }
  // canonical breadth-first numbering of the quotient
  std::map<std::size_t, std::size_t> number;
  std::vector<std::size_t> rep;
  number[cls[0]] = 0;
  rep.push_back(0);
  for (std::size_t i = 0; i < rep.size(); ++i)
    for (Symbol a = 0; a < k; ++a) {
      std::size_t c = cls[delta[rep[i] * k + a]];
      if (!number.count(c)) {
        number[c] = rep.size();
        rep.push_back(delta[rep[i] * k + a]);
      }
    }
  PastAutomaton out;
  out.tests = tests;
  out.dfa.alphabet = alphabet;
  out.dfa.num_states = rep.size();
  out.dfa.start = 0;
  out.dfa.final.assign(rep.size(), false);
  for (std::size_t s = 0; s < rep.size(); ++s) {
    for (Symbol a = 0; a < k; ++a) out.dfa.delta.push_back(number[cls[delta[rep[s] * k + a]]]);
    out.holds.push_back(profile(rep[s]));
  }
  return out;
}

PastAutomaton past_automaton(const RuleTransduction& t) {
  return past_automaton(detail::collect_tests(t).past, t.alphabet);
}

FutureAutomaton future_automaton(const std::vector<Dfa>& tests, const Alphabet& alphabet) {
  FutureAutomaton out;
  out.atoms = atomaton(tests, alphabet);
  for (const auto& d : tests) out.tests.push_back(minimize(d));
  out.holds = out.atoms.atom_in_base;
  out.initial.assign(out.holds.size(), true);
  return out;
}

FutureAutomaton future_automaton(const RuleTransduction& t) {
  if (!is_single_step(t)) fail(ErrorCode::PreconditionViolation, "future_automaton needs a single-step transduction");
  auto rt = detail::collect_tests(t);
  FutureAutomaton out = future_automaton(rt.future, t.alphabet);
  for (std::size_t i = 0; i < out.holds.size(); ++i) out.initial[i] = out.holds[i][rt.domain];
  return out;
}

FuturePast future_past(const RuleTransduction& t) {
  if (!is_single_step(t)) fail(ErrorCode::PreconditionViolation, "future_past needs a single-step transduction");
  const std::size_t k = t.alphabet.size();
  const std::size_t nc = t.copies.size();
  auto rt = detail::collect_tests(t);
  FuturePast fp;
  fp.rules = t;
  fp.past = past_automaton(rt.past, t.alphabet);
  fp.future = future_automaton(rt.future, t.alphabet);
  for (std::size_t i = 0; i < fp.future.holds.size(); ++i) fp.future.initial[i] = fp.future.holds[i][rt.domain];

  const Atomaton& at = fp.future.atoms;
  std::vector<std::vector<std::pair<Symbol, std::size_t>>> succ(at.nfa.num_states);
  for (const auto& e : at.nfa.edges) succ[e.from].emplace_back(static_cast<Symbol>(e.sym), e.to);

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  auto intern = [&](std::size_t p, std::size_t a) {
    auto it = index.find({p, a});
    if (it != index.end()) return it->second;
    std::size_t id = fp.states.size();
    index.emplace(std::make_pair(p, a), id);
    fp.states.emplace_back(p, a);
    fp.initial.push_back(false);
    return id;
  };
  for (std::size_t a = 0; a < fp.future.initial.size(); ++a)
    if (fp.future.initial[a]) fp.initial[intern(fp.past.dfa.start, a)] = true;
  for (std::size_t i = 0; i < fp.states.size(); ++i) {
    auto [p, a] = fp.states[i];
    for (auto [sym, b] : succ[a]) {
      std::size_t j = intern(fp.past.dfa.next(p, sym), b);
      fp.transitions.push_back({i, sym, j});
    }
  }

  for (auto [p, a] : fp.states) {
    const auto& ph = fp.past.holds[p];
    const auto& fh = fp.future.holds[a];
    fp.accepting.push_back(a == at.epsilon_atom);
    Shape s;
    s.rules.assign(nc, {});
    for (std::size_t i = 0; i < t.vertex_rules.size(); ++i)
      if (ph[rt.v_past[i]] && fh[rt.v_future[i]]) s.rules[t.vertex_rules[i].copy].push_back(i);
    for (std::size_t j = 0; j < t.edge_rules.size(); ++j) {
      const auto& e = t.edge_rules[j];
      if (!ph[rt.e_past[j]]) continue;
      if (rt.e_eps[j] != kNone && fh[rt.e_eps[j]]) s.eps_edges.push_back({e.src, e.arg, e.dst});
      for (Symbol sym = 0; sym < k; ++sym)
        if (rt.e_letter[j][sym] != kNone && fh[rt.e_letter[j][sym]])
          s.letter_edges.push_back({sym, {e.src, e.arg, e.dst}});
    }
    std::vector<bool> has_out(nc, false), reads(nc, false);
    for (const auto& e : s.eps_edges) has_out[e.src] = true;
    for (const auto& [sym, e] : s.letter_edges) has_out[e.src] = reads[e.src] = true;
    for (std::size_t c = 0; c < nc; ++c) {
      if (!s.active(c)) continue;
      if (!has_out[c]) s.sinks.push_back(c);
      if (reads[c]) s.needed.push_back(c);
    }
    fp.shapes.push_back(std::move(s));
  }
  return fp;
}

namespace detail {

std::vector<std::optional<Word>> fp_access_words(const FuturePast& fp) {
  std::vector<std::optional<Word>> out(fp.states.size());
  std::vector<std::vector<const FuturePast::Transition*>> from(fp.states.size());
  for (const auto& tr : fp.transitions) from[tr.from].push_back(&tr);
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < fp.states.size(); ++i)
    if (fp.initial[i]) {
      out[i] = Word{};
      queue.push_back(i);
    }
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (const auto* tr : from[queue[h]]) {
      if (out[tr->to]) continue;
      Word w = *out[queue[h]];
      w.push_back(tr->tag);
      out[tr->to] = std::move(w);
      queue.push_back(tr->to);
    }
  return out;
}

namespace {

std::string suffix_of(const FuturePast& fp, std::size_t state) {
  return format_word(fp.rules.alphabet, *shortest_word(fp.future.atoms.atoms[fp.states[state].second]));
}

std::string at_position(const FuturePast& fp, const Word& prefix, std::size_t state) {
  return format_word(fp.rules.alphabet, prefix) + " | " + suffix_of(fp, state);
}

// ConditionReport when `report` is set, NotWellFormed otherwise
CarrierGraph carrier_impl(const FuturePast& fp, ConditionReport* report) {
  CarrierGraph g;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  std::vector<Word> words;
  bool broken = false;
  auto violation = [&](const std::string& msg, const std::string& witness) {
    if (!report) fail(ErrorCode::NotWellFormed, msg + " at " + witness);
    if (!broken) {
      report->status = CheckStatus::Fail;
      report->message = msg;
      report->witness = witness;
    }
    broken = true;
  };
  auto intern = [&](std::size_t s, std::size_t c, const Word& w) {
    auto it = index.find({s, c});
    if (it != index.end()) return it->second;
    std::size_t id = g.nodes.size();
    index.emplace(std::make_pair(s, c), id);
    g.nodes.push_back({s, c});
    g.initial.push_back(false);
    words.push_back(w);
    return id;
  };
  for (std::size_t s = 0; s < fp.states.size() && !broken; ++s) {
    if (!fp.initial[s]) continue;
    const auto& sinks = fp.shapes[s].sinks;
    if (sinks.size() > 1) violation("two sinks at one position", at_position(fp, {}, s));
    g.initial[intern(s, sinks.empty() ? kNone : sinks[0], {})] = true;
  }
  std::vector<std::vector<const FuturePast::Transition*>> from(fp.states.size());
  for (const auto& tr : fp.transitions) from[tr.from].push_back(&tr);
  for (std::size_t i = 0; i < g.nodes.size() && !broken; ++i) {
    auto [s, c] = g.nodes[i];
    if (fp.accepting[s] && c == kNone) violation("no sink", format_word(fp.rules.alphabet, words[i]));
    for (const auto* tr : from[s]) {
      Word w = words[i];
      w.push_back(tr->tag);
      const auto& sinks = fp.shapes[tr->to].sinks;
      std::size_t c2 = c;
      if (sinks.size() > 1) violation("two sinks at one position", at_position(fp, w, tr->to));
      if (!sinks.empty()) {
        if (c != kNone) violation("a second sink after " + fp.rules.copies[c], at_position(fp, w, tr->to));
        c2 = sinks[0];
      }
      if (broken) break;
      std::size_t j = intern(tr->to, c2, w);
      g.arcs.push_back({i, tr->tag, j});
    }
  }
  return g;
}

}  // namespace

void fp_conditions(const FuturePast& fp, ConditionReport& c5, ConditionReport& c6) {
  const RuleTransduction& t = fp.rules;
  const std::size_t imax = max_arity(t);
  auto words = fp_access_words(fp);
  c5 = ConditionReport{};
  auto check = [&](std::size_t to, const std::vector<Shape::Edge>& incoming, const Word& prefix) {
    const Shape& sh = fp.shapes[to];
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> count;
    for (const auto& e : incoming) ++count[{e.dst, e.arg}];
    for (std::size_t d = 0; d < t.copies.size(); ++d) {
      if (!sh.active(d)) continue;
      const std::string& label = t.vertex_rules[sh.rules[d][0]].label;
      const std::size_t k = label_arity(t, label);
      for (std::size_t i = 1; i <= std::max(k, imax); ++i) {
        std::size_t n = count[{d, i}];
        if (n == (i <= k ? 1u : 0u)) continue;
        c5.status = CheckStatus::Fail;
        c5.message = "vertex " + t.copies[d] + " labeled " + label + " receives " + std::to_string(n) +
                     " edges at argument " + std::to_string(i);
        c5.witness = at_position(fp, prefix, to);
        return false;
      }
    }
    return true;
  };
  for (std::size_t s = 0; s < fp.states.size(); ++s)
    if (fp.initial[s] && !check(s, fp.shapes[s].eps_edges, {})) break;
  if (c5.status != CheckStatus::Fail)
    for (const auto& tr : fp.transitions) {
      std::vector<Shape::Edge> in = fp.shapes[tr.to].eps_edges;
      for (const auto& [sym, e] : fp.shapes[tr.from].letter_edges)
        if (sym == tr.tag) in.push_back(e);
      Word w = *words[tr.from];
      w.push_back(tr.tag);
      if (!check(tr.to, in, w)) break;
    }
  c6 = ConditionReport{};
  carrier_impl(fp, &c6);
}

CarrierGraph carrier_graph(const FuturePast& fp) { return carrier_impl(fp, nullptr); }

}  // namespace detail

}  // namespace streamcra

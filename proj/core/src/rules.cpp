#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "rules_internal.hpp"
#include "streamcra/error.hpp"
#include "streamcra/rules.hpp"

namespace streamcra {

using detail::kNone;

std::size_t RuleTransduction::copy_index(std::string_view name) const {
  auto it = std::find(copies.begin(), copies.end(), name);
  if (it == copies.end()) fail(ErrorCode::ParseError, "undeclared copy '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - copies.begin());
}

std::size_t RuleTransduction::add_copy(std::string name) {
  copies.push_back(std::move(name));
  return copies.size() - 1;
}

RuleTransduction make_rules(const Alphabet& alphabet, RegistryRef registry, std::vector<std::string> copies,
                            std::string_view domain_regex) {
  RuleTransduction t;
  t.alphabet = alphabet;
  t.registry = std::move(registry);
  t.copies = std::move(copies);
  t.domain = regex_to_dfa(domain_regex, alphabet);
  return t;
}

void add_vertex_rule(RuleTransduction& t, std::string_view copy, std::string label, std::string_view r1,
                     std::string_view r2) {
  label_arity(t, label);
  t.vertex_rules.push_back(
      {t.copy_index(copy), std::move(label), regex_to_dfa(r1, t.alphabet), regex_to_dfa(r2, t.alphabet)});
}

void add_edge_rule(RuleTransduction& t, std::string_view src, std::string_view dst, std::size_t arg,
                   std::string_view r1, std::string_view r2, std::string_view r3) {
  t.edge_rules.push_back({t.copy_index(src), t.copy_index(dst), arg, regex_to_dfa(r1, t.alphabet),
                          regex_to_dfa(r2, t.alphabet), regex_to_dfa(r3, t.alphabet)});
}

std::size_t label_arity(const RuleTransduction& t, const std::string& label) {
  if (label == "val") return 0;
  if (label == "id") return 1;
  if (!t.registry) fail(ErrorCode::UnknownOperation, "no registry for label '" + label + "'");
  return t.registry->lookup(label)->arity;
}

std::size_t max_arity(const RuleTransduction& t) {
  std::size_t m = 1;
  if (t.registry)
    for (const auto& op : t.registry->ops()) m = std::max(m, op->arity);
  for (const auto& r : t.vertex_rules) m = std::max(m, label_arity(t, r.label));
  return m;
}

namespace detail {

std::string marked_word(const Alphabet& alphabet, const Word& u, const Word& v) {
  return format_word(alphabet, u) + " | " + format_word(alphabet, v);
}

Dfa letter_dfa(const Alphabet& alphabet, Symbol a) { return regex_to_dfa(Regex::lit(a), alphabet); }

bool short_middle(const Dfa& middle) {
  const Alphabet& al = middle.alphabet;
  Dfa small = unite(epsilon_dfa(al), regex_to_dfa(Regex::any(al.size()), al));
  return contains(small, middle);
}

}  // namespace detail

bool WellFormedness::ok() const {
  return std::none_of(conditions.begin(), conditions.end(),
                      [](const ConditionReport& c) { return c.status == CheckStatus::Fail; });
}

std::vector<int> WellFormedness::failed() const {
  std::vector<int> out;
  for (int i = 0; i < 7; ++i)
    if (conditions[i].status == CheckStatus::Fail) out.push_back(i + 1);
  return out;
}

namespace {

bool accepts_eps(const Dfa& d) { return d.final[d.start]; }

// d over Σ ∪ {|}, the marker sends every state to a dead sink
Dfa lift(const Dfa& d, const Alphabet& ext) {
  const std::size_t k = d.alphabet.size();
  Dfa out;
  out.alphabet = ext;
  out.num_states = d.num_states + 1;
  out.start = d.start;
  const std::size_t dead = d.num_states;
  out.delta.assign(out.num_states * ext.size(), dead);
  for (std::size_t q = 0; q < d.num_states; ++q)
    for (Symbol a = 0; a < k; ++a) out.delta[q * ext.size() + a] = d.next(q, a);
  out.final = d.final;
  out.final.push_back(false);
  return out;
}

struct Marked {
  Alphabet ext;
  Dfa marker;
  explicit Marked(const Alphabet& alphabet) : ext(alphabet) {
    ext.push_back("|");
    marker = regex_to_dfa(Regex::lit(static_cast<Symbol>(alphabet.size())), ext);
  }
  Dfa join(const Dfa& left, const Dfa& right) const {
    return minimize(concat(concat(lift(left, ext), marker), lift(right, ext)));
  }
  std::string decode(const Alphabet& alphabet, const Word& w) const {
    Word u, v;
    bool after = false;
    for (Symbol s : w) {
      if (s == alphabet.size())
        after = true;
      else
        (after ? v : u).push_back(s);
    }
    return detail::marked_word(alphabet, u, v);
  }
};

std::vector<std::optional<Word>> access_words(const Dfa& d) {
  std::vector<std::optional<Word>> out(d.num_states);
  out[d.start] = Word{};
  std::vector<std::size_t> queue{d.start};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    std::size_t q = queue[i];
    for (Symbol a = 0; a < d.k(); ++a) {
      std::size_t r = d.next(q, a);
      if (out[r]) continue;
      Word w = *out[q];
      w.push_back(a);
      out[r] = std::move(w);
      queue.push_back(r);
    }
  }
  return out;
}

// a cycle in the copy graph, as a copy list
std::optional<std::vector<std::size_t>> find_cycle(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& arcs) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [a, b] : arcs) adj[a].push_back(b);
  std::vector<int> color(n, 0);
  std::vector<std::size_t> stack;
  std::optional<std::vector<std::size_t>> found;
  std::function<bool(std::size_t)> dfs = [&](std::size_t v) {
    color[v] = 1;
    stack.push_back(v);
    for (std::size_t u : adj[v]) {
      if (color[u] == 1) {
        auto it = std::find(stack.begin(), stack.end(), u);
        found = std::vector<std::size_t>(it, stack.end());
        return true;
      }
      if (color[u] == 0 && dfs(u)) return true;
    }
    stack.pop_back();
    color[v] = 2;
    return false;
  };
  for (std::size_t v = 0; v < n; ++v)
    if (color[v] == 0 && dfs(v)) break;
  return found;
}

void set_fail(ConditionReport& c, std::string message, std::optional<std::string> witness = std::nullopt) {
  if (c.status == CheckStatus::Fail) return;
  c.status = CheckStatus::Fail;
  c.message = std::move(message);
  c.witness = std::move(witness);
}

}  // namespace

WellFormedness check_wellformed(const RuleTransduction& t) {
  WellFormedness out;
  auto& c = out.conditions;
  const Alphabet& al = t.alphabet;
  const std::size_t nc = t.copies.size();

  // (1) one label per vertex
  for (std::size_t i = 0; i < t.vertex_rules.size() && c[0].status != CheckStatus::Fail; ++i)
    for (std::size_t j = i + 1; j < t.vertex_rules.size(); ++j) {
      const auto& a = t.vertex_rules[i];
      const auto& b = t.vertex_rules[j];
      if (a.copy != b.copy) continue;
      Dfa pre = intersect(a.r1, b.r1), suf = intersect(a.r2, b.r2);
      if (is_empty(pre) || is_empty(suf)) continue;
      std::string msg = a.label == b.label
                            ? "two rules for label " + a.label + " at copy " + t.copies[a.copy] + " overlap"
                            : "copy " + t.copies[a.copy] + " is labeled both " + a.label + " and " + b.label;
      set_fail(c[0], msg, detail::marked_word(al, *shortest_word(pre), *shortest_word(suf)));
      break;
    }

  // (2) edges connect active vertices
  {
    Marked mk(al);
    std::vector<Dfa> active(nc, empty_dfa(mk.ext));
    for (const auto& r : t.vertex_rules) active[r.copy] = unite(active[r.copy], mk.join(r.r1, r.r2));
    for (const auto& e : t.edge_rules) {
      if (c[1].status == CheckStatus::Fail) break;
      Dfa from = difference(mk.join(e.r1, concat(e.r2, e.r3)), active[e.src]);
      if (!is_empty(from)) {
        set_fail(c[1], "edge " + t.copies[e.src] + " ->" + std::to_string(e.arg) + " " + t.copies[e.dst] +
                           " leaves an inactive " + t.copies[e.src] + " vertex",
                 mk.decode(al, *shortest_word(from)));
        break;
      }
      Dfa into = difference(mk.join(concat(e.r1, e.r2), e.r3), active[e.dst]);
      if (!is_empty(into))
        set_fail(c[1], "edge " + t.copies[e.src] + " ->" + std::to_string(e.arg) + " " + t.copies[e.dst] +
                           " enters an inactive " + t.copies[e.dst] + " vertex",
                 mk.decode(al, *shortest_word(into)));
    }
  }

  // (3) output exists exactly on the domain
  {
    Dfa act = empty_dfa(al);
    for (const auto& r : t.vertex_rules) act = unite(act, concat(r.r1, r.r2));
    Dfa missing = difference(t.domain, act), extra = difference(act, t.domain);
    if (!is_empty(missing))
      set_fail(c[2], "a domain word has no active vertex", format_word(al, *shortest_word(missing)));
    else if (!is_empty(extra))
      set_fail(c[2], "a word outside the domain has an active vertex", format_word(al, *shortest_word(extra)));
  }

  // (4) no ε-edge cycle at one position
  {
    std::vector<std::size_t> eps;
    std::vector<Dfa> pre, suf;
    for (std::size_t j = 0; j < t.edge_rules.size(); ++j)
      if (accepts_eps(t.edge_rules[j].r2)) {
        eps.push_back(j);
        pre.push_back(t.edge_rules[j].r1);
        suf.push_back(t.edge_rules[j].r3);
      }
    if (!eps.empty()) {
      PastAutomaton past = past_automaton(pre, al);
      FutureAutomaton fut = future_automaton(suf, al);
      auto words = access_words(past.dfa);
      for (std::size_t p = 0; p < past.dfa.num_states && c[3].status != CheckStatus::Fail; ++p)
        for (std::size_t at = 0; at < fut.holds.size(); ++at) {
          std::vector<std::pair<std::size_t, std::size_t>> arcs;
          for (std::size_t i = 0; i < eps.size(); ++i)
            if (past.holds[p][i] && fut.holds[at][i])
              arcs.emplace_back(t.edge_rules[eps[i]].src, t.edge_rules[eps[i]].dst);
          auto cyc = find_cycle(nc, arcs);
          if (!cyc) continue;
          std::string names;
          for (std::size_t x : *cyc) names += (names.empty() ? "" : " -> ") + t.copies[x];
          set_fail(c[3], "ε-edges form a cycle " + names + " -> " + t.copies[cyc->front()],
                   detail::marked_word(al, *words[p], *shortest_word(fut.atoms.atoms[at])));
          break;
        }
    }
  }

  // (7) no val at the first position
  for (const auto& r : t.vertex_rules)
    if (r.label == "val" && accepts_eps(r.r1) && !is_empty(r.r2)) {
      set_fail(c[6], "copy " + t.copies[r.copy] + " is labeled val at position 0",
               detail::marked_word(al, {}, *shortest_word(r.r2)));
      break;
    }

  // (5) argument indices in range
  const std::size_t imax = max_arity(t);
  for (const auto& e : t.edge_rules)
    if (e.arg < 1 || e.arg > imax) {
      set_fail(c[4], "argument index " + std::to_string(e.arg) + " outside 1.." + std::to_string(imax));
      break;
    }

  // (5), (6) on the future-past automaton
  bool structural = true;
  for (int i = 0; i < 4; ++i) structural = structural && c[i].status != CheckStatus::Fail;
  if (structural && c[4].status != CheckStatus::Fail) {
    FuturePast fp = future_past(single_step(t));
    ConditionReport c5, c6;
    detail::fp_conditions(fp, c5, c6);
    c[4] = c5;
    c[5] = c6;
  } else {
    if (c[4].status != CheckStatus::Fail) {
      c[4].status = CheckStatus::Skipped;
      c[4].message = "needs conditions 1-4";
    }
    c[5].status = CheckStatus::Skipped;
    c[5].message = "needs conditions 1-5";
  }
  return out;
}

bool is_single_step(const RuleTransduction& t) {
  return std::all_of(t.edge_rules.begin(), t.edge_rules.end(),
                     [](const EdgeRule& e) { return detail::short_middle(e.r2); });
}

bool is_tree(const RuleTransduction& t) {
  for (std::size_t i = 0; i < t.edge_rules.size(); ++i) {
    const auto& a = t.edge_rules[i];
    if (is_empty(a.r1)) continue;
    Dfa tail = minimize(concat(a.r2, a.r3));
    // one rule firing twice from one vertex
    if (!is_empty(difference(tail, unamb_concat_dfa(a.r2, a.r3)))) return false;
    for (std::size_t j = i + 1; j < t.edge_rules.size(); ++j) {
      const auto& b = t.edge_rules[j];
      if (b.src != a.src) continue;
      if (is_empty(intersect(a.r1, b.r1))) continue;
      if (!is_empty(intersect(tail, concat(b.r2, b.r3)))) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- DAG oracle

namespace {

// acc[i][j]: d accepts w[i..j)
std::vector<std::vector<char>> factor_table(const Dfa& d, const Word& w) {
  const std::size_t n = w.size();
  std::vector<std::vector<char>> acc(n + 1, std::vector<char>(n + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) {
    std::size_t q = d.start;
    acc[i][i] = d.final[q];
    for (std::size_t j = i; j < n; ++j) {
      q = d.next(q, w[j]);
      acc[i][j + 1] = d.final[q];
    }
  }
  return acc;
}

}  // namespace

std::optional<OutputDag> materialize_dag(const RuleTransduction& t, const Word& w) {
  if (!t.domain.accepts(w)) return std::nullopt;
  const std::size_t n = w.size();
  const std::size_t nc = t.copies.size();
  auto bad = [](const std::string& msg) { fail(ErrorCode::MalformedDag, msg); };
  auto where = [&](std::size_t c, std::size_t x) {
    return "(" + t.copies[c] + ", " + std::to_string(x) + ")";
  };
  OutputDag g;
  std::vector<std::vector<std::size_t>> id(nc, std::vector<std::size_t>(n + 1, kNone));
  for (const auto& r : t.vertex_rules) {
    auto t1 = factor_table(r.r1, w), t2 = factor_table(r.r2, w);
    for (std::size_t x = 0; x <= n; ++x) {
      if (!t1[0][x] || !t2[x][n]) continue;
      std::size_t& v = id[r.copy][x];
      if (v != kNone) {
        if (g.vertices[v].label != r.label) bad("vertex " + where(r.copy, x) + " has two labels");
        continue;
      }
      if (r.label == "val" && x == 0) bad("val at position 0 in copy " + t.copies[r.copy]);
      v = g.vertices.size();
      g.vertices.push_back({r.copy, x, r.label});
    }
  }
  if (g.vertices.empty()) bad("no active vertex on a domain word");
  for (const auto& e : t.edge_rules) {
    auto t1 = factor_table(e.r1, w), t2 = factor_table(e.r2, w), t3 = factor_table(e.r3, w);
    for (std::size_t x = 0; x <= n; ++x) {
      if (!t1[0][x]) continue;
      for (std::size_t y = x; y <= n; ++y) {
        if (!t2[x][y] || !t3[y][n]) continue;
        std::size_t s = id[e.src][x], d = id[e.dst][y];
        if (s == kNone) bad("edge from inactive vertex " + where(e.src, x));
        if (d == kNone) bad("edge into inactive vertex " + where(e.dst, y));
        g.edges.push_back({s, e.arg, d});
      }
    }
  }
  const std::size_t nv = g.vertices.size();
  std::vector<std::vector<std::size_t>> in_arg(nv);
  std::vector<std::size_t> outdeg(nv, 0);
  for (const auto& e : g.edges) {
    in_arg[e.dst].push_back(e.arg);
    ++outdeg[e.src];
  }
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& vx = g.vertices[v];
    std::size_t k = label_arity(t, vx.label);
    auto& args = in_arg[v];
    std::sort(args.begin(), args.end());
    bool okay = args.size() == k;
    for (std::size_t i = 0; okay && i < k; ++i) okay = args[i] == i + 1;
    if (!okay) bad("vertex " + where(vx.copy, vx.position) + " labeled " + vx.label + " has wrong arguments");
  }
  std::vector<std::size_t> sinks;
  for (std::size_t v = 0; v < nv; ++v)
    if (outdeg[v] == 0) sinks.push_back(v);
  if (sinks.size() != 1) bad(std::to_string(sinks.size()) + " sinks");
  g.sink = sinks[0];
  // acyclicity by Kahn
  std::vector<std::size_t> indeg(nv, 0), order;
  std::vector<std::vector<std::size_t>> succ(nv);
  for (const auto& e : g.edges) {
    succ[e.src].push_back(e.dst);
    ++indeg[e.dst];
  }
  for (std::size_t v = 0; v < nv; ++v)
    if (indeg[v] == 0) order.push_back(v);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t u : succ[order[i]])
      if (--indeg[u] == 0) order.push_back(u);
  if (order.size() != nv) bad("cycle in the output graph");
  return g;
}

Value eval_dag(const RuleTransduction& t, const OutputDag& g, const DataWord& w) {
  const std::size_t nv = g.vertices.size();
  std::vector<std::vector<std::size_t>> args(nv);
  for (const auto& e : g.edges) {
    auto& a = args[e.dst];
    if (a.size() < e.arg) a.resize(e.arg, kNone);
    a[e.arg - 1] = e.src;
  }
  std::map<std::string, OpRef> ops;
  std::vector<std::optional<Value>> memo(nv);
  std::vector<char> busy(nv, 0);
  std::function<Value(std::size_t)> go = [&](std::size_t v) -> Value {
    if (memo[v]) return *memo[v];
    if (busy[v]) fail(ErrorCode::MalformedDag, "cycle in the output graph");
    busy[v] = 1;
    const auto& vx = g.vertices[v];
    Value out;
    if (vx.label == "val") {
      if (vx.position == 0 || vx.position > w.size()) fail(ErrorCode::MalformedDag, "val without an input value");
      out = w[vx.position - 1].value;
    } else {
      std::vector<Value> in;
      for (std::size_t u : args[v]) {
        if (u == kNone) fail(ErrorCode::MalformedDag, "missing argument");
        in.push_back(go(u));
      }
      if (vx.label == "id") {
        if (in.size() != 1) fail(ErrorCode::MalformedDag, "id needs one argument");
        out = in[0];
      } else {
        auto it = ops.find(vx.label);
        if (it == ops.end()) it = ops.emplace(vx.label, t.registry->lookup(vx.label)).first;
        if (in.size() != it->second->arity) fail(ErrorCode::MalformedDag, "wrong argument count for " + vx.label);
        out = it->second->eval(in);
      }
    }
    busy[v] = 0;
    memo[v] = out;
    return out;
  };
  return go(g.sink);
}

std::optional<Value> dag_oracle_eval(const RuleTransduction& t, const DataWord& w) {
  Word tags;
  for (const auto& it : w) tags.push_back(it.tag);
  auto g = materialize_dag(t, tags);
  if (!g) return std::nullopt;
  return eval_dag(t, *g, w);
}

// ---------------------------------------------------------------- single step

RuleTransduction single_step(const RuleTransduction& t) {
  RuleTransduction out = t;
  out.edge_rules.clear();
  const std::size_t k = t.alphabet.size();
  for (std::size_t j = 0; j < t.edge_rules.size(); ++j) {
    const EdgeRule& e = t.edge_rules[j];
    if (detail::short_middle(e.r2)) {
      out.edge_rules.push_back(e);
      continue;
    }
    Dfa d = minimize(e.r2);
    // live states reach a final state
    std::vector<bool> live(d.num_states, false);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t q = 0; q < d.num_states; ++q) {
        if (live[q]) continue;
        bool l = d.final[q];
        for (Symbol a = 0; a < k && !l; ++a) l = live[d.next(q, a)];
        if (l) live[q] = changed = true;
      }
    }
    if (!live[d.start]) continue;
    std::vector<std::size_t> copy_of(d.num_states, kNone);
    std::vector<Dfa> left(d.num_states), right(d.num_states);
    const std::string base = t.copies[e.src] + "_" + t.copies[e.dst] + std::to_string(e.arg);
    std::size_t fresh = 0;
    for (std::size_t q = 0; q < d.num_states; ++q) {
      if (!live[q]) continue;
      std::string name;
      do name = base + "." + std::to_string(fresh++);
      while (std::find(out.copies.begin(), out.copies.end(), name) != out.copies.end());
      copy_of[q] = out.add_copy(name);
      Dfa lq = d;
      for (std::size_t s = 0; s < d.num_states; ++s) lq.final[s] = s == q;
      left[q] = minimize(concat(e.r1, minimize(lq)));
      right[q] = minimize(concat(residual(d, q), e.r3));
      out.vertex_rules.push_back({copy_of[q], "id", left[q], right[q]});
    }
    const Dfa eps = epsilon_dfa(t.alphabet);
    out.edge_rules.push_back({e.src, copy_of[d.start], 1, e.r1, eps, minimize(concat(e.r2, e.r3))});
    for (std::size_t q = 0; q < d.num_states; ++q) {
      if (!live[q]) continue;
      if (d.final[q]) out.edge_rules.push_back({copy_of[q], e.dst, e.arg, left[q], eps, e.r3});
      for (Symbol a = 0; a < k; ++a) {
        std::size_t r = d.next(q, a);
        if (!live[r]) continue;
        out.edge_rules.push_back({copy_of[q], copy_of[r], 1, left[q], detail::letter_dfa(t.alphabet, a), right[r]});
      }
    }
  }
  return out;
}

std::string format_rules(const RuleTransduction& t) {
  auto rx = [&](const Dfa& d) { return format_regex(dfa_to_regex(d), t.alphabet); };
  std::ostringstream os;
  os << "domain " << rx(t.domain) << "\n";
  for (const auto& r : t.vertex_rules)
    os << "label " << r.label << " at " << t.copies[r.copy] << ": " << rx(r.r1) << " ; " << rx(r.r2) << "\n";
  for (const auto& e : t.edge_rules)
    os << "edge " << t.copies[e.src] << " ->" << e.arg << " " << t.copies[e.dst] << ": " << rx(e.r1) << " ; "
       << rx(e.r2) << " ; " << rx(e.r3) << "\n";
  return os.str();
}

}  // namespace streamcra

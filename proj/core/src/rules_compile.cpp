#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "rules_internal.hpp"
#include "streamcra/error.hpp"
#include "streamcra/rules.hpp"

namespace streamcra {

using detail::kNone;

namespace {

std::string describe(const WellFormedness& wf) {
  std::string out;
  for (int i : wf.failed()) {
    const auto& c = wf.conditions[i - 1];
    out += (out.empty() ? "" : "; ") + std::string("condition ") + std::to_string(i) + ": " + c.message;
    if (c.witness) out += " [" + *c.witness + "]";
  }
  return out;
}

// expressions of the vertices at the position of `to`; `from` and `tag` give the incoming letter edges
struct VertexExprs {
  const FuturePast& fp;
  const std::function<OpRef(const std::string&)>& op_of;
  std::size_t to;
  std::size_t from;
  std::optional<Symbol> tag;
  std::map<std::size_t, Expr> memo;
  std::set<std::size_t> busy;

  Expr get(std::size_t d) {
    auto hit = memo.find(d);
    if (hit != memo.end()) return hit->second;
    const RuleTransduction& ss = fp.rules;
    const Shape& sh = fp.shapes[to];
    if (busy.count(d)) fail(ErrorCode::NotWellFormed, "ε-edge cycle through " + ss.copies[d]);
    if (!sh.active(d)) fail(ErrorCode::NotWellFormed, "inactive vertex " + ss.copies[d] + " is read");
    busy.insert(d);
    const std::string& label = ss.vertex_rules[sh.rules[d][0]].label;
    const std::size_t k = label_arity(ss, label);
    std::vector<Expr> args(k);
    std::vector<bool> seen(k, false);
    for (const auto& e : sh.eps_edges)
      if (e.dst == d && e.arg <= k) {
        args[e.arg - 1] = get(e.src);
        seen[e.arg - 1] = true;
      }
    if (tag)
      for (const auto& [sym, e] : fp.shapes[from].letter_edges)
        if (sym == *tag && e.dst == d && e.arg <= k) {
          args[e.arg - 1] = Expr::reg(static_cast<RegId>(e.src));
          seen[e.arg - 1] = true;
        }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      fail(ErrorCode::NotWellFormed, "missing argument of " + ss.copies[d]);
    Expr out;
    if (label == "val")
      out = Expr::val();
    else if (label == "id")
      out = args[0];
    else if (k == 0)
      out = Expr::constant(op_of(label));
    else
      out = Expr::apply(op_of(label), std::move(args));
    busy.erase(d);
    memo.emplace(d, out);
    return out;
  }
};

}  // namespace

Cra compile_to_ucra(const RuleTransduction& t) {
  WellFormedness wf = check_wellformed(t);
  if (!wf.ok()) fail(ErrorCode::NotWellFormed, describe(wf));
  FuturePast fp = future_past(single_step(t));
  const RuleTransduction& ss = fp.rules;
  detail::CarrierGraph g = detail::carrier_graph(fp);
  const std::size_t nc = ss.copies.size();

  Cra m;
  m.alphabet = ss.alphabet;
  m.registry = ss.registry;
  m.registers = ss.copies;
  OpRef filler = ss.registry ? ss.registry->first_constant() : nullptr;
  std::map<std::string, OpRef> ops;
  std::function<OpRef(const std::string&)> op_of = [&](const std::string& label) {
    auto it = ops.find(label);
    if (it == ops.end()) it = ops.emplace(label, ss.registry->lookup(label)).first;
    return it->second;
  };

  auto fill = [&](std::size_t r) { return filler ? Expr::constant(filler) : Expr::reg(static_cast<RegId>(r)); };

  auto build = [&](std::size_t node, std::optional<std::size_t> prev, std::optional<Symbol> tag) {
    const auto& nd = g.nodes[node];
    const Shape& sh = fp.shapes[nd.fp];
    VertexExprs ve{fp, op_of, nd.fp, prev ? g.nodes[*prev].fp : 0, tag, {}, {}};
    auto expr = [&ve](std::size_t d) { return ve.get(d); };
    Update u(nc);
    std::vector<bool> set(nc, false);
    for (std::size_t r : sh.needed) {
      u[r] = expr(r);
      set[r] = true;
    }
    if (nd.carrier != kNone) {
      if (set[nd.carrier]) fail(ErrorCode::NotWellFormed, "output register " + ss.copies[nd.carrier] + " is still read");
      bool fresh = !prev || g.nodes[*prev].carrier == kNone;
      u[nd.carrier] = fresh ? expr(nd.carrier) : Expr::reg(static_cast<RegId>(nd.carrier));
      set[nd.carrier] = true;
    }
    return std::make_pair(u, set);
  };

  for (const auto& nd : g.nodes) {
    auto [p, a] = fp.states[nd.fp];
    std::string name = std::to_string(p) + "." + std::to_string(a);
    if (nd.carrier != kNone) name += "/" + ss.copies[nd.carrier];
    m.add_state(name);
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (g.initial[i]) {
      auto [u, set] = build(i, std::nullopt, std::nullopt);
      std::optional<Expr> closed;
      for (std::size_t r = 0; r < nc; ++r)
        if (set[r]) closed = u[r];
      for (std::size_t r = 0; r < nc; ++r) {
        if (set[r]) continue;
        if (filler)
          u[r] = Expr::constant(filler);
        else if (closed)
          u[r] = *closed;
        else
          fail(ErrorCode::NoConstant, "the registry declares no constant");
      }
      m.init[i] = std::move(u);
    }
    const auto& nd = g.nodes[i];
    if (fp.accepting[nd.fp] && nd.carrier != kNone) m.final[i] = Expr::reg(static_cast<RegId>(nd.carrier));
  }
  for (const auto& arc : g.arcs) {
    auto [u, set] = build(arc.to, arc.from, arc.tag);
    for (std::size_t r = 0; r < nc; ++r)
      if (!set[r]) u[r] = fill(r);
    m.transitions.push_back({arc.from, static_cast<int>(arc.tag), std::move(u), arc.to});
  }
  m = trim(m);

  // drop registers nothing reads
  std::vector<std::size_t> reads(nc, 0);
  for (const auto& tr : m.transitions)
    for (std::size_t r = 0; r < nc; ++r)
      if (!(tr.update[r] == Expr::reg(static_cast<RegId>(r)))) count_registers(tr.update[r], reads);
  for (const auto& f : m.final)
    if (f) count_registers(*f, reads);
  std::vector<std::size_t> keep;
  std::vector<RegId> renum(nc, 0);
  for (std::size_t r = 0; r < nc; ++r)
    if (reads[r]) {
      renum[r] = static_cast<RegId>(keep.size());
      keep.push_back(r);
    }
  auto rn = [&](const Expr& e) { return substitute(e, [&](RegId r) { return Expr::reg(renum[r]); }); };
  Cra out = m;
  out.registers.clear();
  for (std::size_t r : keep) out.registers.push_back(m.registers[r]);
  auto project = [&](const Update& u) {
    Update v;
    for (std::size_t r : keep) v.push_back(rn(u[r]));
    return v;
  };
  for (auto& tr : out.transitions) tr.update = project(tr.update);
  for (auto& i : out.init)
    if (i) i = project(*i);
  for (auto& f : out.final)
    if (f) f = rn(*f);
  return out;
}

// ---------------------------------------------------------------- CRA -> rules

RuleTransduction cra_to_rules(const Cra& input) {
  Cra m = trim(eliminate_epsilon(input));
  Nfa rate_nfa = rate(m);
  if (!is_unambiguous(rate_nfa)) fail(ErrorCode::PreconditionViolation, "cra_to_rules needs an unambiguous machine");
  const Alphabet& al = m.alphabet;
  const std::size_t nq = m.num_states();
  const std::size_t nx = m.num_registers();

  RuleTransduction t;
  t.alphabet = al;
  t.registry = m.registry;
  t.copies = m.registers;
  t.domain = minimize(determinize(rate_nfa));

  std::vector<Dfa> into(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    Nfa n = rate_nfa;
    for (std::size_t s = 0; s < nq; ++s) n.final[s] = s == q;
    into[q] = minimize(determinize(n));
  }
  // suffixes on which register r at state q is read
  Nfa live_nfa;
  live_nfa.alphabet = al;
  for (std::size_t q = 0; q < nq; ++q)
    for (std::size_t r = 0; r < nx; ++r) {
      bool used = false;
      if (m.final[q]) {
        std::vector<std::size_t> c(nx, 0);
        count_registers(*m.final[q], c);
        used = c[r] > 0;
      }
      live_nfa.add_state(false, used);
    }
  for (const auto& tr : m.transitions)
    for (std::size_t r2 = 0; r2 < nx; ++r2) {
      std::vector<std::size_t> c(nx, 0);
      count_registers(tr.update[r2], c);
      for (std::size_t r = 0; r < nx; ++r)
        if (c[r]) live_nfa.add_edge(tr.from * nx + r, tr.tag, tr.to * nx + r2);
    }
  auto live = [&](std::size_t q, std::size_t r) {
    Nfa n = live_nfa;
    for (std::size_t s = 0; s < n.num_states; ++s) n.initial[s] = s == q * nx + r;
    return minimize(determinize(n));
  };
  std::map<std::pair<std::size_t, std::size_t>, Dfa> live_cache;
  auto live_of = [&](std::size_t q, std::size_t r) -> const Dfa& {
    auto it = live_cache.find({q, r});
    if (it == live_cache.end()) it = live_cache.emplace(std::make_pair(q, r), live(q, r)).first;
    return it->second;
  };

  const Dfa eps = epsilon_dfa(al);
  auto fresh_copy = [&](const std::string& base) {
    std::string name = base;
    while (std::find(t.copies.begin(), t.copies.end(), name) != t.copies.end()) name += "'";
    return t.add_copy(name);
  };

  // `letter_pre` is set for nodes built by a transition: register leaves are read one letter back
  struct Ctx {
    Dfa pre, suf;
    std::optional<Dfa> prev_pre;
    std::optional<Symbol> tag;
  };
  std::function<void(const Expr&, std::size_t, const Ctx&, const std::string&)> node =
      [&](const Expr& e, std::size_t copy, const Ctx& ctx, const std::string& path) {
        auto read_reg = [&](RegId s, std::size_t arg) {
          if (ctx.tag)
            t.edge_rules.push_back({s, copy, arg, *ctx.prev_pre, detail::letter_dfa(al, *ctx.tag), ctx.suf});
          else
            t.edge_rules.push_back({s, copy, arg, ctx.pre, eps, ctx.suf});
        };
        switch (e.kind()) {
          case Expr::Kind::Val:
            t.vertex_rules.push_back({copy, "val", ctx.pre, ctx.suf});
            return;
          case Expr::Kind::Const:
            t.vertex_rules.push_back({copy, e.op()->name, ctx.pre, ctx.suf});
            return;
          case Expr::Kind::Reg:
            t.vertex_rules.push_back({copy, "id", ctx.pre, ctx.suf});
            read_reg(e.reg_id(), 1);
            return;
          case Expr::Kind::Apply:
            break;
        }
        t.vertex_rules.push_back({copy, e.op()->name, ctx.pre, ctx.suf});
        for (std::size_t j = 0; j < e.args().size(); ++j) {
          const Expr& a = e.args()[j];
          if (a.kind() == Expr::Kind::Reg) {
            read_reg(a.reg_id(), j + 1);
            continue;
          }
          std::string sub = path + "." + std::to_string(j + 1);
          std::size_t child = fresh_copy(sub);
          node(a, child, ctx, sub);
          t.edge_rules.push_back({child, copy, j + 1, ctx.pre, eps, ctx.suf});
        }
      };

  for (std::size_t q = 0; q < nq; ++q) {
    if (!m.init[q]) continue;
    for (std::size_t r = 0; r < nx; ++r) {
      Ctx ctx{eps, live_of(q, r), std::nullopt, std::nullopt};
      if (is_empty(ctx.suf)) continue;
      node((*m.init[q])[r], r, ctx, "i" + std::to_string(q) + "." + m.registers[r]);
    }
  }
  for (std::size_t i = 0; i < m.transitions.size(); ++i) {
    const Transition& tr = m.transitions[i];
    const Symbol a = static_cast<Symbol>(tr.tag);
    Dfa pre = minimize(concat(into[tr.from], detail::letter_dfa(al, a)));
    for (std::size_t r = 0; r < nx; ++r) {
      Ctx ctx{pre, live_of(tr.to, r), into[tr.from], a};
      if (is_empty(ctx.suf)) continue;
      node(tr.update[r], r, ctx, "t" + std::to_string(i) + "." + m.registers[r]);
    }
  }
  for (std::size_t q = 0; q < nq; ++q) {
    // a bare register is its own sink
    if (!m.final[q] || m.final[q]->kind() == Expr::Kind::Reg) continue;
    const std::string base = "f" + std::to_string(q);
    Ctx ctx{into[q], eps, std::nullopt, std::nullopt};
    node(*m.final[q], fresh_copy(base), ctx, base);
  }
  return t;
}

}  // namespace streamcra

#include "streamcra/weighted.hpp"

#include <functional>

#include "streamcra/error.hpp"

namespace streamcra {

const Value& WeightedAutomaton::weight(std::size_t p, Symbol a, std::size_t q) const {
  return delta[(p * alphabet.size() + a) * states.size() + q];
}

Value& WeightedAutomaton::weight(std::size_t p, Symbol a, std::size_t q) {
  return delta[(p * alphabet.size() + a) * states.size() + q];
}

WeightedAutomaton make_wa(const std::string& semiring, const Alphabet& alphabet, std::vector<std::string> states) {
  WeightedAutomaton w;
  w.alphabet = alphabet;
  w.semiring_name = semiring;
  w.semiring = semiring_by_name(semiring);
  w.states = std::move(states);
  const std::size_t n = w.states.size();
  w.delta.assign(n * alphabet.size() * n, w.semiring.zero);
  w.init.assign(n, w.semiring.zero);
  w.final.assign(n, w.semiring.zero);
  return w;
}

Value wa_eval(const WeightedAutomaton& w, const Word& word) {
  const Semiring& s = w.semiring;
  const std::size_t n = w.num_states();
  std::vector<Value> row = w.init;
  for (Symbol a : word) {
    std::vector<Value> next(n, s.zero);
    for (std::size_t p = 0; p < n; ++p) {
      if (row[p] == s.zero) continue;
      for (std::size_t q = 0; q < n; ++q) next[q] = s.plus(next[q], s.times(row[p], w.weight(p, a, q)));
    }
    row = std::move(next);
  }
  Value out = s.zero;
  for (std::size_t q = 0; q < n; ++q) out = s.plus(out, s.times(row[q], w.final[q]));
  return out;
}

Value wa_path_oracle(const WeightedAutomaton& w, const Word& word, std::size_t max_paths) {
  const Semiring& s = w.semiring;
  const std::size_t n = w.num_states();
  double paths = 1;
  for (std::size_t i = 0; i <= word.size(); ++i) paths *= static_cast<double>(n);
  if (paths > static_cast<double>(max_paths))
    fail(ErrorCode::BoundExceeded, "path enumeration exceeds " + std::to_string(max_paths) + " paths");
  Value total = s.zero;
  std::vector<std::size_t> path(word.size() + 1, 0);
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == path.size()) {
      Value v = w.init[path[0]];
      for (std::size_t j = 0; j < word.size(); ++j) v = s.times(v, w.weight(path[j], word[j], path[j + 1]));
      total = s.plus(total, s.times(v, w.final[path.back()]));
      return;
    }
    for (std::size_t q = 0; q < n; ++q) {
      path[i] = q;
      go(i + 1);
    }
  };
  if (n > 0) go(0);
  return total;
}

Nfa support_nfa(const WeightedAutomaton& w) {
  Nfa n;
  n.alphabet = w.alphabet;
  const Value& zero = w.semiring.zero;
  for (std::size_t q = 0; q < w.num_states(); ++q) n.add_state(!(w.init[q] == zero), !(w.final[q] == zero));
  for (std::size_t p = 0; p < w.num_states(); ++p)
    for (Symbol a = 0; a < w.alphabet.size(); ++a)
      for (std::size_t q = 0; q < w.num_states(); ++q)
        if (!(w.weight(p, a, q) == zero)) n.add_edge(p, static_cast<int>(a), q);
  return n;
}

bool is_unambiguous_wa(const WeightedAutomaton& w) { return is_unambiguous(support_nfa(w)); }

// ---------------------------------------------------------------- WA -> CRA

namespace {

// x·d with the trivial cases folded
Expr times_const(const OperationRegistry& reg, const Semiring& s, Expr x, const Value& d) {
  if (d == s.one) return x;
  return Expr::apply(reg.lookup("rmul[" + d.to_string() + "]"), {std::move(x)});
}

Expr constant_expr(const OperationRegistry& reg, const Semiring& s, const Value& d) {
  if (d == s.zero) return Expr::constant(reg.lookup("0"));
  return times_const(reg, s, Expr::constant(reg.lookup("1")), d);
}

Expr sum_of(const OperationRegistry& reg, std::vector<Expr> terms) {
  if (terms.empty()) return Expr::constant(reg.lookup("0"));
  OpRef plus = reg.lookup("+");
  Expr acc = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) acc = Expr::apply(plus, {acc, terms[i]});
  return acc;
}

}  // namespace

Cra wa_to_cra(const WeightedAutomaton& w, const RegistryRef& registry) {
  if (registry->kind() != DomainKind::Semiring || !registry->semiring() ||
      registry->semiring()->name != w.semiring.name)
    fail(ErrorCode::RegistryMismatch, "wa_to_cra needs a registry over the " + w.semiring.name + " semiring");
  const OperationRegistry& reg = *registry;
  const Semiring& s = w.semiring;
  const std::size_t n = w.num_states();
  Cra m;
  m.alphabet = w.alphabet;
  m.registry = registry;
  for (const auto& q : w.states) m.registers.push_back("x_" + q);
  std::size_t st = m.add_state("s");
  Update init;
  for (std::size_t q = 0; q < n; ++q) init.push_back(constant_expr(reg, s, w.init[q]));
  m.init[st] = std::move(init);
  std::vector<Expr> fin;
  for (std::size_t q = 0; q < n; ++q)
    if (!(w.final[q] == s.zero)) fin.push_back(times_const(reg, s, Expr::reg(static_cast<RegId>(q)), w.final[q]));
  m.final[st] = sum_of(reg, std::move(fin));
  for (Symbol a = 0; a < w.alphabet.size(); ++a) {
    Update u;
    for (std::size_t q = 0; q < n; ++q) {
      std::vector<Expr> terms;
      for (std::size_t p = 0; p < n; ++p)
        if (!(w.weight(p, a, q) == s.zero))
          terms.push_back(times_const(reg, s, Expr::reg(static_cast<RegId>(p)), w.weight(p, a, q)));
      u.push_back(sum_of(reg, std::move(terms)));
    }
    m.transitions.push_back({st, static_cast<int>(a), std::move(u), st});
  }
  return m;
}

Cra wa_to_cra(const WeightedAutomaton& w) {
  RegistryDescriptor d;
  d.domain = "semiring";
  d.semiring = w.semiring_name;
  return wa_to_cra(w, make_registry(d));
}

// ---------------------------------------------------------------- CRA -> WA

LinearForm linear_normalize(const Expr& e, std::size_t num_registers, const Semiring& s) {
  auto scale = [&s](LinearForm f, const Value& d) {
    for (auto& c : f.coeffs) c = s.times(c, d);
    f.constant = s.times(f.constant, d);
    return f;
  };
  std::function<LinearForm(const Expr&)> go = [&](const Expr& x) -> LinearForm {
    LinearForm f{std::vector<Value>(num_registers, s.zero), s.zero};
    switch (x.kind()) {
      case Expr::Kind::Val:
        fail(ErrorCode::NonLinearizableExpression, "val has no linear form");
      case Expr::Kind::Reg:
        f.coeffs.at(x.reg_id()) = s.one;
        return f;
      case Expr::Kind::Const:
        f.constant = x.op()->eval({});
        return f;
      case Expr::Kind::Apply:
        break;
    }
    if (x.is_closed()) {
      f.constant = eval_expr(x, {}, nullptr);
      return f;
    }
    const OpRef& op = x.op();
    const auto& args = x.args();
    if (op->tags.right_mult_const && op->arity == 1) return scale(go(args[0]), *op->tags.right_mult_const);
    if (op->name == "+" && op->arity == 2) {
      LinearForm a = go(args[0]), b = go(args[1]);
      for (std::size_t i = 0; i < num_registers; ++i) a.coeffs[i] = s.plus(a.coeffs[i], b.coeffs[i]);
      a.constant = s.plus(a.constant, b.constant);
      return a;
    }
    if (op->name == "*" && op->arity == 2 && args[1].is_closed() && !args[1].uses_val())
      return scale(go(args[0]), eval_expr(args[1], {}, nullptr));
    fail(ErrorCode::NonLinearizableExpression,
         "'" + op->name + "' applied to registers is not a right multiplication by a constant");
  };
  return go(e);
}

WeightedAutomaton cra_to_wa(const Cra& input) {
  if (!input.registry || input.registry->kind() != DomainKind::Semiring)
    fail(ErrorCode::RegistryMismatch, "cra_to_wa needs a semiring registry");
  const Semiring& s = *input.registry->semiring();
  Cra m = trim(eliminate_epsilon(input));
  if (!language_equal(minimize(determinize(rate(m))), universal_dfa(m.alphabet)))
    fail(ErrorCode::PartialRate, "cra_to_wa needs a machine defined on every tag word");
  const std::size_t nq = m.num_states();
  const std::size_t nx = m.num_registers();
  std::vector<std::string> names = m.states;
  for (std::size_t q = 0; q < nq; ++q)
    for (std::size_t x = 0; x < nx; ++x) names.push_back(m.states[q] + "." + m.registers[x]);
  WeightedAutomaton w = make_wa(s.name, m.alphabet, names);
  auto pair = [nq, nx](std::size_t q, std::size_t x) { return nq + q * nx + x; };
  auto add = [&s](Value& slot, const Value& v) { slot = s.plus(slot, v); };
  for (const auto& t : m.transitions) {
    const Symbol a = static_cast<Symbol>(t.tag);
    add(w.weight(t.from, a, t.to), s.one);
    for (std::size_t j = 0; j < nx; ++j) {
      LinearForm f = linear_normalize(t.update[j], nx, s);
      for (std::size_t i = 0; i < nx; ++i) add(w.weight(pair(t.from, i), a, pair(t.to, j)), f.coeffs[i]);
      add(w.weight(t.from, a, pair(t.to, j)), f.constant);
    }
  }
  for (std::size_t q = 0; q < nq; ++q) {
    if (m.final[q]) {
      LinearForm f = linear_normalize(*m.final[q], nx, s);
      w.final[q] = f.constant;
      for (std::size_t i = 0; i < nx; ++i) w.final[pair(q, i)] = f.coeffs[i];
    }
    if (m.init[q]) {
      w.init[q] = s.one;
      for (std::size_t x = 0; x < nx; ++x) w.init[pair(q, x)] = eval_expr((*m.init[q])[x], {}, nullptr);
    }
  }
  return w;
}

// ---------------------------------------------------------------- monoid automata

Nfa support_nfa(const MonoidWa& w) {
  Nfa n;
  n.alphabet = w.alphabet;
  for (std::size_t q = 0; q < w.num_states(); ++q) n.add_state(w.init[q].has_value(), w.final[q].has_value());
  for (const auto& e : w.edges) n.add_edge(e.from, static_cast<int>(e.tag), e.to);
  return n;
}

bool is_unambiguous_wa(const MonoidWa& w) { return is_unambiguous(support_nfa(w)); }

std::optional<Value> monoid_wa_eval(const MonoidWa& w, const Word& word) {
  const Monoid& m = *w.registry->monoid();
  std::vector<std::vector<const MonoidWa::Edge*>> out_of(w.num_states());
  for (const auto& e : w.edges) out_of[e.from].push_back(&e);
  // live prefixes of successful paths: one value per (state, run); runs are kept apart
  std::vector<std::pair<std::size_t, Value>> runs;
  for (std::size_t q = 0; q < w.num_states(); ++q)
    if (w.init[q]) runs.emplace_back(q, *w.init[q]);
  for (Symbol a : word) {
    std::vector<std::pair<std::size_t, Value>> next;
    for (const auto& [q, v] : runs)
      for (const auto* e : out_of[q])
        if (e->tag == a) next.emplace_back(e->to, m.dot(v, e->weight));
    runs = std::move(next);
  }
  std::optional<Value> out;
  for (const auto& [q, v] : runs) {
    if (!w.final[q]) continue;
    if (out) fail(ErrorCode::AmbiguityDetected, "two successful paths");
    out = m.dot(v, *w.final[q]);
  }
  return out;
}

MonoidWa monoid_view(const WeightedAutomaton& w) {
  std::string mname;
  if (w.semiring.name == "nat-arith" || w.semiring.name == "int-arith")
    mname = "int-mul";
  else if (w.semiring.name == "tropical")
    mname = "int-add";
  else
    fail(ErrorCode::RegistryMismatch, "no monoid registry for the " + w.semiring.name + " semiring");
  RegistryDescriptor d;
  d.domain = "monoid-unary";
  d.monoid = mname;
  MonoidWa out;
  out.alphabet = w.alphabet;
  out.registry = make_registry(d);
  out.states = w.states;
  const Value& zero = w.semiring.zero;
  for (std::size_t q = 0; q < w.num_states(); ++q) {
    out.init.push_back(w.init[q] == zero ? std::nullopt : std::optional<Value>(w.init[q]));
    out.final.push_back(w.final[q] == zero ? std::nullopt : std::optional<Value>(w.final[q]));
  }
  for (std::size_t p = 0; p < w.num_states(); ++p)
    for (Symbol a = 0; a < w.alphabet.size(); ++a)
      for (std::size_t q = 0; q < w.num_states(); ++q)
        if (!(w.weight(p, a, q) == zero)) out.edges.push_back({p, a, w.weight(p, a, q), q});
  return out;
}

Cra uwa_to_copyless_ucra(const MonoidWa& w) {
  if (!is_unambiguous_wa(w)) fail(ErrorCode::NotUnambiguous, "uwa_to_copyless_ucra needs an unambiguous automaton");
  const OperationRegistry& reg = *w.registry;
  const Monoid& mo = *reg.monoid();
  auto times = [&](Expr x, const Value& d) {
    if (d == mo.one) return x;
    return Expr::apply(reg.lookup("rmul[" + d.to_string() + "]"), {std::move(x)});
  };
  Cra m;
  m.alphabet = w.alphabet;
  m.registry = w.registry;
  m.registers = {"x"};
  for (std::size_t q = 0; q < w.num_states(); ++q) {
    m.add_state(w.states[q]);
    if (w.init[q]) m.init[q] = Update{times(Expr::constant(reg.lookup("1")), *w.init[q])};
    if (w.final[q]) m.final[q] = times(Expr::reg(0), *w.final[q]);
  }
  for (const auto& e : w.edges)
    m.transitions.push_back({e.from, static_cast<int>(e.tag), Update{times(Expr::reg(0), e.weight)}, e.to});
  return m;
}

MonoidWa copyless_ucra_to_uwa(const Cra& input) {
  if (!input.registry || input.registry->kind() != DomainKind::MonoidUnary)
    fail(ErrorCode::NonUnaryOperation, "copyless_ucra_to_uwa needs a monoid-unary registry");
  const Monoid& mo = *input.registry->monoid();
  Cra c = unary_to_copyless(input);
  auto no_val = [](const Expr& e) {
    if (e.uses_val()) fail(ErrorCode::PreconditionViolation, "weighted automata are value-oblivious; val found");
  };
  // a chain over r evaluates to r·D; with r = 1 it yields D
  const Valuation unit{mo.one};
  MonoidWa w;
  w.alphabet = c.alphabet;
  w.registry = c.registry;
  w.states = c.states;
  w.init.assign(c.num_states(), std::nullopt);
  w.final.assign(c.num_states(), std::nullopt);
  // states whose register content is irrelevant carry the identity weight
  auto is_bottom = [&](std::size_t q) { return c.states[q].size() >= 3 && c.states[q].ends_with("/⊥"); };
  for (std::size_t q = 0; q < c.num_states(); ++q) {
    if (c.init[q]) w.init[q] = is_bottom(q) ? mo.one : eval_expr((*c.init[q])[0], {}, nullptr);
    if (c.final[q]) {
      no_val(*c.final[q]);
      w.final[q] = eval_expr(*c.final[q], unit, nullptr);
    }
  }
  for (const auto& t : c.transitions) {
    no_val(t.update[0]);
    Value d = is_bottom(t.to) ? mo.one : eval_expr(t.update[0], unit, nullptr);
    w.edges.push_back({t.from, static_cast<Symbol>(t.tag), d, t.to});
  }
  return w;
}

}  // namespace streamcra

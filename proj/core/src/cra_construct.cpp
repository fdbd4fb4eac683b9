#include <map>

#include "streamcra/cra.hpp"
#include "streamcra/error.hpp"

namespace streamcra {

namespace {

std::string subset_name(const Cra& m, const std::vector<std::size_t>& set) {
  std::string s = "{";
  for (std::size_t i = 0; i < set.size(); ++i) s += (i ? "," : "") + m.states[set[i]];
  return s + "}";
}

}  // namespace

Cra ucra_to_dcra(const Cra& input) {
  Cra m = trim(eliminate_epsilon(input));
  if (!is_unambiguous(rate(m))) fail(ErrorCode::NotUnambiguous, "ucra_to_dcra needs an unambiguous machine");
  const std::size_t nx = m.num_registers();
  const std::size_t k = m.alphabet.size();
  OpRef c = m.registry->first_constant();
  if (!c && m.num_states() * nx > 0) fail(ErrorCode::NoConstant, "the registry declares no constant");

  Cra out;
  out.alphabet = m.alphabet;
  out.registry = m.registry;
  for (std::size_t q = 0; q < m.num_states(); ++q)
    for (std::size_t x = 0; x < nx; ++x) out.registers.push_back(m.states[q] + "." + m.registers[x]);
  const std::size_t nr = out.registers.size();

  std::vector<std::vector<std::vector<const Transition*>>> by_tag(m.num_states(),
                                                                   std::vector<std::vector<const Transition*>>(k));
  for (const auto& t : m.transitions) by_tag[t.from][t.tag].push_back(&t);

  std::map<std::vector<std::size_t>, std::size_t> index;
  std::vector<std::vector<std::size_t>> subsets;
  auto intern = [&](const std::vector<std::size_t>& set) {
    auto it = index.find(set);
    if (it != index.end()) return it->second;
    std::size_t id = out.add_state(subset_name(m, set));
    index.emplace(set, id);
    subsets.push_back(set);
    return id;
  };
  auto renamed = [nx](const Expr& e, std::size_t p) {
    return substitute(e, [&](RegId y) { return Expr::reg(static_cast<RegId>(p * nx + y)); });
  };

  std::vector<std::size_t> start;
  for (std::size_t q = 0; q < m.num_states(); ++q)
    if (m.init[q]) start.push_back(q);
  if (start.empty()) return out;
  std::size_t s0 = intern(start);
  Update init(nr, c ? Expr::constant(c) : Expr());
  for (std::size_t q : start)
    for (std::size_t x = 0; x < nx; ++x) init[q * nx + x] = (*m.init[q])[x];
  out.init[s0] = std::move(init);

  for (std::size_t i = 0; i < subsets.size(); ++i) {
    const std::vector<std::size_t> set = subsets[i];
    std::optional<std::size_t> fin;
    for (std::size_t q : set)
      if (m.final[q]) {
        if (fin) fail(ErrorCode::NotUnambiguous, "subset " + subset_name(m, set) + " holds two accepting states");
        fin = q;
      }
    if (fin) out.final[i] = renamed(*m.final[*fin], *fin);
    for (Symbol a = 0; a < k; ++a) {
      std::map<std::size_t, const Transition*> into;
      for (std::size_t p : set)
        for (const Transition* t : by_tag[p][a]) {
          if (into.count(t->to))
            fail(ErrorCode::NotUnambiguous, "state " + m.states[t->to] + " has two predecessors on one tag");
          into[t->to] = t;
        }
      if (into.empty()) continue;
      std::vector<std::size_t> target;
      Update u(nr, c ? Expr::constant(c) : Expr());
      for (auto [q, t] : into) {
        target.push_back(q);
        for (std::size_t x = 0; x < nx; ++x) u[q * nx + x] = renamed(t->update[x], t->from);
      }
      std::size_t j = intern(target);
      out.transitions.push_back({i, static_cast<int>(a), std::move(u), j});
    }
  }
  return trim(out);
}

Cra unary_to_copyless(const Cra& input) {
  if (!input.registry->unary_only())
    fail(ErrorCode::NonUnaryOperation, "unary_to_copyless needs a registry of constants and unary operations");
  Cra m = trim(eliminate_epsilon(input));
  const std::size_t nx = m.num_registers();
  const std::size_t bottom = nx;
  OpRef c = m.registry->first_constant();

  // the register a unary chain bottoms out at, or bottom for constants and val
  auto leaf = [bottom](const Expr& e) -> std::size_t {
    const Expr* cur = &e;
    while (cur->kind() == Expr::Kind::Apply) {
      if (cur->args().size() != 1) fail(ErrorCode::NonUnaryOperation, "operation of arity " + std::to_string(cur->args().size()));
      cur = &cur->args()[0];
    }
    return cur->kind() == Expr::Kind::Reg ? cur->reg_id() : bottom;
  };
  auto onto_r = [](const Expr& e) { return substitute(e, [](RegId) { return Expr::reg(0); }); };

  Cra out;
  out.alphabet = m.alphabet;
  out.registry = m.registry;
  out.registers = {"r"};
  auto id = [nx](std::size_t q, std::size_t g) { return q * (nx + 1) + g; };
  for (std::size_t q = 0; q < m.num_states(); ++q)
    for (std::size_t g = 0; g <= nx; ++g)
      out.add_state(m.states[q] + "/" + (g == bottom ? std::string("⊥") : m.registers[g]));

  for (std::size_t q = 0; q < m.num_states(); ++q) {
    if (m.init[q]) {
      for (std::size_t x = 0; x < nx; ++x) out.init[id(q, x)] = Update{(*m.init[q])[x]};
      if (c)
        out.init[id(q, bottom)] = Update{Expr::constant(c)};
      else if (nx > 0)
        out.init[id(q, bottom)] = Update{(*m.init[q])[0]};
      else
        fail(ErrorCode::NoConstant, "the registry declares no constant");
    }
    if (m.final[q]) out.final[id(q, leaf(*m.final[q]))] = onto_r(*m.final[q]);
  }
  for (const auto& t : m.transitions) {
    for (std::size_t y = 0; y < nx; ++y) {
      std::size_t g = leaf(t.update[y]);
      out.transitions.push_back({id(t.from, g), t.tag, Update{onto_r(t.update[y])}, id(t.to, y)});
    }
    out.transitions.push_back({id(t.from, bottom), t.tag, Update{Expr::reg(0)}, id(t.to, bottom)});
  }
  return trim(out);
}

Cra product_with_dfa(const Cra& m, const Dfa& d) {
  if (m.alphabet != d.alphabet) fail(ErrorCode::AlphabetMismatch, "product_with_dfa over different alphabets");
  Cra out;
  out.alphabet = m.alphabet;
  out.registers = m.registers;
  out.registry = m.registry;
  std::vector<std::vector<const Transition*>> out_of(m.num_states());
  for (const auto& t : m.transitions) out_of[t.from].push_back(&t);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  auto intern = [&](std::size_t q, std::size_t s) {
    auto it = index.find({q, s});
    if (it != index.end()) return it->second;
    std::size_t i = out.add_state(m.states[q] + "@" + std::to_string(s));
    index.emplace(std::make_pair(q, s), i);
    pairs.emplace_back(q, s);
    return i;
  };
  for (std::size_t q = 0; q < m.num_states(); ++q)
    if (m.init[q]) out.init[intern(q, d.start)] = m.init[q];
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [q, s] = pairs[i];
    if (m.final[q] && d.final[s]) out.final[i] = m.final[q];
    for (const Transition* t : out_of[q]) {
      std::size_t s2 = t->tag == kEpsilon ? s : d.next(s, static_cast<Symbol>(t->tag));
      std::size_t j = intern(t->to, s2);
      out.transitions.push_back({i, t->tag, t->update, j});
    }
  }
  return trim(out);
}

}  // namespace streamcra

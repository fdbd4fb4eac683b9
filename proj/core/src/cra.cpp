#include "streamcra/cra.hpp"

#include <algorithm>
#include <functional>

#include "streamcra/error.hpp"

namespace streamcra {

std::size_t Cra::add_state(std::string name) {
  states.push_back(std::move(name));
  init.emplace_back();
  final.emplace_back();
  return states.size() - 1;
}

bool Cra::has_epsilon() const {
  return std::any_of(transitions.begin(), transitions.end(), [](const Transition& t) { return t.tag == kEpsilon; });
}

Update Cra::identity_update() const {
  Update u;
  for (RegId r = 0; r < registers.size(); ++r) u.push_back(Expr::reg(r));
  return u;
}

namespace {

void require_epsilon_acyclic(const Cra& m) {
  const std::size_t n = m.num_states();
  std::vector<std::vector<std::size_t>> succ(n);
  for (const auto& t : m.transitions)
    if (t.tag == kEpsilon) succ[t.from].push_back(t.to);
  std::vector<int> color(n, 0);
  std::function<void(std::size_t)> dfs = [&](std::size_t q) {
    color[q] = 1;
    for (std::size_t r : succ[q]) {
      if (color[r] == 1) fail(ErrorCode::EpsilonCycle, "ε-cycle through state " + m.states[r]);
      if (color[r] == 0) dfs(r);
    }
    color[q] = 2;
  };
  for (std::size_t q = 0; q < n; ++q)
    if (color[q] == 0) dfs(q);
}

std::vector<bool> reachable(const Cra& m) {
  std::vector<bool> seen(m.num_states(), false);
  std::vector<std::size_t> stack;
  for (std::size_t q = 0; q < m.num_states(); ++q)
    if (m.init[q]) {
      seen[q] = true;
      stack.push_back(q);
    }
  std::vector<std::vector<std::size_t>> succ(m.num_states());
  for (const auto& t : m.transitions) succ[t.from].push_back(t.to);
  while (!stack.empty()) {
    std::size_t q = stack.back();
    stack.pop_back();
    for (std::size_t r : succ[q])
      if (!seen[r]) {
        seen[r] = true;
        stack.push_back(r);
      }
  }
  return seen;
}

std::vector<bool> coreachable(const Cra& m) {
  std::vector<bool> seen(m.num_states(), false);
  std::vector<std::size_t> stack;
  for (std::size_t q = 0; q < m.num_states(); ++q)
    if (m.final[q]) {
      seen[q] = true;
      stack.push_back(q);
    }
  std::vector<std::vector<std::size_t>> pred(m.num_states());
  for (const auto& t : m.transitions) pred[t.to].push_back(t.from);
  while (!stack.empty()) {
    std::size_t q = stack.back();
    stack.pop_back();
    for (std::size_t r : pred[q])
      if (!seen[r]) {
        seen[r] = true;
        stack.push_back(r);
      }
  }
  return seen;
}

std::string tag_name(const Cra& m, int tag) { return tag == kEpsilon ? std::string("ε") : m.alphabet[tag]; }

}  // namespace

Nfa rate(const Cra& m) {
  Nfa n;
  n.alphabet = m.alphabet;
  for (std::size_t q = 0; q < m.num_states(); ++q) n.add_state(m.init[q].has_value(), m.final[q].has_value());
  for (const auto& t : m.transitions) n.add_edge(t.from, t.tag, t.to);
  return n;
}

CraDiagnostics validate(const Cra& m) {
  CraDiagnostics d;
  d.arity_ok = true;
  auto check_expr = [&](const Expr& e, const std::string& where) {
    if (!arity_ok(e)) {
      d.arity_ok = false;
      d.messages.push_back("arity mismatch in " + where);
    }
  };
  for (std::size_t i = 0; i < m.transitions.size(); ++i) {
    const auto& t = m.transitions[i];
    std::string where = "transition " + m.states[t.from] + " -" + tag_name(m, t.tag) + "-> " + m.states[t.to];
    if (t.update.size() != m.num_registers()) {
      d.arity_ok = false;
      d.messages.push_back("update of " + where + " does not cover every register");
      continue;
    }
    for (const auto& e : t.update) check_expr(e, where);
  }
  for (std::size_t q = 0; q < m.num_states(); ++q) {
    if (m.init[q]) {
      if (m.init[q]->size() != m.num_registers()) {
        d.arity_ok = false;
        d.messages.push_back("initialization of " + m.states[q] + " does not cover every register");
      }
      for (const auto& e : *m.init[q]) check_expr(e, "initialization of " + m.states[q]);
    }
    if (m.final[q]) check_expr(*m.final[q], "finalization of " + m.states[q]);
  }
  if (!d.arity_ok) fail(ErrorCode::ArityMismatch, d.messages.front());

  d.epsilon_free = !m.has_epsilon();
  require_epsilon_acyclic(m);

  std::size_t initial_count = 0;
  for (const auto& i : m.init) initial_count += i.has_value();
  d.deterministic = d.epsilon_free && initial_count <= 1;
  {
    std::vector<std::vector<bool>> used(m.num_states(), std::vector<bool>(m.alphabet.size(), false));
    for (const auto& t : m.transitions) {
      if (t.tag == kEpsilon) continue;
      if (used[t.from][t.tag]) d.deterministic = false;
      used[t.from][t.tag] = true;
    }
  }

  d.unambiguous = is_unambiguous(eliminate_epsilon(rate(m)));
  if (!d.unambiguous) d.messages.push_back("some tag word has two accepting runs");

  d.copyless = true;
  for (const auto& t : m.transitions) {
    for (auto [r, count] : register_occurrences(t.update))
      if (count > 1) {
        d.copyless = false;
        d.messages.push_back("register " + m.registers[r] + " is used " + std::to_string(count) +
                             " times in the update of transition " + m.states[t.from] + " -" +
                             tag_name(m, t.tag) + "-> " + m.states[t.to]);
      }
  }
  for (std::size_t q = 0; q < m.num_states(); ++q) {
    if (!m.final[q]) continue;
    for (auto [r, count] : register_occurrences(std::span<const Expr>(&*m.final[q], 1)))
      if (count > 1) {
        d.copyless = false;
        d.messages.push_back("register " + m.registers[r] + " is used " + std::to_string(count) +
                             " times in the finalization of " + m.states[q]);
      }
  }

  auto fwd = reachable(m);
  auto bwd = coreachable(m);
  d.trim = true;
  for (std::size_t q = 0; q < m.num_states(); ++q) {
    if (!fwd[q]) d.messages.push_back("state " + m.states[q] + " is unreachable");
    if (!bwd[q]) d.messages.push_back("state " + m.states[q] + " cannot reach an accepting state");
    if (!fwd[q] || !bwd[q]) d.trim = false;
  }
  return d;
}

Cra trim(const Cra& m) {
  auto fwd = reachable(m);
  auto bwd = coreachable(m);
  Cra out;
  out.alphabet = m.alphabet;
  out.registers = m.registers;
  out.registry = m.registry;
  std::vector<std::size_t> index(m.num_states(), SIZE_MAX);
  for (std::size_t q = 0; q < m.num_states(); ++q) {
    if (!fwd[q] || !bwd[q]) continue;
    index[q] = out.add_state(m.states[q]);
    out.init.back() = m.init[q];
    out.final.back() = m.final[q];
  }
  for (const auto& t : m.transitions)
    if (index[t.from] != SIZE_MAX && index[t.to] != SIZE_MAX)
      out.transitions.push_back({index[t.from], t.tag, t.update, index[t.to]});
  return out;
}

Cra eliminate_epsilon(const Cra& m) {
  if (!m.has_epsilon()) return m;
  require_epsilon_acyclic(m);
  for (const auto& t : m.transitions)
    if (t.tag == kEpsilon)
      for (const auto& e : t.update)
        if (e.uses_val())
          fail(ErrorCode::PreconditionViolation,
               "val on ε-transition " + m.states[t.from] + " -> " + m.states[t.to]);
  const std::size_t n = m.num_states();
  std::vector<std::vector<const Transition*>> eps_out(n), letter_out(n);
  for (const auto& t : m.transitions) (t.tag == kEpsilon ? eps_out : letter_out)[t.from].push_back(&t);

  // every ε-path from q, as (end state, composed update over the registers at q)
  std::vector<std::vector<std::pair<std::size_t, Update>>> paths(n);
  std::function<void(std::size_t, std::size_t, const Update&)> walk = [&](std::size_t origin, std::size_t q,
                                                                           const Update& comp) {
    paths[origin].emplace_back(q, comp);
    for (const Transition* t : eps_out[q]) {
      Update next;
      for (const auto& e : t->update) next.push_back(substitute(e, comp));
      walk(origin, t->to, next);
    }
  };
  const Update id = m.identity_update();
  for (std::size_t q = 0; q < n; ++q) walk(q, q, id);

  Cra out;
  out.alphabet = m.alphabet;
  out.registers = m.registers;
  out.registry = m.registry;
  out.states = m.states;
  out.init = m.init;
  out.final.assign(n, std::nullopt);
  std::vector<std::vector<Expr>> finals(n);
  for (std::size_t q = 0; q < n; ++q)
    for (const auto& [s, comp] : paths[q]) {
      for (const Transition* t : letter_out[s]) {
        Update u;
        for (const auto& e : t->update) u.push_back(substitute(e, comp));
        out.transitions.push_back({q, t->tag, std::move(u), t->to});
      }
      if (m.final[s]) finals[q].push_back(substitute(*m.final[s], comp));
    }
  const std::size_t base_transitions = out.transitions.size();
  for (std::size_t q = 0; q < n; ++q) {
    if (finals[q].empty()) continue;
    out.final[q] = finals[q][0];
    // each further accepting ε-path gets its own accepting copy of q
    for (std::size_t k = 1; k < finals[q].size(); ++k) {
      std::size_t c = out.add_state(m.states[q] + "~" + std::to_string(k));
      out.init[c] = m.init[q];
      out.final[c] = finals[q][k];
      for (std::size_t i = 0; i < base_transitions; ++i)
        if (out.transitions[i].to == q) {
          Transition t = out.transitions[i];
          t.to = c;
          out.transitions.push_back(std::move(t));
        }
    }
  }
  return out;
}

StreamEvaluator::StreamEvaluator(const Cra& m, bool check) : m_(&m) {
  if (check) {
    if (m.has_epsilon()) fail(ErrorCode::PreconditionViolation, "streaming evaluation needs an ε-free machine");
    CraDiagnostics d = validate(m);
    if (!d.trim) fail(ErrorCode::PreconditionViolation, "streaming evaluation needs a trim machine");
    if (!d.unambiguous) fail(ErrorCode::PreconditionViolation, "streaming evaluation needs an unambiguous machine");
  }
  const std::size_t k = m.alphabet.size();
  by_state_tag_.assign(m.num_states() * k, {});
  for (std::size_t i = 0; i < m.transitions.size(); ++i) {
    const auto& t = m.transitions[i];
    if (t.tag == kEpsilon) fail(ErrorCode::PreconditionViolation, "streaming evaluation needs an ε-free machine");
    by_state_tag_[t.from * k + t.tag].push_back(i);
  }
  reset();
}

void StreamEvaluator::reset() {
  stats_ = {};
  tokens_.assign(m_->num_states(), std::nullopt);
  for (std::size_t q = 0; q < m_->num_states(); ++q) {
    if (!m_->init[q]) continue;
    Valuation env;
    for (const auto& e : *m_->init[q]) env.push_back(eval_expr(e, {}, nullptr, &stats_.op_applications));
    tokens_[q] = std::move(env);
  }
  note_tokens();
}

std::size_t StreamEvaluator::live_tokens() const {
  return static_cast<std::size_t>(std::count_if(tokens_.begin(), tokens_.end(), [](const auto& t) { return t.has_value(); }));
}

void StreamEvaluator::note_tokens() {
  std::size_t live = live_tokens();
  stats_.max_live_tokens = std::max(stats_.max_live_tokens, live);
  stats_.max_stored_values = std::max(stats_.max_stored_values, live * m_->num_registers());
}

void StreamEvaluator::push(Symbol tag, const Value& value) {
  const std::size_t k = m_->alphabet.size();
  if (tag >= k) fail(ErrorCode::TagOutOfAlphabet, "tag index " + std::to_string(tag) + " outside the alphabet");
  std::vector<std::optional<Valuation>> next(m_->num_states());
  for (std::size_t q = 0; q < tokens_.size(); ++q) {
    if (!tokens_[q]) continue;
    for (std::size_t i : by_state_tag_[q * k + tag]) {
      const auto& t = m_->transitions[i];
      if (next[t.to]) fail(ErrorCode::AmbiguityDetected, "two tokens reached state " + m_->states[t.to]);
      Valuation env;
      env.reserve(t.update.size());
      for (const auto& e : t.update) env.push_back(eval_expr(e, *tokens_[q], &value, &stats_.op_applications));
      next[t.to] = std::move(env);
    }
  }
  tokens_ = std::move(next);
  ++stats_.items;
  note_tokens();
}

std::optional<Value> StreamEvaluator::result() const {
  std::optional<std::size_t> hit;
  for (std::size_t q = 0; q < tokens_.size(); ++q) {
    if (!tokens_[q] || !m_->final[q]) continue;
    if (hit) fail(ErrorCode::AmbiguityDetected, "two tokens on accepting states");
    hit = q;
  }
  if (!hit) return std::nullopt;
  return eval_expr(*m_->final[*hit], *tokens_[*hit], nullptr, &stats_.op_applications);
}

std::optional<Value> eval_stream(const Cra& m, const DataWord& w, EvalStats* stats) {
  StreamEvaluator ev(m);
  for (const auto& item : w) ev.push(item.tag, item.value);
  auto out = ev.result();
  if (stats) *stats = ev.stats();
  return out;
}

std::vector<Value> eval_paths_oracle(const Cra& m, const DataWord& w, std::size_t bound) {
  if (w.size() > bound)
    fail(ErrorCode::BoundExceeded, "word length " + std::to_string(w.size()) + " exceeds bound " + std::to_string(bound));
  require_epsilon_acyclic(m);
  std::vector<std::vector<const Transition*>> out_of(m.num_states());
  for (const auto& t : m.transitions) out_of[t.from].push_back(&t);
  std::vector<Value> values;
  std::function<void(std::size_t, const Valuation&, std::size_t)> go = [&](std::size_t q, const Valuation& env,
                                                                           std::size_t pos) {
    if (pos == w.size() && m.final[q]) values.push_back(eval_expr(*m.final[q], env, nullptr));
    for (const Transition* t : out_of[q]) {
      const Value* cur = nullptr;
      std::size_t next_pos = pos;
      if (t->tag != kEpsilon) {
        if (pos == w.size() || static_cast<Symbol>(t->tag) != w[pos].tag) continue;
        cur = &w[pos].value;
        next_pos = pos + 1;
      }
      Valuation env2;
      for (const auto& e : t->update) env2.push_back(eval_expr(e, env, cur));
      go(t->to, env2, next_pos);
    }
  };
  for (std::size_t q = 0; q < m.num_states(); ++q) {
    if (!m.init[q]) continue;
    Valuation env;
    for (const auto& e : *m.init[q]) env.push_back(eval_expr(e, {}, nullptr));
    go(q, env, 0);
  }
  return values;
}

}  // namespace streamcra

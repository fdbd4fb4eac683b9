#include "streamcra/combinators.hpp"

#include <cctype>
#include <map>
#include <tuple>

#include "streamcra/error.hpp"

namespace streamcra {

namespace {

QueryRef make(Query q) { return std::make_shared<const Query>(std::move(q)); }

void require_arity(const OpRef& op, std::size_t n, const char* who) {
  if (op->arity != n)
    fail(ErrorCode::ArityMismatch, std::string(who) + " needs an operation of arity " + std::to_string(n) + ", '" +
                                       op->name + "' has arity " + std::to_string(op->arity));
}

void require_closed(const Expr& e, const char* who) {
  if (!e.is_closed()) fail(ErrorCode::PreconditionViolation, std::string(who) + " needs a closed expression");
}

}  // namespace

QueryRef q_eps(Expr c) {
  require_closed(c, "eps");
  Query q;
  q.kind = Query::Kind::Eps;
  q.expr = std::move(c);
  return make(std::move(q));
}

QueryRef q_item(std::vector<Symbol> tags, Expr e) {
  if (e.uses_regs()) fail(ErrorCode::PreconditionViolation, "item expressions may use only val and constants");
  std::sort(tags.begin(), tags.end());
  tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
  Query q;
  q.kind = Query::Kind::Item;
  q.tags = std::move(tags);
  q.expr = std::move(e);
  return make(std::move(q));
}

QueryRef q_op(OpRef op, std::vector<QueryRef> kids) {
  require_arity(op, kids.size(), "op");
  Query q;
  q.kind = Query::Kind::Op;
  q.op = std::move(op);
  q.kids = std::move(kids);
  return make(std::move(q));
}

QueryRef q_else(QueryRef f, QueryRef g) {
  Query q;
  q.kind = Query::Kind::Else;
  q.kids = {std::move(f), std::move(g)};
  return make(std::move(q));
}

QueryRef q_split(QueryRef f, QueryRef g, OpRef op) {
  require_arity(op, 2, "split");
  Query q;
  q.kind = Query::Kind::Split;
  q.op = std::move(op);
  q.kids = {std::move(f), std::move(g)};
  return make(std::move(q));
}

QueryRef q_iter(QueryRef f, Expr c, OpRef op) {
  require_arity(op, 2, "iter");
  require_closed(c, "iter");
  Query q;
  q.kind = Query::Kind::Iter;
  q.expr = std::move(c);
  q.op = std::move(op);
  q.kids = {std::move(f)};
  return make(std::move(q));
}

QueryRef q_prefixsum(QueryRef f, Expr c, OpRef op) {
  require_arity(op, 2, "prefixsum");
  require_closed(c, "prefixsum");
  Query q;
  q.kind = Query::Kind::PrefixSum;
  q.expr = std::move(c);
  q.op = std::move(op);
  q.kids = {std::move(f)};
  return make(std::move(q));
}

// ---------------------------------------------------------------- parsing

namespace {

class QueryParser {
 public:
  QueryParser(std::string_view text, const Alphabet& alphabet, const OperationRegistry& reg)
      : s_(text), alphabet_(alphabet), reg_(reg) {}

  QueryRef parse() {
    QueryRef q = query();
    skip();
    if (pos_ != s_.size()) error("trailing input");
    return q;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorCode::ParseError, "query: " + msg + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != c) error(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  std::string word() {
    skip();
    std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-'))
      ++pos_;
    if (b == pos_) error("expected a keyword");
    return std::string(s_.substr(b, pos_ - b));
  }
  // text up to the next top-level ';' or ')'
  std::string raw() {
    skip();
    std::size_t b = pos_;
    int depth = 0;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '(' || c == '[') ++depth;
      if (c == ')' || c == ']') {
        if (depth == 0) break;
        --depth;
      }
      if (c == ';' && depth == 0) break;
      ++pos_;
    }
    if (depth != 0) error("unbalanced brackets");
    std::string out(s_.substr(b, pos_ - b));
    while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
    if (out.empty()) error("empty argument");
    return out;
  }
  Expr expr() { return parse_expr(raw(), reg_, {}); }
  OpRef op() { return reg_.lookup(raw()); }

  QueryRef query() {
    std::string kw = word();
    expect('(');
    QueryRef out;
    if (kw == "eps") {
      out = q_eps(expr());
    } else if (kw == "item") {
      expect('[');
      std::vector<Symbol> tags;
      while (true) {
        skip();
        if (peek(']')) break;
        std::size_t b = pos_;
        while (pos_ < s_.size() && s_[pos_] != ']' && s_[pos_] != ',' &&
               !std::isspace(static_cast<unsigned char>(s_[pos_])))
          ++pos_;
        if (b == pos_) error("bad tag list");
        tags.push_back(symbol_of(alphabet_, s_.substr(b, pos_ - b)));
        if (peek(',')) ++pos_;
      }
      expect(']');
      expect(',');
      out = q_item(std::move(tags), expr());
    } else if (kw == "op") {
      OpRef o = op();
      std::vector<QueryRef> kids;
      while (peek(';')) {
        ++pos_;
        kids.push_back(query());
      }
      out = q_op(o, std::move(kids));
    } else if (kw == "else") {
      QueryRef f = query();
      expect(';');
      out = q_else(f, query());
    } else if (kw == "split") {
      QueryRef f = query();
      expect(';');
      QueryRef g = query();
      expect(';');
      out = q_split(f, g, op());
    } else if (kw == "iter" || kw == "prefixsum") {
      QueryRef f = query();
      expect(';');
      Expr c = expr();
      expect(';');
      OpRef o = op();
      out = kw == "iter" ? q_iter(f, c, o) : q_prefixsum(f, c, o);
    } else {
      error("unknown combinator '" + kw + "'");
    }
    expect(')');
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  const Alphabet& alphabet_;
  const OperationRegistry& reg_;
};

}  // namespace

QueryRef parse_query(std::string_view text, const Alphabet& alphabet, const OperationRegistry& reg) {
  return QueryParser(text, alphabet, reg).parse();
}

std::string format_query(const Query& q, const Alphabet& alphabet) {
  auto sub = [&](std::size_t i) { return format_query(*q.kids[i], alphabet); };
  switch (q.kind) {
    case Query::Kind::Eps:
      return "eps(" + format_expr(q.expr, {}) + ")";
    case Query::Kind::Item: {
      std::string s = "item([";
      for (std::size_t i = 0; i < q.tags.size(); ++i) s += (i ? " " : "") + alphabet[q.tags[i]];
      return s + "], " + format_expr(q.expr, {}) + ")";
    }
    case Query::Kind::Op: {
      std::string s = "op(" + q.op->name;
      for (std::size_t i = 0; i < q.kids.size(); ++i) s += "; " + sub(i);
      return s + ")";
    }
    case Query::Kind::Else:
      return "else(" + sub(0) + "; " + sub(1) + ")";
    case Query::Kind::Split:
      return "split(" + sub(0) + "; " + sub(1) + "; " + q.op->name + ")";
    case Query::Kind::Iter:
      return "iter(" + sub(0) + "; " + format_expr(q.expr, {}) + "; " + q.op->name + ")";
    case Query::Kind::PrefixSum:
      return "prefixsum(" + sub(0) + "; " + format_expr(q.expr, {}) + "; " + q.op->name + ")";
  }
  return {};
}

// ---------------------------------------------------------------- rates

Dfa query_rate(const QueryRef& q, const Alphabet& alphabet) {
  switch (q->kind) {
    case Query::Kind::Eps:
      return epsilon_dfa(alphabet);
    case Query::Kind::Item: {
      Regex r = Regex::empty();
      for (Symbol a : q->tags) r = Regex::alt(r, Regex::lit(a));
      return regex_to_dfa(r, alphabet);
    }
    case Query::Kind::Op: {
      Dfa d = universal_dfa(alphabet);
      for (const auto& k : q->kids) d = intersect(d, query_rate(k, alphabet));
      return minimize(d);
    }
    case Query::Kind::Else:
      return minimize(unite(query_rate(q->kids[0], alphabet), query_rate(q->kids[1], alphabet)));
    case Query::Kind::Split:
      return unamb_concat_dfa(query_rate(q->kids[0], alphabet), query_rate(q->kids[1], alphabet));
    case Query::Kind::Iter:
      return unamb_iter_dfa(query_rate(q->kids[0], alphabet));
    case Query::Kind::PrefixSum:
      return universal_dfa(alphabet);
  }
  return empty_dfa(alphabet);
}

Dfa query_rate(const QueryProgram& p) { return query_rate(p.root, p.alphabet); }

// ---------------------------------------------------------------- oracle

namespace {

class Oracle {
 public:
  Oracle(const QueryProgram& p, const DataWord& w) : p_(p), w_(w) {}

  std::optional<Value> eval(const Query& q, std::size_t i, std::size_t j) {
    auto key = std::make_tuple(&q, i, j);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    auto v = compute(q, i, j);
    memo_.emplace(key, v);
    return v;
  }

 private:
  std::optional<Value> compute(const Query& q, std::size_t i, std::size_t j) {
    switch (q.kind) {
      case Query::Kind::Eps:
        if (i != j) return std::nullopt;
        return eval_expr(q.expr, {}, nullptr);
      case Query::Kind::Item:
        if (j != i + 1 || !std::binary_search(q.tags.begin(), q.tags.end(), w_[i].tag)) return std::nullopt;
        return eval_expr(q.expr, {}, &w_[i].value);
      case Query::Kind::Op: {
        std::vector<Value> args;
        for (const auto& k : q.kids) {
          auto v = eval(*k, i, j);
          if (!v) return std::nullopt;
          args.push_back(*v);
        }
        return q.op->eval(args);
      }
      case Query::Kind::Else: {
        auto v = eval(*q.kids[0], i, j);
        return v ? v : eval(*q.kids[1], i, j);
      }
      case Query::Kind::Split: {
        std::optional<std::pair<Value, Value>> found;
        int cuts = 0;
        for (std::size_t m = i; m <= j; ++m) {
          auto u = eval(*q.kids[0], i, m);
          if (!u) continue;
          auto v = eval(*q.kids[1], m, j);
          if (!v) continue;
          ++cuts;
          found = std::make_pair(*u, *v);
        }
        if (cuts != 1) return std::nullopt;
        Value args[2] = {found->first, found->second};
        return q.op->eval(args);
      }
      case Query::Kind::Iter: {
        const Query& f = *q.kids[0];
        // ε ∈ R(f) allows padding with empty blocks, so no decomposition is unique
        if (eval(f, i, i)) return std::nullopt;
        std::vector<int> count(j - i + 1, 0);
        count[0] = 1;
        for (std::size_t b = i + 1; b <= j; ++b)
          for (std::size_t a = i; a < b; ++a)
            if (count[a - i] && eval(f, a, b)) count[b - i] = std::min(2, count[b - i] + count[a - i]);
        if (count[j - i] != 1) return std::nullopt;
        std::vector<std::pair<std::size_t, std::size_t>> blocks;
        for (std::size_t b = j; b > i;) {
          std::size_t a = i;
          for (std::size_t c = i; c < b; ++c)
            if (count[c - i] && eval(f, c, b)) a = c;
          blocks.emplace_back(a, b);
          b = a;
        }
        Value acc = eval_expr(q.expr, {}, nullptr);
        for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
          Value args[2] = {acc, *eval(f, it->first, it->second)};
          acc = q.op->eval(args);
        }
        return acc;
      }
      case Query::Kind::PrefixSum: {
        const Query& f = *q.kids[0];
        check_total(q);
        Value acc = eval_expr(q.expr, {}, nullptr);
        for (std::size_t m = i; m <= j; ++m) {
          auto v = eval(f, i, m);
          if (!v) fail(ErrorCode::PrefixSumOnPartial, "prefixsum body undefined on a prefix");
          Value args[2] = {acc, *v};
          acc = q.op->eval(args);
        }
        return acc;
      }
    }
    return std::nullopt;
  }

  void check_total(const Query& q) {
    if (checked_.count(&q)) return;
    QueryRef body = q.kids[0];
    if (!language_equal(query_rate(body, p_.alphabet), universal_dfa(p_.alphabet)))
      fail(ErrorCode::PrefixSumOnPartial, "prefixsum needs a total body");
    checked_[&q] = true;
  }

  const QueryProgram& p_;
  const DataWord& w_;
  std::map<std::tuple<const Query*, std::size_t, std::size_t>, std::optional<Value>> memo_;
  std::map<const Query*, bool> checked_;
};

}  // namespace

std::optional<Value> oracle_eval(const QueryProgram& p, const DataWord& w, std::size_t bound) {
  if (w.size() > bound)
    fail(ErrorCode::BoundExceeded, "word length " + std::to_string(w.size()) + " exceeds bound " + std::to_string(bound));
  return Oracle(p, w).eval(*p.root, 0, w.size());
}

// ---------------------------------------------------------------- compilation

namespace {

Expr shifted(const Expr& e, RegId offset) {
  if (offset == 0) return e;
  return substitute(e, [offset](RegId r) { return Expr::reg(r + offset); });
}

class Compiler {
 public:
  Compiler(const QueryProgram& p, std::vector<std::string>* warnings) : p_(p), warnings_(warnings) {}

  Cra run(const QueryRef& q) {
    Cra m = step(*q);
    return trim(eliminate_epsilon(m));
  }

 private:
  Expr filler() {
    OpRef c = p_.registry->first_constant();
    if (!c) fail(ErrorCode::NoConstant, "compilation needs a constant in the registry");
    return Expr::constant(c);
  }

  Cra blank() const {
    Cra m;
    m.alphabet = p_.alphabet;
    m.registry = p_.registry;
    return m;
  }

  Cra step(const Query& q) {
    switch (q.kind) {
      case Query::Kind::Eps: {
        Cra m = blank();
        std::size_t s = m.add_state("e");
        m.init[s] = Update{};
        m.final[s] = q.expr;
        return m;
      }
      case Query::Kind::Item: {
        Cra m = blank();
        m.registers = {"v"};
        std::size_t s0 = m.add_state("i0");
        std::size_t s1 = m.add_state("i1");
        m.init[s0] = Update{filler()};
        m.final[s1] = Expr::reg(0);
        for (Symbol a : q.tags) m.transitions.push_back({s0, static_cast<int>(a), Update{q.expr}, s1});
        return trim(m);
      }
      case Query::Kind::Op:
        return combine(q);
      case Query::Kind::Else:
        return choice(q);
      case Query::Kind::Split:
        return split(q);
      case Query::Kind::Iter:
        return iter(q);
      case Query::Kind::PrefixSum:
        return prefix_sum(q);
    }
    return blank();
  }

  Cra sub(const QueryRef& q) { return trim(eliminate_epsilon(step(*q))); }

  Cra combine(const Query& q) {
    std::vector<Cra> parts;
    for (const auto& k : q.kids) parts.push_back(sub(k));
    Cra m = blank();
    std::vector<RegId> offset;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      offset.push_back(static_cast<RegId>(m.registers.size()));
      for (const auto& r : parts[i].registers) m.registers.push_back(std::to_string(i) + "." + r);
    }
    std::vector<std::vector<std::vector<std::vector<const Transition*>>>> by_tag(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
      by_tag[i].assign(parts[i].num_states(), std::vector<std::vector<const Transition*>>(p_.alphabet.size()));
      for (const auto& t : parts[i].transitions) by_tag[i][t.from][t.tag].push_back(&t);
    }
    using Tuple = std::vector<std::size_t>;
    std::map<Tuple, std::size_t> index;
    std::vector<Tuple> tuples;
    auto intern = [&](const Tuple& t) {
      auto it = index.find(t);
      if (it != index.end()) return it->second;
      std::string name = "(";
      for (std::size_t i = 0; i < t.size(); ++i) name += (i ? "," : "") + parts[i].states[t[i]];
      std::size_t id = m.add_state(name + ")");
      index.emplace(t, id);
      tuples.push_back(t);
      return id;
    };
    // initial tuples
    std::vector<Tuple> starts{Tuple{}};
    for (const auto& part : parts) {
      std::vector<Tuple> next;
      for (const auto& t : starts)
        for (std::size_t s = 0; s < part.num_states(); ++s)
          if (part.init[s]) {
            Tuple u = t;
            u.push_back(s);
            next.push_back(u);
          }
      starts = std::move(next);
    }
    for (const auto& t : starts) {
      Update u;
      for (std::size_t i = 0; i < parts.size(); ++i)
        for (const auto& e : *parts[i].init[t[i]]) u.push_back(e);
      m.init[intern(t)] = std::move(u);
    }
    for (std::size_t n = 0; n < tuples.size(); ++n) {
      const Tuple cur = tuples[n];
      bool all_final = true;
      std::vector<Expr> outs;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (!parts[i].final[cur[i]]) {
          all_final = false;
          break;
        }
        outs.push_back(shifted(*parts[i].final[cur[i]], offset[i]));
      }
      if (all_final) m.final[n] = Expr::apply(q.op, outs);
      for (Symbol a = 0; a < p_.alphabet.size(); ++a) {
        std::vector<std::pair<Tuple, Update>> partial{{Tuple{}, Update{}}};
        for (std::size_t i = 0; i < parts.size() && !partial.empty(); ++i) {
          std::vector<std::pair<Tuple, Update>> next;
          for (const auto& [t, u] : partial)
            for (const Transition* tr : by_tag[i][cur[i]][a]) {
              Tuple t2 = t;
              t2.push_back(tr->to);
              Update u2 = u;
              for (const auto& e : tr->update) u2.push_back(shifted(e, offset[i]));
              next.emplace_back(std::move(t2), std::move(u2));
            }
          partial = std::move(next);
        }
        for (auto& [t, u] : partial) {
          std::size_t to = intern(t);
          m.transitions.push_back({n, static_cast<int>(a), std::move(u), to});
        }
      }
    }
    return trim(m);
  }

  // Copies `src` into `dst` with state names prefixed; registers keep their
  // indices and the remaining ones are padded (identity in updates).
  std::size_t embed(Cra& dst, const Cra& src, const std::string& prefix) {
    std::size_t base = dst.num_states();
    const std::size_t nr = dst.num_registers();
    for (std::size_t s = 0; s < src.num_states(); ++s) {
      std::size_t id = dst.add_state(prefix + src.states[s]);
      if (src.init[s]) {
        Update u = *src.init[s];
        while (u.size() < nr) u.push_back(filler());
        dst.init[id] = std::move(u);
      }
      dst.final[id] = src.final[s];
    }
    for (const auto& t : src.transitions) {
      Update u = t.update;
      for (RegId r = static_cast<RegId>(u.size()); r < nr; ++r) u.push_back(Expr::reg(r));
      dst.transitions.push_back({base + t.from, t.tag, std::move(u), base + t.to});
    }
    return base;
  }

  Cra choice(const Query& q) {
    Cra f = sub(q.kids[0]);
    Cra g = sub(q.kids[1]);
    Dfa not_f = complement(minimize(determinize(rate(f))));
    g = product_with_dfa(g, not_f);
    Cra m = blank();
    const std::size_t n = std::max(f.num_registers(), g.num_registers());
    for (std::size_t r = 0; r < n; ++r) m.registers.push_back("r" + std::to_string(r));
    embed(m, f, "f.");
    embed(m, g, "g.");
    return m;
  }

  Cra split(const Query& q) {
    Cra f = sub(q.kids[0]);
    Cra g = sub(q.kids[1]);
    const RegId nf = static_cast<RegId>(f.num_registers());
    const RegId ng = static_cast<RegId>(g.num_registers());
    const RegId z = nf + ng;
    Cra m = blank();
    for (const auto& r : f.registers) m.registers.push_back("f." + r);
    for (const auto& r : g.registers) m.registers.push_back("g." + r);
    m.registers.push_back("z");
    const std::size_t nr = m.num_registers();
    std::size_t fb = 0, gb = f.num_states();
    for (std::size_t s = 0; s < f.num_states(); ++s) {
      std::size_t id = m.add_state("f." + f.states[s]);
      if (f.init[s]) {
        Update u = *f.init[s];
        while (u.size() < nr) u.push_back(filler());
        m.init[id] = std::move(u);
      }
    }
    for (std::size_t s = 0; s < g.num_states(); ++s) {
      std::size_t id = m.add_state("g." + g.states[s]);
      if (g.final[s]) {
        Expr args[2] = {Expr::reg(z), shifted(*g.final[s], nf)};
        m.final[id] = Expr::apply(q.op, {args[0], args[1]});
      }
    }
    for (const auto& t : f.transitions) {
      Update u = t.update;
      for (RegId r = nf; r < nr; ++r) u.push_back(Expr::reg(r));
      m.transitions.push_back({fb + t.from, t.tag, std::move(u), fb + t.to});
    }
    for (const auto& t : g.transitions) {
      Update u;
      for (RegId r = 0; r < nf; ++r) u.push_back(Expr::reg(r));
      for (const auto& e : t.update) u.push_back(shifted(e, nf));
      u.push_back(Expr::reg(z));
      m.transitions.push_back({gb + t.from, t.tag, std::move(u), gb + t.to});
    }
    for (std::size_t p = 0; p < f.num_states(); ++p) {
      if (!f.final[p]) continue;
      for (std::size_t s = 0; s < g.num_states(); ++s) {
        if (!g.init[s]) continue;
        Update u;
        for (RegId r = 0; r < nf; ++r) u.push_back(filler());
        for (const auto& e : *g.init[s]) u.push_back(e);
        u.push_back(*f.final[p]);
        m.transitions.push_back({fb + p, kEpsilon, std::move(u), gb + s});
      }
    }
    Dfa once = unamb_concat_dfa(minimize(determinize(rate(f))), minimize(determinize(rate(g))));
    return product_with_dfa(eliminate_epsilon(m), once);
  }

  Cra iter(const Query& q) {
    Cra f = sub(q.kids[0]);
    Dfa rf = minimize(determinize(rate(f)));
    if (rf.final[rf.start]) {
      if (warnings_)
        warnings_->push_back("iter body accepts the empty word; no decomposition is unique, the result is empty");
      return blank();
    }
    const RegId nf = static_cast<RegId>(f.num_registers());
    const RegId y = nf;
    Cra m = blank();
    m.registers = f.registers;
    m.registers.push_back("y");
    const std::size_t hub = m.add_state("hub");
    Update hub_init;
    for (RegId r = 0; r < nf; ++r) hub_init.push_back(filler());
    hub_init.push_back(q.expr);
    m.init[hub] = std::move(hub_init);
    m.final[hub] = Expr::reg(y);
    const std::size_t base = m.num_states();
    for (const auto& s : f.states) m.add_state("f." + s);
    for (const auto& t : f.transitions) {
      Update u = t.update;
      u.push_back(Expr::reg(y));
      m.transitions.push_back({base + t.from, t.tag, std::move(u), base + t.to});
    }
    for (std::size_t s = 0; s < f.num_states(); ++s) {
      if (f.init[s]) {
        Update u = *f.init[s];
        u.push_back(Expr::reg(y));
        m.transitions.push_back({hub, kEpsilon, std::move(u), base + s});
      }
      if (f.final[s]) {
        Update u;
        for (RegId r = 0; r < nf; ++r) u.push_back(filler());
        u.push_back(Expr::apply(q.op, {Expr::reg(y), *f.final[s]}));
        m.transitions.push_back({base + s, kEpsilon, std::move(u), hub});
      }
    }
    return product_with_dfa(eliminate_epsilon(m), unamb_iter_dfa(rf));
  }

  Cra prefix_sum(const Query& q) {
    Cra f = sub(q.kids[0]);
    if (!language_equal(minimize(determinize(rate(f))), universal_dfa(p_.alphabet)))
      fail(ErrorCode::PrefixSumOnPartial, "prefixsum needs a body defined on every tag word");
    Cra d = ucra_to_dcra(f);
    const RegId nd = static_cast<RegId>(d.num_registers());
    Cra m = blank();
    m.registers = d.registers;
    m.registers.push_back("total");
    const RegId total = nd;
    for (std::size_t s = 0; s < d.num_states(); ++s) {
      m.add_state(d.states[s]);
      if (!d.final[s]) fail(ErrorCode::PrefixSumOnPartial, "prefixsum body has a non-accepting state");
      m.final[s] = Expr::reg(total);
      if (d.init[s]) {
        Update u = *d.init[s];
        Expr first = substitute(*d.final[s], std::span<const Expr>(*d.init[s]));
        u.push_back(Expr::apply(q.op, {q.expr, first}));
        m.init[s] = std::move(u);
      }
    }
    for (const auto& t : d.transitions) {
      Update u = t.update;
      Expr out = substitute(*d.final[t.to], std::span<const Expr>(t.update));
      u.push_back(Expr::apply(q.op, {Expr::reg(total), out}));
      m.transitions.push_back({t.from, t.tag, std::move(u), t.to});
    }
    return m;
  }

  const QueryProgram& p_;
  std::vector<std::string>* warnings_;
};

}  // namespace

Cra compile(const QueryProgram& p, std::vector<std::string>* warnings) {
  return Compiler(p, warnings).run(p.root);
}

bool copyless_report(const QueryProgram& p) { return validate(compile(p)).copyless; }

}  // namespace streamcra

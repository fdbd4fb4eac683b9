#include <algorithm>
#include <cctype>

#include "streamcra/automata.hpp"
#include "streamcra/error.hpp"

namespace streamcra {

Symbol symbol_of(const Alphabet& alphabet, std::string_view tag) {
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == tag) return static_cast<Symbol>(i);
  fail(ErrorCode::TagOutOfAlphabet, "tag '" + std::string(tag) + "' not in alphabet");
}

Word word_of(const Alphabet& alphabet, const std::vector<std::string>& tags) {
  Word w;
  w.reserve(tags.size());
  for (const auto& t : tags) w.push_back(symbol_of(alphabet, t));
  return w;
}

std::string format_word(const Alphabet& alphabet, const Word& w) {
  if (w.empty()) return "ε";
  std::string s;
  bool multi = std::any_of(alphabet.begin(), alphabet.end(), [](const std::string& a) { return a.size() != 1; });
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (multi && i) s += ' ';
    s += alphabet[w[i]];
  }
  return s;
}

Regex Regex::empty() { return Regex{}; }

Regex Regex::eps() {
  Regex r;
  r.kind = Kind::Eps;
  return r;
}

Regex Regex::lit(Symbol s) {
  Regex r;
  r.kind = Kind::Lit;
  r.syms = {s};
  return r;
}

Regex Regex::lit_set(std::vector<Symbol> s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.empty()) return empty();
  if (s.size() == 1) return lit(s[0]);
  Regex r;
  r.kind = Kind::LitSet;
  r.syms = std::move(s);
  return r;
}

Regex Regex::any(std::size_t n) {
  std::vector<Symbol> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<Symbol>(i);
  return lit_set(std::move(s));
}

Regex Regex::concat(Regex a, Regex b) {
  if (a.kind == Kind::Empty || b.kind == Kind::Empty) return empty();
  if (a.kind == Kind::Eps) return b;
  if (b.kind == Kind::Eps) return a;
  Regex r;
  r.kind = Kind::Concat;
  r.kids = {std::move(a), std::move(b)};
  return r;
}

Regex Regex::alt(Regex a, Regex b) {
  if (a.kind == Kind::Empty) return b;
  if (b.kind == Kind::Empty) return a;
  if (a == b) return a;
  Regex r;
  r.kind = Kind::Union;
  r.kids = {std::move(a), std::move(b)};
  return r;
}

Regex Regex::star(Regex a) {
  if (a.kind == Kind::Empty || a.kind == Kind::Eps) return eps();
  if (a.kind == Kind::Star) return a;
  if (a.kind == Kind::Plus) a = a.kids[0];
  Regex r;
  r.kind = Kind::Star;
  r.kids = {std::move(a)};
  return r;
}

Regex Regex::plus(Regex a) {
  if (a.kind == Kind::Empty) return empty();
  if (a.kind == Kind::Eps || a.kind == Kind::Star || a.kind == Kind::Plus) return a;
  Regex r;
  r.kind = Kind::Plus;
  r.kids = {std::move(a)};
  return r;
}

namespace {

class RegexParser {
 public:
  RegexParser(std::string_view s, const Alphabet& alphabet) : s_(s), alphabet_(alphabet) {}

  Regex parse() {
    Regex r = alternation();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void error(const std::string& msg) {
    fail(ErrorCode::ParseError, "regex '" + std::string(s_) + "' at " + std::to_string(pos_) + ": " + msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool at_keyword(std::string_view kw) const {
    if (s_.substr(pos_, kw.size()) != kw) return false;
    std::size_t end = pos_ + kw.size();
    return end >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[end]));
  }

  bool starts(std::string_view t) const { return s_.substr(pos_, t.size()) == t; }

  Regex alternation() {
    Regex r = concatenation();
    skip();
    while (pos_ < s_.size() && s_[pos_] == '|') {
      ++pos_;
      r = Regex::alt(std::move(r), concatenation());
      skip();
    }
    return r;
  }

  Regex concatenation() {
    Regex r = Regex::eps();
    for (;;) {
      skip();
      if (pos_ >= s_.size() || s_[pos_] == ')' || s_[pos_] == '|') return r;
      r = Regex::concat(std::move(r), repetition());
    }
  }

  Regex repetition() {
    Regex r = atom();
    for (;;) {
      skip();
      if (pos_ >= s_.size()) return r;
      char c = s_[pos_];
      if (c == '*') r = Regex::star(std::move(r));
      else if (c == '+') r = Regex::plus(std::move(r));
      else if (c == '?') r = Regex::alt(Regex::eps(), std::move(r));
      else return r;
      ++pos_;
    }
  }

  Symbol tag() {
    if (s_[pos_] == '<') {
      std::size_t close = s_.find('>', pos_);
      if (close == std::string_view::npos) error("unterminated '<'");
      std::string name(s_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
      return lookup(name);
    }
    std::string name(1, s_[pos_]);
    ++pos_;
    return lookup(name);
  }

  Symbol lookup(const std::string& name) {
    for (std::size_t i = 0; i < alphabet_.size(); ++i)
      if (alphabet_[i] == name) return static_cast<Symbol>(i);
    error("tag '" + name + "' not in alphabet");
  }

  Regex atom() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Regex r = alternation();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') error("expected ')'");
      ++pos_;
      return r;
    }
    if (c == '[') {
      ++pos_;
      std::vector<Symbol> syms;
      for (;;) {
        skip();
        if (pos_ >= s_.size()) error("unterminated '['");
        if (s_[pos_] == ']') break;
        syms.push_back(tag());
      }
      ++pos_;
      if (syms.empty()) return Regex::empty();
      return Regex::lit_set(std::move(syms));
    }
    if (at_keyword("eps")) {
      pos_ += 3;
      return Regex::eps();
    }
    if (at_keyword("empty")) {
      pos_ += 5;
      return Regex::empty();
    }
    if (starts("ε")) {
      pos_ += std::string_view("ε").size();
      return Regex::eps();
    }
    if (starts("∅")) {
      pos_ += std::string_view("∅").size();
      return Regex::empty();
    }
    if (starts("Σ")) {
      pos_ += std::string_view("Σ").size();
      return Regex::any(alphabet_.size());
    }
    if (c == '.') {
      ++pos_;
      return Regex::any(alphabet_.size());
    }
    if (c == '*' || c == '+' || c == '?' || c == ']' || c == '>') error("misplaced '" + std::string(1, c) + "'");
    return Regex::lit(tag());
  }

  std::string_view s_;
  const Alphabet& alphabet_;
  std::size_t pos_ = 0;
};

std::string tag_text(const Alphabet& alphabet, Symbol s) {
  const std::string& t = alphabet[s];
  static const std::string special = "|*+?()[]<>. ";
  if (t.size() == 1 && special.find(t[0]) == std::string::npos) return t;
  return "<" + t + ">";
}

int regex_prec(const Regex& r) {
  switch (r.kind) {
    case Regex::Kind::Union: return 1;
    case Regex::Kind::Concat: return 2;
    case Regex::Kind::Star:
    case Regex::Kind::Plus: return 3;
    default: return 4;
  }
}

void format_regex_into(const Regex& r, const Alphabet& alphabet, std::string& out) {
  auto sub = [&](const Regex& k, int min_prec) {
    bool paren = regex_prec(k) < min_prec;
    if (paren) out += '(';
    format_regex_into(k, alphabet, out);
    if (paren) out += ')';
  };
  switch (r.kind) {
    case Regex::Kind::Empty: out += "empty"; return;
    case Regex::Kind::Eps: out += "eps"; return;
    case Regex::Kind::Lit: out += tag_text(alphabet, r.syms[0]); return;
    case Regex::Kind::LitSet:
      if (r.syms.size() == alphabet.size()) {
        out += '.';
        return;
      }
      out += '[';
      for (Symbol s : r.syms) out += tag_text(alphabet, s);
      out += ']';
      return;
    case Regex::Kind::Concat:
      sub(r.kids[0], 2);
      if (r.kids[0].kind == Regex::Kind::Eps || r.kids[1].kind == Regex::Kind::Eps) out += ' ';
      sub(r.kids[1], 2);
      return;
    case Regex::Kind::Union:
      sub(r.kids[0], 1);
      out += '|';
      sub(r.kids[1], 1);
      return;
    case Regex::Kind::Star:
      sub(r.kids[0], 4);
      out += '*';
      return;
    case Regex::Kind::Plus:
      sub(r.kids[0], 4);
      out += '+';
      return;
  }
}

struct Fragment {
  std::size_t start, end;
};

Fragment thompson(const Regex& r, Nfa& n) {
  switch (r.kind) {
    case Regex::Kind::Empty: {
      std::size_t s = n.add_state(), e = n.add_state();
      return {s, e};
    }
    case Regex::Kind::Eps: {
      std::size_t s = n.add_state(), e = n.add_state();
      n.add_edge(s, kEpsilon, e);
      return {s, e};
    }
    case Regex::Kind::Lit:
    case Regex::Kind::LitSet: {
      std::size_t s = n.add_state(), e = n.add_state();
      for (Symbol a : r.syms) n.add_edge(s, static_cast<int>(a), e);
      return {s, e};
    }
    case Regex::Kind::Concat: {
      Fragment a = thompson(r.kids[0], n);
      Fragment b = thompson(r.kids[1], n);
      n.add_edge(a.end, kEpsilon, b.start);
      return {a.start, b.end};
    }
    case Regex::Kind::Union: {
      std::size_t s = n.add_state();
      Fragment a = thompson(r.kids[0], n);
      Fragment b = thompson(r.kids[1], n);
      std::size_t e = n.add_state();
      n.add_edge(s, kEpsilon, a.start);
      n.add_edge(s, kEpsilon, b.start);
      n.add_edge(a.end, kEpsilon, e);
      n.add_edge(b.end, kEpsilon, e);
      return {s, e};
    }
    case Regex::Kind::Star:
    case Regex::Kind::Plus: {
      std::size_t s = n.add_state();
      Fragment a = thompson(r.kids[0], n);
      std::size_t e = n.add_state();
      n.add_edge(s, kEpsilon, a.start);
      n.add_edge(a.end, kEpsilon, a.start);
      n.add_edge(a.end, kEpsilon, e);
      if (r.kind == Regex::Kind::Star) n.add_edge(s, kEpsilon, e);
      return {s, e};
    }
  }
  return {0, 0};
}

}  // namespace

Regex parse_regex(std::string_view text, const Alphabet& alphabet) {
  return RegexParser(text, alphabet).parse();
}

std::string format_regex(const Regex& r, const Alphabet& alphabet) {
  std::string out;
  format_regex_into(r, alphabet, out);
  return out;
}

Nfa regex_to_nfa(const Regex& r, const Alphabet& alphabet) {
  Nfa n;
  n.alphabet = alphabet;
  Fragment f = thompson(r, n);
  n.initial[f.start] = true;
  n.final[f.end] = true;
  return n;
}

Dfa regex_to_dfa(const Regex& r, const Alphabet& alphabet) {
  return minimize(determinize(regex_to_nfa(r, alphabet)));
}

Dfa regex_to_dfa(std::string_view text, const Alphabet& alphabet) {
  return regex_to_dfa(parse_regex(text, alphabet), alphabet);
}

Regex dfa_to_regex(const Dfa& d0) {
  Dfa d = minimize(d0);
  const std::size_t n = d.num_states;
  // co-reachable states only; the minimal DFA has at most one dead state
  std::vector<bool> live(n, false);
  bool grew = true;
  for (std::size_t q = 0; q < n; ++q) live[q] = d.final[q];
  while (grew) {
    grew = false;
    for (std::size_t q = 0; q < n; ++q) {
      if (live[q]) continue;
      for (Symbol a = 0; a < d.k(); ++a)
        if (live[d.next(q, a)]) {
          live[q] = true;
          grew = true;
          break;
        }
    }
  }
  if (!live[d.start]) return Regex::empty();
  // generalized automaton: states 0..n-1, S = n, F = n+1
  const std::size_t S = n, F = n + 1, m = n + 2;
  std::vector<std::vector<Regex>> R(m, std::vector<Regex>(m, Regex::empty()));
  for (std::size_t q = 0; q < n; ++q) {
    if (!live[q]) continue;
    std::vector<std::vector<Symbol>> by_target(n);
    for (Symbol a = 0; a < d.k(); ++a)
      if (live[d.next(q, a)]) by_target[d.next(q, a)].push_back(a);
    for (std::size_t t = 0; t < n; ++t)
      if (!by_target[t].empty()) R[q][t] = Regex::lit_set(by_target[t]);
    if (d.final[q]) R[q][F] = Regex::eps();
  }
  R[S][d.start] = Regex::eps();
  std::vector<std::size_t> order;
  for (std::size_t q = n; q-- > 0;)
    if (live[q]) order.push_back(q);
  std::vector<bool> gone(m, false);
  for (std::size_t k : order) {
    Regex loop = Regex::star(R[k][k]);
    for (std::size_t i = 0; i < m; ++i) {
      if (gone[i] || i == k || R[i][k].kind == Regex::Kind::Empty) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (gone[j] || j == k || R[k][j].kind == Regex::Kind::Empty) continue;
        R[i][j] = Regex::alt(R[i][j], Regex::concat(R[i][k], Regex::concat(loop, R[k][j])));
      }
    }
    gone[k] = true;
  }
  return R[S][F];
}

}  // namespace streamcra

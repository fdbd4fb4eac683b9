#include "oracles.hpp"

#include <algorithm>
#include <set>

namespace oracle {

using namespace streamcra;

std::vector<Word> all_words(std::size_t k, std::size_t max_len) {
  std::vector<Word> out{Word{}};
  std::size_t begin = 0;
  for (std::size_t n = 1; n <= max_len; ++n) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (Symbol a = 0; a < k; ++a) {
        Word w = out[i];
        w.push_back(a);
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

std::vector<DataWord> all_data_words(std::size_t k, const std::vector<Value>& values, std::size_t max_len) {
  std::vector<DataWord> out{DataWord{}};
  std::size_t begin = 0;
  for (std::size_t n = 1; n <= max_len; ++n) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (Symbol a = 0; a < k; ++a)
        for (const auto& v : values) {
          DataWord w = out[i];
          w.push_back({a, v});
          out.push_back(std::move(w));
        }
    begin = end;
  }
  return out;
}

std::vector<Value> ints(std::initializer_list<long long> xs) {
  std::vector<Value> out;
  for (long long x : xs) out.push_back(Value::integer(x));
  return out;
}

Word tags(const DataWord& w) {
  Word out;
  for (const auto& it : w) out.push_back(it.tag);
  return out;
}

DataWord data_word(std::initializer_list<std::pair<Symbol, long long>> items) {
  DataWord w;
  for (const auto& [a, v] : items) w.push_back({a, Value::integer(v)});
  return w;
}

namespace {

// End positions reachable by matching r from i.
std::set<std::size_t> ends(const Regex& r, const Word& w, std::size_t i) {
  using K = Regex::Kind;
  switch (r.kind) {
    case K::Empty: return {};
    case K::Eps: return {i};
    case K::Lit:
    case K::LitSet:
      if (i < w.size() && std::find(r.syms.begin(), r.syms.end(), w[i]) != r.syms.end()) return {i + 1};
      return {};
    case K::Concat: {
      std::set<std::size_t> cur{i};
      for (const auto& k : r.kids) {
        std::set<std::size_t> next;
        for (std::size_t j : cur)
          for (std::size_t e : ends(k, w, j)) next.insert(e);
        cur = std::move(next);
      }
      return cur;
    }
    case K::Union: {
      std::set<std::size_t> out;
      for (const auto& k : r.kids)
        for (std::size_t e : ends(k, w, i)) out.insert(e);
      return out;
    }
    case K::Star:
    case K::Plus: {
      std::set<std::size_t> seen, frontier{i};
      if (r.kind == K::Star) seen.insert(i);
      while (!frontier.empty()) {
        std::set<std::size_t> next;
        for (std::size_t j : frontier)
          for (std::size_t e : ends(r.kids[0], w, j))
            if (seen.insert(e).second) next.insert(e);
        frontier = std::move(next);
      }
      return seen;
    }
  }
  return {};
}

}  // namespace

bool matches(const Regex& r, const Word& w) { return ends(r, w, 0).count(w.size()) > 0; }

bool matches(const std::string& regex, const Alphabet& al, const Word& w) {
  return matches(parse_regex(regex, al), w);
}

std::size_t count_splits(const Member& a, const Member& b, const Word& w) {
  std::size_t n = 0;
  for (std::size_t i = 0; i <= w.size(); ++i)
    if (a(Word(w.begin(), w.begin() + i)) && b(Word(w.begin() + i, w.end()))) ++n;
  return n;
}

std::size_t count_decompositions(const Member& a, const Word& w, std::size_t cap) {
  if (a(Word{})) return cap;
  // ways[i]: factorizations of the prefix of length i
  std::vector<std::size_t> ways(w.size() + 1, 0);
  ways[0] = 1;
  for (std::size_t j = 1; j <= w.size(); ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (ways[i] && a(Word(w.begin() + i, w.begin() + j))) ways[j] = std::min(cap, ways[j] + ways[i]);
  return ways[w.size()];
}

Value sum_of_tag(const DataWord& w, Symbol tag) {
  Int s = 0;
  for (const auto& it : w)
    if (it.tag == tag) s += it.value.as_int();
  return Value(s);
}

std::optional<Value> end_letter_sum(const DataWord& w) {
  if (w.empty()) return std::nullopt;
  return sum_of_tag(w, w.back().tag);
}

std::optional<Value> block_max(const DataWord& w) {
  Int best = 0, cur = 0;
  std::size_t run = 0;
  for (const auto& it : w) {
    if (it.tag == 0) {
      cur += it.value.as_int();
      ++run;
    } else {
      if (run == 0) return std::nullopt;
      best = std::max(best, cur);
      cur = 0;
      run = 0;
    }
  }
  if (run != 0) return std::nullopt;
  return Value(best);
}

std::optional<Value> drawdown(const DataWord& w) {
  std::size_t last_b = w.size();
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i].tag == 1) last_b = i;
  if (last_b == w.size()) return std::nullopt;
  Int best = 0;
  for (std::size_t i = last_b + 1; i < w.size(); ++i)
    for (std::size_t j = i; j < w.size(); ++j) best = std::max(best, Int(w[i].value.as_int() - w[j].value.as_int()));
  return Value(best);
}

std::optional<std::string> f_star(const Word& w) {
  std::string out;
  std::size_t len = 0;
  Symbol last = 0;
  for (Symbol a : w) {
    if (a == 2) {
      if (len == 0) return std::nullopt;
      out += std::string(len, last == 0 ? 'a' : 'b') + "#";
      len = 0;
    } else {
      ++len;
      last = a;
    }
  }
  if (len != 0) return std::nullopt;
  return out;
}

Value wa_paths(const WeightedAutomaton& wa, const Word& w) {
  const Semiring& s = wa.semiring;
  const std::size_t n = wa.num_states();
  Value total = s.zero;
  if (n == 0) return total;
  std::vector<std::size_t> seq(w.size() + 1, 0);
  while (true) {
    Value p = wa.init[seq[0]];
    for (std::size_t i = 0; i < w.size(); ++i) p = s.times(p, wa.weight(seq[i], w[i], seq[i + 1]));
    p = s.times(p, wa.final[seq.back()]);
    total = s.plus(total, p);
    std::size_t i = 0;
    while (i < seq.size() && ++seq[i] == n) seq[i++] = 0;
    if (i == seq.size()) break;
  }
  return total;
}

}  // namespace oracle

namespace fixture {

std::string path(const std::string& name) { return std::string(STREAMCRA_FIXTURE_DIR) + "/" + name; }
std::string text(const std::string& name) { return streamcra::read_text_file(path(name)); }
streamcra::Cra cra(const std::string& name) { return streamcra::parse_cra(text(name)); }
streamcra::QueryProgram query(const std::string& name) { return streamcra::parse_query_program(text(name)); }
streamcra::RuleTransduction rules(const std::string& name) { return streamcra::parse_rules(text(name)); }
streamcra::WeightedAutomaton wa(const std::string& name) { return streamcra::parse_wa(text(name)); }
streamcra::MonoidWa monoid_wa(const std::string& name) { return streamcra::parse_monoid_wa(text(name)); }

}  // namespace fixture

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "streamcra/automata.hpp"
#include "streamcra/error.hpp"

using namespace streamcra;

namespace {

const Alphabet kAB = {"A", "B"};
const Alphabet kab = {"a", "b"};

Dfa dfa(const std::string& re, const Alphabet& al = kAB) { return regex_to_dfa(re, al); }

// Accepting runs by explicit path enumeration, ε-edges included.
std::size_t brute_runs(const Nfa& n, const Word& w, std::size_t q, std::size_t i, std::size_t depth = 0) {
  if (depth > 64) return 0;
  std::size_t total = (i == w.size() && n.final[q]) ? 1 : 0;
  for (const auto& e : n.edges) {
    if (e.from != q) continue;
    if (e.sym == kEpsilon)
      total += brute_runs(n, w, e.to, i, depth + 1);
    else if (i < w.size() && static_cast<Symbol>(e.sym) == w[i])
      total += brute_runs(n, w, e.to, i + 1, depth + 1);
  }
  return total;
}

std::size_t brute_runs(const Nfa& n, const Word& w) {
  std::size_t total = 0;
  for (std::size_t q = 0; q < n.num_states; ++q)
    if (n.initial[q]) total += brute_runs(n, w, q, 0);
  return total;
}

void expect_language(const Dfa& d, const std::function<bool(const Word&)>& member, std::size_t max_len,
                     const std::string& what) {
  for (const auto& w : oracle::all_words(d.k(), max_len))
    ASSERT_EQ(d.accepts(w), member(w)) << what << " on " << format_word(d.alphabet, w);
}

}  // namespace

TEST(RegexToDfa, EmptyLanguageIsOneDeadState) {
  Dfa d = dfa("empty");
  EXPECT_EQ(d.num_states, 1u);
  EXPECT_FALSE(d.final[0]);
  EXPECT_TRUE(is_empty(d));
}

TEST(RegexToDfa, BStarAHasThreeStates) {
  Dfa d = dfa("B*A");
  EXPECT_EQ(d.num_states, 3u);
  expect_language(d, [](const Word& w) { return oracle::matches("B*A", kAB, w); }, 4, "B*A");
}

TEST(RegexToDfa, BlockRate) {
  Alphabet al{"a", "#"};
  Dfa d = regex_to_dfa("(a+#)*", al);
  expect_language(
      d,
      [](const Word& w) {
        std::size_t run = 0;
        for (Symbol s : w) {
          if (s == 0)
            ++run;
          else if (run == 0)
            return false;
          else
            run = 0;
        }
        return run == 0;
      },
      7, "(a+#)*");
}

TEST(RegexToDfa, AgreesWithBacktrackingMatcher) {
  for (const char* re : {"(A|B)*A(A|B)", "A?B+|eps", "(AB|BA)*", "[AB]A*B?", ".*AB.*", "(A*B*)*A", "empty|A"})
    expect_language(dfa(re), [&](const Word& w) { return oracle::matches(re, kAB, w); }, 6, re);
}

TEST(BooleanOps, ComplementOfFutureTest) {
  EXPECT_TRUE(language_equal(complement(dfa("B*A.*")), dfa("B*")));
}

TEST(BooleanOps, PastTestIsUniversal) { EXPECT_TRUE(language_equal(dfa("(eps|.*A)B*"), dfa(".*"))); }

TEST(BooleanOps, LanguageAndComplementAreDisjoint) {
  Dfa l = dfa("(AB)*A?");
  EXPECT_TRUE(is_empty(intersect(l, complement(l))));
}

TEST(BooleanOps, AgreeWithMembership) {
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"A*B", "(A|B)B*"}, {".*AA.*", "(AB)*"}, {"eps|A", "B*"}, {"(A|B)*A", "A+|B+"}};
  for (const auto& [x, y] : pairs) {
    Dfa a = dfa(x), b = dfa(y);
    auto ma = [&](const Word& w) { return oracle::matches(x, kAB, w); };
    auto mb = [&](const Word& w) { return oracle::matches(y, kAB, w); };
    expect_language(intersect(a, b), [&](const Word& w) { return ma(w) && mb(w); }, 5, x + " & " + y);
    expect_language(unite(a, b), [&](const Word& w) { return ma(w) || mb(w); }, 5, x + " | " + y);
    expect_language(difference(a, b), [&](const Word& w) { return ma(w) && !mb(w); }, 5, x + " - " + y);
    expect_language(concat(a, b), [&](const Word& w) { return oracle::count_splits(ma, mb, w) > 0; }, 5,
                    x + " . " + y);
    auto ma_plus = [&](const Word& w) { return !w.empty() && ma(w); };
    expect_language(star(a), [&](const Word& w) { return w.empty() || oracle::count_decompositions(ma_plus, w) > 0; }, 5,
                    "(" + x + ")*");
    expect_language(determinize(reverse(to_nfa(a))),
                    [&](const Word& w) { return ma(Word(w.rbegin(), w.rend())); }, 5, "reverse " + x);
    EXPECT_EQ(contains(unite(a, b), a), true);
  }
}

TEST(BooleanOps, MinimizeIsCanonical) {
  EXPECT_EQ(minimize(dfa("(A|B)*")), minimize(dfa("(A*B*)*")));
  EXPECT_EQ(minimize(dfa("A(BA)*")), minimize(dfa("(AB)*A")));
  EXPECT_NE(minimize(dfa("A(BA)*")), minimize(dfa("(AB)*")));
}

TEST(BooleanOps, ShortestWordAndResidual) {
  EXPECT_EQ(*shortest_word(dfa("AAB|BA*B")), (Word{1, 1}));
  EXPECT_FALSE(shortest_word(dfa("empty")).has_value());
  Dfa d = dfa("A B*");
  EXPECT_TRUE(language_equal(residual(d, d.next(d.start, 0)), dfa("B*")));
}

TEST(BooleanOps, StateEliminationRoundTrip) {
  for (const char* re : {"B*A", "(AB|BA)*", ".*AA.*", "eps", "empty", "A+B?"}) {
    Dfa d = dfa(re);
    std::string back = format_regex(dfa_to_regex(d), kAB);
    EXPECT_TRUE(language_equal(d, dfa(back))) << re << " -> " << back;
  }
}

namespace {

// Two ε-branches into disjoint guessers, as in the one-register sum machine.
Nfa guess_skeleton() {
  Nfa n;
  n.alphabet = kab;
  std::size_t p = n.add_state(true), pa = n.add_state(), qa = n.add_state(false, true), pb = n.add_state(),
              qb = n.add_state(false, true);
  n.add_edge(p, kEpsilon, pa);
  n.add_edge(p, kEpsilon, pb);
  n.add_edge(pa, 0, pa);
  n.add_edge(pa, 1, pa);
  n.add_edge(pa, 0, qa);
  n.add_edge(pb, 0, pb);
  n.add_edge(pb, 1, pb);
  n.add_edge(pb, 1, qb);
  return n;
}

}  // namespace

TEST(EliminateEpsilon, FreeInputUnchanged) {
  Nfa n = to_nfa(dfa("(AB)*"));
  Nfa m = eliminate_epsilon(n);
  EXPECT_EQ(m.num_states, n.num_states);
  EXPECT_EQ(m.edges.size(), n.edges.size());
}

TEST(EliminateEpsilon, GuessSkeletonStaysUnambiguous) {
  Nfa n = guess_skeleton();
  Nfa m = eliminate_epsilon(n);
  EXPECT_FALSE(m.has_epsilon());
  EXPECT_TRUE(is_unambiguous(m));
  for (const auto& w : oracle::all_words(2, 5)) EXPECT_EQ(brute_runs(m, w), brute_runs(n, w));
}

TEST(EliminateEpsilon, CycleIsRejected) {
  Nfa n;
  n.alphabet = kab;
  std::size_t p = n.add_state(true, true), q = n.add_state();
  n.add_edge(p, kEpsilon, q);
  n.add_edge(q, kEpsilon, p);
  try {
    eliminate_epsilon(n);
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EpsilonCycle);
  }
}

TEST(Unambiguity, EveryDfaIsUnambiguous) {
  EXPECT_TRUE(is_unambiguous(to_nfa(dfa(".*A.*B"))));
  EXPECT_TRUE(is_unambiguous(to_nfa(dfa("empty"))));
}

TEST(Unambiguity, GuessingTheLetter) {
  // Σ*aΣ*: the a can be guessed at either position of "aa"
  Nfa n;
  n.alphabet = kab;
  std::size_t p = n.add_state(true), q = n.add_state(false, true);
  n.add_edge(p, 0, p);
  n.add_edge(p, 1, p);
  n.add_edge(p, 0, q);
  n.add_edge(q, 0, q);
  n.add_edge(q, 1, q);
  EXPECT_FALSE(is_unambiguous(n));
  EXPECT_EQ(count_runs(n, {0, 0}, 10), 2u);
  for (const auto& w : oracle::all_words(2, 3)) EXPECT_EQ(count_runs(n, w, 100), brute_runs(n, w));
}

TEST(Unambiguity, ParallelEdgesAreDistinctRuns) {
  Nfa n;
  n.alphabet = kab;
  std::size_t p = n.add_state(true), q = n.add_state(false, true);
  n.add_edge(p, 0, q);
  n.add_edge(p, 0, q);
  EXPECT_FALSE(is_unambiguous(n));
}

TEST(UnambConcat, SingleCut) {
  Dfa d = unamb_concat_dfa(regex_to_dfa("a", kab), regex_to_dfa("b", kab));
  EXPECT_TRUE(d.accepts({0, 1}));
  EXPECT_FALSE(d.accepts({0}));
}

TEST(UnambConcat, TwoCutsReject) {
  Dfa d = unamb_concat_dfa(regex_to_dfa("a|ab", kab), regex_to_dfa("b|eps", kab));
  EXPECT_FALSE(d.accepts({0, 1}));
  EXPECT_TRUE(d.accepts({0}));
  auto ma = [](const Word& w) { return oracle::matches("a|ab", kab, w); };
  auto mb = [](const Word& w) { return oracle::matches("b|eps", kab, w); };
  expect_language(d, [&](const Word& w) { return oracle::count_splits(ma, mb, w) == 1; }, 4, "split");
}

TEST(UnambConcat, SuffixAThenAnything) {
  auto ma = [](const Word& w) { return oracle::matches(".*A", kAB, w); };
  auto mb = [](const Word&) { return true; };
  Dfa d = unamb_concat_dfa(dfa(".*A"), dfa(".*"));
  expect_language(d, [&](const Word& w) { return oracle::count_splits(ma, mb, w) == 1; }, 6, "Σ*A ⊙ Σ*");
}

TEST(UnambIter, EpsilonInBaseGivesEmpty) {
  EXPECT_TRUE(is_empty(unamb_iter_dfa(regex_to_dfa("eps|a", kab))));
  auto m = [](const Word& w) { return oracle::matches("eps|a", kab, w); };
  for (const auto& w : oracle::all_words(2, 4)) EXPECT_GE(oracle::count_decompositions(m, w), 2u);
}

TEST(UnambIter, HashTerminatedBlocks) {
  Alphabet al{"a", "b", "#"};
  Dfa d = unamb_iter_dfa(regex_to_dfa("[ab]+#", al));
  EXPECT_TRUE(language_equal(d, regex_to_dfa("([ab]+#)*", al)));
}

TEST(UnambIter, TwoDecompositionsReject) {
  Dfa d = unamb_iter_dfa(regex_to_dfa("a|aa", kab));
  EXPECT_TRUE(d.accepts({0}));
  EXPECT_FALSE(d.accepts({0, 0, 0}));
  auto m = [](const Word& w) { return oracle::matches("a|aa", kab, w); };
  expect_language(d, [&](const Word& w) { return oracle::count_decompositions(m, w) == 1; }, 6, "(a|aa)⊙*");
}

TEST(Atomaton, UniversalBaseHasOneAtom) {
  Atomaton at = atomaton({dfa(".*")}, kAB);
  EXPECT_EQ(at.atoms.size(), 1u);
  EXPECT_TRUE(language_equal(at.atoms[0], dfa(".*")));
}

TEST(Atomaton, RunningExample) {
  Atomaton at = atomaton({dfa(".*"), dfa("B*A.*"), dfa("B+A.*"), dfa("A.*")}, kAB);
  ASSERT_EQ(at.atoms.size(), 3u);
  std::vector<Dfa> want = {dfa("A.*"), dfa("B+A.*"), dfa("B*")};
  for (const auto& w : want) {
    int hits = 0;
    for (const auto& a : at.atoms) hits += language_equal(a, w);
    EXPECT_EQ(hits, 1);
  }
  EXPECT_TRUE(language_equal(at.atoms[at.epsilon_atom], dfa("B*")));
  EXPECT_TRUE(is_unambiguous(at.nfa));
}

TEST(Atomaton, SuccessorsPartitionDerivatives) {
  Atomaton at = atomaton({dfa(".*A"), dfa("B*A.*"), dfa("(AB)*")}, kAB);
  // the atoms partition Σ*
  for (const auto& w : oracle::all_words(2, 5)) {
    int in = 0;
    for (const auto& a : at.atoms) in += a.accepts(w);
    ASSERT_EQ(in, 1) << format_word(kAB, w);
  }
  // a·w lies in atom T iff w lies in exactly one successor of T on a
  for (std::size_t t = 0; t < at.atoms.size(); ++t)
    for (Symbol a = 0; a < 2; ++a)
      for (const auto& w : oracle::all_words(2, 4)) {
        Word aw{a};
        aw.insert(aw.end(), w.begin(), w.end());
        int succ = 0;
        for (const auto& e : at.nfa.edges)
          if (e.from == t && e.sym == static_cast<int>(a)) succ += at.atoms[e.to].accepts(w);
        ASSERT_EQ(succ, at.atoms[t].accepts(aw) ? 1 : 0);
      }
}

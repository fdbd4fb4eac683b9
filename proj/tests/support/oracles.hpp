#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "streamcra/cra.hpp"
#include "streamcra/io.hpp"
#include "streamcra/weighted.hpp"

namespace oracle {

using streamcra::DataWord;
using streamcra::Value;
using streamcra::Word;

/// Every word over k letters of length <= max_len, shortest first.
std::vector<Word> all_words(std::size_t k, std::size_t max_len);
std::vector<DataWord> all_data_words(std::size_t k, const std::vector<Value>& values, std::size_t max_len);
std::vector<Value> ints(std::initializer_list<long long> xs);
Word tags(const DataWord& w);
DataWord data_word(std::initializer_list<std::pair<streamcra::Symbol, long long>> items);

/// Backtracking matcher on the syntax tree; no automaton involved.
bool matches(const streamcra::Regex& r, const Word& w);
bool matches(const std::string& regex, const streamcra::Alphabet& al, const Word& w);

using Member = std::function<bool(const Word&)>;
/// Number of cuts w = uv with u in A and v in B.
std::size_t count_splits(const Member& a, const Member& b, const Word& w);
/// Number of factorizations of w into blocks of A, saturating at cap; a
/// language containing ε has unboundedly many.
std::size_t count_decompositions(const Member& a, const Word& w, std::size_t cap = 3);

/// Sum of the values tagged 0.
Value sum_of_tag(const DataWord& w, streamcra::Symbol tag);
/// Sum of the values carrying the last tag; undefined on ε.
std::optional<Value> end_letter_sum(const DataWord& w);
/// Tags {a=0, #=1}: maximum over blocks a+# of the block sum; undefined off (a+#)*.
std::optional<Value> block_max(const DataWord& w);
/// Tags {a=0, b=1}: largest peak-to-trough loss after the last b.
std::optional<Value> drawdown(const DataWord& w);
/// Tags {a=0, b=1, #=2}: each block u# becomes c^|u|# with c the last letter of u.
std::optional<std::string> f_star(const Word& w);
/// Sum over all state sequences of the product of weights.
Value wa_paths(const streamcra::WeightedAutomaton& wa, const Word& w);

}  // namespace oracle

namespace fixture {

std::string path(const std::string& name);
std::string text(const std::string& name);
streamcra::Cra cra(const std::string& name);
streamcra::QueryProgram query(const std::string& name);
streamcra::RuleTransduction rules(const std::string& name);
streamcra::WeightedAutomaton wa(const std::string& name);
streamcra::MonoidWa monoid_wa(const std::string& name);

}  // namespace fixture

#pragma once

#include <functional>
#include <istream>
#include <string>
#include <string_view>

#include "streamcra/combinators.hpp"
#include "streamcra/cra.hpp"
#include "streamcra/rules.hpp"
#include "streamcra/weighted.hpp"

namespace streamcra {

/// Errors: IoError.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

enum class ArtifactKind { Cra, Query, Rules, Wa, MonoidWa };

const char* kind_name(ArtifactKind k);
/// From an explicit "kind" field, else from the keys present. Errors: ParseError.
ArtifactKind detect_kind(std::string_view json_text);

/// Every loader reports ParseError for malformed JSON or missing fields and
/// propagates registry, expression and regex errors. `seed` drives the
/// registry's randomized tag checks.
RegistryRef parse_registry(std::string_view json_text, std::uint64_t seed = kDefaultSeed);
std::string dump_registry(const OperationRegistry& reg);

/// Registers missing from an update keep their value; ε-transitions use a null tag.
Cra parse_cra(std::string_view json_text, std::uint64_t seed = kDefaultSeed);
std::string dump_cra(const Cra& m);

/// {"alphabet", "registry", "query": text}
QueryProgram parse_query_program(std::string_view json_text, std::uint64_t seed = kDefaultSeed);

RuleTransduction parse_rules(std::string_view json_text, std::uint64_t seed = kDefaultSeed);
std::string dump_rules(const RuleTransduction& t);

/// {"alphabet", "semiring", "states", "weights": [{"from","tag","to","w"}], "init", "final"}
WeightedAutomaton parse_wa(std::string_view json_text);
std::string dump_wa(const WeightedAutomaton& w);
/// Same layout with "monoid" (and "generators" for the free monoid) instead of "semiring".
MonoidWa parse_monoid_wa(std::string_view json_text, std::uint64_t seed = kDefaultSeed);
std::string dump_monoid_wa(const MonoidWa& w);

/// One JSON value: integers as numbers when they fit, everything else as text.
std::string value_to_json(const Value& v);

using RecordSink = std::function<void(Symbol, const Value&)>;
/// {"tag": ..., "value": ...} per line. Errors: ParseError, TagOutOfAlphabet, ValueParseError.
void for_each_jsonl(std::istream& in, const Alphabet& alphabet, const OperationRegistry& reg, const RecordSink& sink);
/// Header row naming the tag and value columns.
void for_each_csv(std::istream& in, const Alphabet& alphabet, const OperationRegistry& reg, const RecordSink& sink);
DataWord read_stream(std::istream& in, bool csv, const Alphabet& alphabet, const OperationRegistry& reg);

}  // namespace streamcra

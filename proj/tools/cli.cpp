#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "streamcra/combinators.hpp"
#include "streamcra/cra.hpp"
#include "streamcra/error.hpp"
#include "streamcra/io.hpp"
#include "streamcra/rules.hpp"
#include "streamcra/weighted.hpp"

namespace streamcra::cli {

namespace {

using json = nlohmann::ordered_json;

struct Artifact {
  ArtifactKind kind = ArtifactKind::Cra;
  std::string path;
  std::string text;
};

ArtifactKind kind_from_flag(const std::string& k) {
  for (auto c : {ArtifactKind::Cra, ArtifactKind::Query, ArtifactKind::Rules, ArtifactKind::Wa, ArtifactKind::MonoidWa})
    if (k == kind_name(c)) return c;
  fail(ErrorCode::ParseError, "unknown kind '" + k + "'");
}

Artifact load(const std::string& path, const std::string& kind_flag) {
  Artifact a;
  a.path = path;
  a.text = read_text_file(path);
  a.kind = kind_flag.empty() ? detect_kind(a.text) : kind_from_flag(kind_flag);
  return a;
}

Cra normalize(const Cra& m) { return trim(m.has_epsilon() ? eliminate_epsilon(m) : m); }

/// The streamable machine an artifact stands for.
Cra to_machine(const Artifact& a, std::uint64_t seed, std::vector<std::string>* notes = nullptr) {
  switch (a.kind) {
    case ArtifactKind::Cra: return normalize(parse_cra(a.text, seed));
    case ArtifactKind::Query: return compile(parse_query_program(a.text, seed), notes);
    case ArtifactKind::Rules: return compile_to_ucra(parse_rules(a.text, seed));
    case ArtifactKind::Wa: return wa_to_cra(parse_wa(a.text));
    case ArtifactKind::MonoidWa: return uwa_to_copyless_ucra(parse_monoid_wa(a.text, seed));
  }
  fail(ErrorCode::ParseError, "unsupported artifact");
}

std::string summary(const Cra& m) {
  return std::to_string(m.num_states()) + " states, " + std::to_string(m.num_registers()) + " registers, " +
         std::to_string(m.transitions.size()) + " transitions";
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty())
    out << text;
  else
    write_text_file(out_path, text);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string x;
  while (std::getline(ss, x, ','))
    if (!x.empty()) out.push_back(x);
  return out;
}

json data_word_json(const Alphabet& al, const DataWord& w) {
  json j = json::array();
  for (const auto& it : w) j.push_back({{"tag", al[it.tag]}, {"value", json::parse(value_to_json(it.value))}});
  return j;
}

json optional_value_json(const std::optional<Value>& v) {
  return v ? json::parse(value_to_json(*v)) : json("undefined");
}

// ---------------------------------------------------------------- check

int cmd_check(const Artifact& a, std::uint64_t seed, bool require_copyless, std::ostream& out) {
  json j;
  j["kind"] = kind_name(a.kind);
  bool clean = true;
  switch (a.kind) {
    case ArtifactKind::Cra: {
      Cra m = parse_cra(a.text, seed);
      CraDiagnostics d = validate(m);
      j["deterministic"] = d.deterministic;
      j["unambiguous"] = d.unambiguous;
      j["copyless"] = d.copyless;
      j["trim"] = d.trim;
      j["arity_ok"] = d.arity_ok;
      j["epsilon_free"] = d.epsilon_free;
      j["messages"] = d.messages;
      clean = d.arity_ok && d.unambiguous && (!require_copyless || d.copyless);
      break;
    }
    case ArtifactKind::Query: {
      QueryProgram p = parse_query_program(a.text, seed);
      std::vector<std::string> warnings;
      Cra m = compile(p, &warnings);
      bool copyless = copyless_report(p);
      j["states"] = m.num_states();
      j["registers"] = m.num_registers();
      j["copyless"] = copyless;
      j["messages"] = warnings;
      clean = !require_copyless || copyless;
      break;
    }
    case ArtifactKind::Rules: {
      RuleTransduction t = parse_rules(a.text, seed);
      WellFormedness wf = check_wellformed(t);
      json cs = json::array();
      for (std::size_t i = 0; i < wf.conditions.size(); ++i) {
        const auto& c = wf.conditions[i];
        json x;
        x["condition"] = i + 1;
        x["status"] = c.status == CheckStatus::Pass ? "pass" : c.status == CheckStatus::Fail ? "fail" : "skipped";
        if (!c.message.empty()) x["message"] = c.message;
        if (c.witness) x["witness"] = *c.witness;
        cs.push_back(x);
      }
      j["conditions"] = cs;
      j["failed"] = wf.failed();
      j["single_step"] = is_single_step(t);
      j["tree"] = is_tree(t);
      clean = wf.ok();
      break;
    }
    case ArtifactKind::Wa: {
      WeightedAutomaton w = parse_wa(a.text);
      auto laws = check_semiring_laws(w.semiring, seed);
      j["semiring"] = w.semiring_name;
      j["violated_laws"] = laws;
      j["unambiguous"] = is_unambiguous_wa(w);
      clean = laws.empty();
      break;
    }
    case ArtifactKind::MonoidWa: {
      MonoidWa w = parse_monoid_wa(a.text, seed);
      auto laws = check_monoid_laws(*w.registry->monoid(), seed);
      bool unamb = is_unambiguous_wa(w);
      j["monoid"] = w.registry->monoid()->name;
      j["violated_laws"] = laws;
      j["unambiguous"] = unamb;
      clean = laws.empty() && unamb;
      break;
    }
  }
  j["clean"] = clean;
  out << j.dump(2) << "\n";
  return clean ? 0 : 1;
}

// ---------------------------------------------------------------- compile

struct CompileOptions {
  std::string out_path;
  std::string emit = "json";
  std::string to = "ucra";
  bool determinize = false;
  std::string fp_dot;
};

int cmd_compile(const Artifact& a, std::uint64_t seed, const CompileOptions& o, std::ostream& out, std::ostream& err) {
  if (!o.fp_dot.empty()) {
    if (a.kind != ArtifactKind::Rules) fail(ErrorCode::PreconditionViolation, "--fp-dot needs a rules file");
    write_text_file(o.fp_dot, to_dot(future_past(single_step(parse_rules(a.text, seed)))));
  }
  std::vector<std::string> notes;
  Cra m = to_machine(a, seed, &notes);
  for (const auto& n : notes) err << "warning: " << n << "\n";
  if (o.determinize || o.to == "dcra") m = ucra_to_dcra(m);
  bool dot = o.emit == "dot";
  if (o.to == "ucra" || o.to == "dcra") {
    err << "compiled: " << summary(m) << "\n";
    emit(dot ? to_dot(m) : dump_cra(m), o.out_path, out);
  } else if (o.to == "copyless") {
    Cra c = unary_to_copyless(m);
    err << "compiled: " << summary(c) << "\n";
    emit(dot ? to_dot(c) : dump_cra(c), o.out_path, out);
  } else if (o.to == "rules") {
    RuleTransduction t = cra_to_rules(m);
    err << "compiled: " << t.copies.size() << " copies, " << t.vertex_rules.size() << " vertex rules, "
        << t.edge_rules.size() << " edge rules\n";
    emit(dot ? to_dot(future_past(t)) : dump_rules(t), o.out_path, out);
  } else if (o.to == "wa") {
    WeightedAutomaton w = cra_to_wa(m);
    err << "compiled: " << w.num_states() << " weighted states\n";
    emit(dot ? to_dot(support_nfa(w), "wa") : dump_wa(w), o.out_path, out);
  } else if (o.to == "uwa") {
    MonoidWa w = copyless_ucra_to_uwa(m);
    err << "compiled: " << w.num_states() << " weighted states\n";
    emit(dot ? to_dot(support_nfa(w), "uwa") : dump_monoid_wa(w), o.out_path, out);
  } else {
    fail(ErrorCode::ParseError, "unknown target '" + o.to + "'");
  }
  return 0;
}

// ---------------------------------------------------------------- run

int cmd_run(const Artifact& a, std::uint64_t seed, const std::string& stream_path, std::string format, bool stats,
            std::istream& in, std::ostream& out) {
  Cra m = to_machine(a, seed);
  if (format.empty())
    format = stream_path.size() >= 4 && stream_path.compare(stream_path.size() - 4, 4, ".csv") == 0 ? "csv" : "jsonl";
  if (format != "jsonl" && format != "csv") fail(ErrorCode::ParseError, "unknown input format '" + format + "'");

  StreamEvaluator ev(m);
  auto t0 = std::chrono::steady_clock::now();
  auto sink = [&ev](Symbol tag, const Value& v) { ev.push(tag, v); };
  auto consume = [&](std::istream& s) {
    if (format == "csv")
      for_each_csv(s, m.alphabet, *m.registry, sink);
    else
      for_each_jsonl(s, m.alphabet, *m.registry, sink);
  };
  if (stream_path.empty() || stream_path == "-") {
    consume(in);
  } else {
    std::ifstream f(stream_path);
    if (!f) fail(ErrorCode::IoError, "cannot open " + stream_path);
    consume(f);
  }
  std::optional<Value> result = ev.result();
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const EvalStats& st = ev.stats();
  std::size_t store_bound = m.num_states() * m.num_registers();
  bool bound_ok = st.max_stored_values <= store_bound && st.max_live_tokens <= m.num_states();

  json j;
  j["output"] = optional_value_json(result);
  if (stats) {
    j["stats"] = {{"items", st.items},
                  {"max_live_tokens", st.max_live_tokens},
                  {"max_stored_values", st.max_stored_values},
                  {"op_applications", st.op_applications}};
    j["bound"] = {{"states", m.num_states()},
                  {"registers", m.num_registers()},
                  {"stored_values_limit", store_bound},
                  {"ok", bound_ok}};
    j["timings"] = {{"seconds", secs}, {"items_per_second", secs > 0 ? static_cast<double>(st.items) / secs : 0.0}};
  }
  out << j.dump(2) << "\n";
  return bound_ok ? 0 : 1;
}

// ---------------------------------------------------------------- xcheck

using Oracle = std::function<std::optional<Value>(const DataWord&)>;

Word tags_of(const DataWord& w) {
  Word out;
  for (const auto& it : w) out.push_back(it.tag);
  return out;
}

Oracle oracle_for(const Artifact& a, std::uint64_t seed, std::size_t max_len, Alphabet& alphabet) {
  switch (a.kind) {
    case ArtifactKind::Cra: {
      auto m = std::make_shared<Cra>(parse_cra(a.text, seed));
      alphabet = m->alphabet;
      return [m, max_len](const DataWord& w) -> std::optional<Value> {
        auto vals = eval_paths_oracle(*m, w, max_len);
        if (vals.size() > 1) fail(ErrorCode::AmbiguityDetected, "two accepting runs");
        if (vals.empty()) return std::nullopt;
        return vals.front();
      };
    }
    case ArtifactKind::Query: {
      auto p = std::make_shared<QueryProgram>(parse_query_program(a.text, seed));
      alphabet = p->alphabet;
      return [p, max_len](const DataWord& w) { return oracle_eval(*p, w, max_len); };
    }
    case ArtifactKind::Rules: {
      auto t = std::make_shared<RuleTransduction>(parse_rules(a.text, seed));
      alphabet = t->alphabet;
      return [t](const DataWord& w) { return dag_oracle_eval(*t, w); };
    }
    case ArtifactKind::Wa: {
      auto wa = std::make_shared<WeightedAutomaton>(parse_wa(a.text));
      alphabet = wa->alphabet;
      return [wa](const DataWord& w) -> std::optional<Value> { return wa_path_oracle(*wa, tags_of(w)); };
    }
    case ArtifactKind::MonoidWa: {
      auto wa = std::make_shared<MonoidWa>(parse_monoid_wa(a.text, seed));
      alphabet = wa->alphabet;
      return [wa](const DataWord& w) { return monoid_wa_eval(*wa, tags_of(w)); };
    }
  }
  fail(ErrorCode::ParseError, "unsupported artifact");
}

struct XcheckOptions {
  std::size_t max_len = 4;
  std::string values = "0,1";
  std::string reference;
  std::uint64_t budget = 5000000;
};

int cmd_xcheck(const Artifact& a, std::uint64_t seed, const XcheckOptions& o, std::ostream& out) {
  Cra m = to_machine(a, seed);
  Alphabet oracle_alphabet;
  Artifact ref = o.reference.empty() ? a : load(o.reference, "");
  Oracle oracle = oracle_for(ref, seed, o.max_len, oracle_alphabet);
  if (oracle_alphabet != m.alphabet) fail(ErrorCode::AlphabetMismatch, "subject and oracle alphabets differ");

  bool reads_val = false;
  for (const auto& t : m.transitions)
    for (const auto& e : t.update) reads_val = reads_val || e.uses_val();
  bool data_free = ref.kind == ArtifactKind::Wa || ref.kind == ArtifactKind::MonoidWa || !reads_val;
  std::vector<std::string> texts = split_list(o.values);
  std::vector<Value> values;
  if (data_free) {
    // weights sit on the edges, the data value is never read
    const Semiring* s = m.registry->semiring();
    const Monoid* mo = m.registry->monoid();
    values.push_back(s    ? s->one
                     : mo ? mo->one
                     : m.registry->kind() == DomainKind::Str ? Value::word("")
                                                              : Value::integer(0));
    texts.clear();
  } else {
    if (texts.empty()) fail(ErrorCode::ParseError, "--values is empty");
    for (const auto& v : texts) values.push_back(m.registry->parse_value(v));
  }

  std::size_t k = m.alphabet.size() * values.size();
  std::uint64_t total = 0, layer = 1;
  for (std::size_t n = 0; n <= o.max_len; ++n) {
    total += layer;
    if (total > o.budget) fail(ErrorCode::BudgetExceeded, "more than " + std::to_string(o.budget) + " cases");
    if (n < o.max_len) {
      if (k != 0 && layer > o.budget / k + 1) fail(ErrorCode::BudgetExceeded, "more than " + std::to_string(o.budget) + " cases");
      layer *= k;
    }
  }

  std::uint64_t cases = 0, mismatches = 0;
  json counter = nullptr;
  for (std::size_t n = 0; n <= o.max_len; ++n) {
    std::vector<std::size_t> digits(n, 0);
    while (true) {
      DataWord w;
      for (std::size_t d : digits) w.push_back({static_cast<Symbol>(d / values.size()), values[d % values.size()]});
      std::optional<Value> want = oracle(w);
      std::optional<Value> got = eval_stream(m, w);
      ++cases;
      if (want != got) {
        if (mismatches == 0)
          counter = {{"word", data_word_json(m.alphabet, w)},
                     {"expected", optional_value_json(want)},
                     {"actual", optional_value_json(got)}};
        ++mismatches;
      }
      std::size_t i = 0;
      while (i < n && ++digits[i] == k) digits[i++] = 0;
      if (i == n) break;
    }
  }

  json j;
  j["subject"] = a.path;
  j["oracle"] = ref.path + " (" + kind_name(ref.kind) + ")";
  j["max_len"] = o.max_len;
  j["values"] = texts;
  j["value_oblivious"] = data_free;
  j["cases"] = cases;
  j["mismatches"] = mismatches;
  j["counterexample"] = counter;
  out << j.dump(2) << "\n";
  return mismatches == 0 ? 0 : 1;
}

// ---------------------------------------------------------------- graph

int cmd_graph(const Artifact& a, std::uint64_t seed, std::string view, const std::string& word,
              const std::string& out_path, std::ostream& out) {
  if (view.empty())
    view = a.kind == ArtifactKind::Rules                                     ? "fp"
           : a.kind == ArtifactKind::Wa || a.kind == ArtifactKind::MonoidWa ? "support"
                                                                            : "cra";
  std::string dot;
  if (view == "fp" || view == "dag") {
    if (a.kind != ArtifactKind::Rules) fail(ErrorCode::PreconditionViolation, "view '" + view + "' needs a rules file");
    RuleTransduction t = parse_rules(a.text, seed);
    if (view == "fp") {
      dot = to_dot(future_past(single_step(t)));
    } else {
      auto g = materialize_dag(t, word_of(t.alphabet, split_list(word)));
      if (!g) fail(ErrorCode::PreconditionViolation, "word outside the domain");
      dot = to_dot(t, *g);
    }
  } else if (view == "support") {
    if (a.kind == ArtifactKind::Wa)
      dot = to_dot(support_nfa(parse_wa(a.text)), "wa");
    else if (a.kind == ArtifactKind::MonoidWa)
      dot = to_dot(support_nfa(parse_monoid_wa(a.text, seed)), "uwa");
    else
      fail(ErrorCode::PreconditionViolation, "view 'support' needs a weighted automaton");
  } else if (view == "cra") {
    dot = to_dot(a.kind == ArtifactKind::Cra ? parse_cra(a.text, seed) : to_machine(a, seed));
  } else if (view == "rate") {
    dot = to_dot(minimize(determinize(rate(to_machine(a, seed)))), "rate");
  } else {
    fail(ErrorCode::ParseError, "unknown view '" + view + "'");
  }
  emit(dot, out_path, out);
  return 0;
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
    case ErrorCode::ValueParseError:
    case ErrorCode::TagOutOfAlphabet:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Streamable regular transductions: cost register automata, combinators, weighted automata, rules"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "streamcra 0.1.0");

  std::uint64_t seed = kDefaultSeed;
  std::string path, kind;
  auto common = [&](CLI::App* s) {
    s->add_option("file", path, "Artifact file (cra, query, rules, wa or monoid-wa JSON)")->required();
    s->add_option("--kind", kind, "Artifact kind; detected from the file when omitted")
        ->check(CLI::IsMember({"cra", "query", "rules", "wa", "monoid-wa"}));
    s->add_option("--seed", seed, "Seed for randomized law checks (STREAMCRA_SEED overrides)");
  };

  auto* check = app.add_subcommand("check", "Validate an artifact and print JSON diagnostics");
  common(check);
  bool require_copyless = false;
  check->add_flag("--require-copyless", require_copyless, "Fail when some update uses a register twice");

  auto* comp = app.add_subcommand("compile", "Compile an artifact to a machine");
  common(comp);
  CompileOptions co;
  comp->add_option("--out,-o", co.out_path, "Output file (stdout when omitted)");
  comp->add_option("--emit", co.emit, "Output format")->check(CLI::IsMember({"json", "dot"}));
  comp->add_option("--to", co.to, "Target")->check(CLI::IsMember({"ucra", "dcra", "copyless", "rules", "wa", "uwa"}));
  comp->add_flag("--determinize", co.determinize, "Determinize the unambiguous machine");
  comp->add_option("--fp-dot", co.fp_dot, "Also write the future-past automaton of a rules file as DOT");

  auto* runc = app.add_subcommand("run", "Evaluate a machine over a data stream");
  common(runc);
  std::string stream_path, format;
  bool stats = false;
  runc->add_option("stream", stream_path, "JSONL or CSV stream (stdin when omitted or '-')");
  runc->add_option("--input", format, "Stream format")->check(CLI::IsMember({"jsonl", "csv"}));
  runc->add_flag("--stats", stats, "Report evaluation statistics and timings");

  auto* xc = app.add_subcommand("xcheck", "Compare the compiled machine with a definition-level oracle");
  common(xc);
  XcheckOptions xo;
  xc->add_option("--max-len", xo.max_len, "Longest word to enumerate");
  xc->add_option("--values", xo.values, "Comma-separated data values");
  xc->add_option("--reference", xo.reference, "Take the oracle from another artifact");
  xc->add_option("--budget", xo.budget, "Largest number of cases to enumerate");

  auto* gr = app.add_subcommand("graph", "Print a DOT rendering");
  common(gr);
  std::string view, word, graph_out;
  gr->add_option("--view", view, "cra, rate, fp, dag or support")
      ->check(CLI::IsMember({"cra", "rate", "fp", "dag", "support"}));
  gr->add_option("--word", word, "Comma-separated tags for --view dag");
  gr->add_option("--out,-o", graph_out, "Output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  if (const char* env = std::getenv("STREAMCRA_SEED")) {
    try {
      std::size_t used = 0;
      seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      err << R"({"error": "ParseError", "message": "STREAMCRA_SEED is not a number"})" << "\n";
      return 2;
    }
  }

  try {
    Artifact a = load(path, kind);
    if (check->parsed()) return cmd_check(a, seed, require_copyless, out);
    if (comp->parsed()) return cmd_compile(a, seed, co, out, err);
    if (runc->parsed()) return cmd_run(a, seed, stream_path, format, stats, in, out);
    if (xc->parsed()) return cmd_xcheck(a, seed, xo, out);
    if (gr->parsed()) return cmd_graph(a, seed, view, word, graph_out, out);
  } catch (const Error& e) {
    json j{{"error", error_name(e.code())}, {"message", e.what()}};
    err << j.dump() << "\n";
    return exit_code(e.code());
  }
  return 2;
}

}  // namespace streamcra::cli

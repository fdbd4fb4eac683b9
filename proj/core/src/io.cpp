#include "streamcra/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "streamcra/error.hpp"

namespace streamcra {

using json = nlohmann::ordered_json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

const char* kind_name(ArtifactKind k) {
  switch (k) {
    case ArtifactKind::Cra: return "cra";
    case ArtifactKind::Query: return "query";
    case ArtifactKind::Rules: return "rules";
    case ArtifactKind::Wa: return "wa";
    case ArtifactKind::MonoidWa: return "monoid-wa";
  }
  return "?";
}

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string text_of(const json& j, const char* what) {
  if (!j.is_string()) fail(ErrorCode::ParseError, std::string(what) + " must be a string");
  return j.get<std::string>();
}

std::vector<std::string> names_of(const json& j, const char* what) {
  if (!j.is_array()) fail(ErrorCode::ParseError, std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& x : j) out.push_back(text_of(x, what));
  return out;
}

std::size_t index_in(const std::vector<std::string>& names, const std::string& n, const char* what) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == n) return i;
  fail(ErrorCode::ParseError, std::string("unknown ") + what + " '" + n + "'");
}

Value value_of(const json& j, const OperationRegistry& reg) {
  if (j.is_number_integer() || j.is_number_unsigned()) return reg.parse_value(j.dump());
  if (j.is_string()) return reg.parse_value(j.get<std::string>());
  if (j.is_boolean()) return reg.parse_value(j.get<bool>() ? "1" : "0");
  fail(ErrorCode::ValueParseError, "unsupported value " + j.dump());
}

json value_json(const Value& v) {
  if (v.is_int()) {
    const Int& i = v.as_int();
    if (i >= std::numeric_limits<long long>::min() && i <= std::numeric_limits<long long>::max())
      return static_cast<long long>(i);
  }
  return v.to_string();
}

RegistryDescriptor descriptor_of(const json& j) {
  RegistryDescriptor d;
  d.domain = text_of(field(j, "domain"), "registry domain");
  if (j.contains("alphabet")) d.alphabet = names_of(j.at("alphabet"), "registry alphabet");
  if (j.contains("ops")) d.ops = names_of(j.at("ops"), "registry ops");
  if (j.contains("semiring")) d.semiring = text_of(j.at("semiring"), "semiring");
  if (j.contains("monoid")) d.monoid = text_of(j.at("monoid"), "monoid");
  return d;
}

json registry_json(const OperationRegistry& reg) {
  const RegistryDescriptor& d = reg.descriptor();
  json j;
  j["domain"] = d.domain;
  if (!d.alphabet.empty()) j["alphabet"] = d.alphabet;
  if (d.ops) j["ops"] = *d.ops;
  if (!d.semiring.empty()) j["semiring"] = d.semiring;
  if (!d.monoid.empty()) j["monoid"] = d.monoid;
  return j;
}

std::string regex_text(const Dfa& d, const Alphabet& al) { return format_regex(dfa_to_regex(d), al); }

}  // namespace

ArtifactKind detect_kind(std::string_view text) {
  json j = parse_json(text);
  if (!j.is_object()) fail(ErrorCode::ParseError, "top level must be an object");
  if (j.contains("kind")) {
    std::string k = text_of(j.at("kind"), "kind");
    for (auto c : {ArtifactKind::Cra, ArtifactKind::Query, ArtifactKind::Rules, ArtifactKind::Wa, ArtifactKind::MonoidWa})
      if (k == kind_name(c)) return c;
    fail(ErrorCode::ParseError, "unknown kind '" + k + "'");
  }
  if (j.contains("transitions")) return ArtifactKind::Cra;
  if (j.contains("query")) return ArtifactKind::Query;
  if (j.contains("vertex_rules") || j.contains("copies")) return ArtifactKind::Rules;
  if (j.contains("weights")) return j.contains("monoid") ? ArtifactKind::MonoidWa : ArtifactKind::Wa;
  fail(ErrorCode::ParseError, "cannot tell the artifact kind");
}

RegistryRef parse_registry(std::string_view text, std::uint64_t seed) {
  return make_registry(descriptor_of(parse_json(text)), seed);
}

std::string dump_registry(const OperationRegistry& reg) { return registry_json(reg).dump(2) + "\n"; }

// ---------------------------------------------------------------- CRA

Cra parse_cra(std::string_view text, std::uint64_t seed) {
  json j = parse_json(text);
  Cra m;
  m.alphabet = names_of(field(j, "alphabet"), "alphabet");
  m.registers = names_of(field(j, "registers"), "registers");
  m.registry = make_registry(descriptor_of(field(j, "registry")), seed);
  for (const auto& s : names_of(field(j, "states"), "states")) m.add_state(s);
  const auto& reg = *m.registry;
  auto update_of = [&](const json& u, bool closed) {
    if (!u.is_object()) fail(ErrorCode::ParseError, "update must be an object");
    Update out = m.identity_update();
    std::vector<bool> seen(m.num_registers(), false);
    for (const auto& [r, e] : u.items()) {
      std::size_t i = index_in(m.registers, r, "register");
      out[i] = parse_expr(text_of(e, "expression"), reg, m.registers);
      seen[i] = true;
    }
    if (closed)
      for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) fail(ErrorCode::ParseError, "initialization misses register " + m.registers[i]);
    return out;
  };
  for (const auto& t : field(j, "transitions")) {
    Transition tr;
    tr.from = index_in(m.states, text_of(field(t, "from"), "from"), "state");
    tr.to = index_in(m.states, text_of(field(t, "to"), "to"), "state");
    const json& tag = field(t, "tag");
    tr.tag = tag.is_null() ? kEpsilon : static_cast<int>(symbol_of(m.alphabet, text_of(tag, "tag")));
    tr.update = t.contains("update") ? update_of(t.at("update"), false) : m.identity_update();
    m.transitions.push_back(std::move(tr));
  }
  for (const auto& [s, u] : field(j, "init").items()) m.init[index_in(m.states, s, "state")] = update_of(u, true);
  for (const auto& [s, e] : field(j, "final").items())
    m.final[index_in(m.states, s, "state")] = parse_expr(text_of(e, "expression"), reg, m.registers);
  return m;
}

std::string dump_cra(const Cra& m) {
  json j;
  j["kind"] = "cra";
  j["alphabet"] = m.alphabet;
  j["registers"] = m.registers;
  j["states"] = m.states;
  json ts = json::array();
  for (const auto& t : m.transitions) {
    json x;
    x["from"] = m.states[t.from];
    x["tag"] = t.tag == kEpsilon ? json(nullptr) : json(m.alphabet[static_cast<std::size_t>(t.tag)]);
    x["to"] = m.states[t.to];
    json u = json::object();
    for (std::size_t r = 0; r < m.num_registers(); ++r) u[m.registers[r]] = format_expr(t.update[r], m.registers);
    x["update"] = u;
    ts.push_back(x);
  }
  j["transitions"] = ts;
  json init = json::object(), fin = json::object();
  for (std::size_t q = 0; q < m.num_states(); ++q) {
    if (m.init[q]) {
      json u = json::object();
      for (std::size_t r = 0; r < m.num_registers(); ++r) u[m.registers[r]] = format_expr((*m.init[q])[r], m.registers);
      init[m.states[q]] = u;
    }
    if (m.final[q]) fin[m.states[q]] = format_expr(*m.final[q], m.registers);
  }
  j["init"] = init;
  j["final"] = fin;
  j["registry"] = registry_json(*m.registry);
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- queries

QueryProgram parse_query_program(std::string_view text, std::uint64_t seed) {
  json j = parse_json(text);
  QueryProgram p;
  p.alphabet = names_of(field(j, "alphabet"), "alphabet");
  p.registry = make_registry(descriptor_of(field(j, "registry")), seed);
  p.root = parse_query(text_of(field(j, "query"), "query"), p.alphabet, *p.registry);
  return p;
}

// ---------------------------------------------------------------- rules

RuleTransduction parse_rules(std::string_view text, std::uint64_t seed) {
  json j = parse_json(text);
  RuleTransduction t = make_rules(names_of(field(j, "alphabet"), "alphabet"),
                                  make_registry(descriptor_of(field(j, "registry")), seed),
                                  names_of(field(j, "copies"), "copies"), text_of(field(j, "domain"), "domain"));
  if (j.contains("vertex_rules"))
    for (const auto& r : j.at("vertex_rules"))
      add_vertex_rule(t, text_of(field(r, "copy"), "copy"), text_of(field(r, "label"), "label"),
                      text_of(field(r, "r1"), "r1"), text_of(field(r, "r2"), "r2"));
  if (j.contains("edge_rules"))
    for (const auto& r : j.at("edge_rules")) {
      const json& a = field(r, "arg");
      if (!a.is_number_integer() || a.get<long long>() < 0) fail(ErrorCode::ParseError, "arg must be a natural number");
      add_edge_rule(t, text_of(field(r, "src"), "src"), text_of(field(r, "dst"), "dst"),
                    static_cast<std::size_t>(a.get<long long>()), text_of(field(r, "r1"), "r1"),
                    text_of(field(r, "r2"), "r2"), text_of(field(r, "r3"), "r3"));
    }
  return t;
}

std::string dump_rules(const RuleTransduction& t) {
  const Alphabet& al = t.alphabet;
  json j;
  j["kind"] = "rules";
  j["alphabet"] = al;
  j["copies"] = t.copies;
  j["domain"] = regex_text(t.domain, al);
  json vs = json::array(), es = json::array();
  for (const auto& r : t.vertex_rules)
    vs.push_back({{"copy", t.copies[r.copy]}, {"label", r.label}, {"r1", regex_text(r.r1, al)}, {"r2", regex_text(r.r2, al)}});
  for (const auto& e : t.edge_rules)
    es.push_back({{"src", t.copies[e.src]},
                  {"dst", t.copies[e.dst]},
                  {"arg", e.arg},
                  {"r1", regex_text(e.r1, al)},
                  {"r2", regex_text(e.r2, al)},
                  {"r3", regex_text(e.r3, al)}});
  j["vertex_rules"] = vs;
  j["edge_rules"] = es;
  j["registry"] = registry_json(*t.registry);
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- weighted automata

WeightedAutomaton parse_wa(std::string_view text) {
  json j = parse_json(text);
  std::string sr = text_of(field(j, "semiring"), "semiring");
  WeightedAutomaton w =
      make_wa(sr, names_of(field(j, "alphabet"), "alphabet"), names_of(field(j, "states"), "states"));
  auto weight = [&](const json& x) {
    if (x.is_number_integer() || x.is_number_unsigned()) return w.semiring.parse(x.dump());
    return w.semiring.parse(text_of(x, "weight"));
  };
  for (const auto& e : field(j, "weights")) {
    std::size_t p = index_in(w.states, text_of(field(e, "from"), "from"), "state");
    std::size_t q = index_in(w.states, text_of(field(e, "to"), "to"), "state");
    Symbol a = symbol_of(w.alphabet, text_of(field(e, "tag"), "tag"));
    w.weight(p, a, q) = weight(field(e, "w"));
  }
  if (j.contains("init"))
    for (const auto& [s, x] : j.at("init").items()) w.init[index_in(w.states, s, "state")] = weight(x);
  if (j.contains("final"))
    for (const auto& [s, x] : j.at("final").items()) w.final[index_in(w.states, s, "state")] = weight(x);
  return w;
}

std::string dump_wa(const WeightedAutomaton& w) {
  json j;
  j["kind"] = "wa";
  j["alphabet"] = w.alphabet;
  j["semiring"] = w.semiring_name;
  j["states"] = w.states;
  json ws = json::array();
  for (std::size_t p = 0; p < w.num_states(); ++p)
    for (Symbol a = 0; a < w.alphabet.size(); ++a)
      for (std::size_t q = 0; q < w.num_states(); ++q)
        if (!(w.weight(p, a, q) == w.semiring.zero))
          ws.push_back({{"from", w.states[p]}, {"tag", w.alphabet[a]}, {"to", w.states[q]}, {"w", value_json(w.weight(p, a, q))}});
  j["weights"] = ws;
  json init = json::object(), fin = json::object();
  for (std::size_t q = 0; q < w.num_states(); ++q) {
    if (!(w.init[q] == w.semiring.zero)) init[w.states[q]] = value_json(w.init[q]);
    if (!(w.final[q] == w.semiring.zero)) fin[w.states[q]] = value_json(w.final[q]);
  }
  j["init"] = init;
  j["final"] = fin;
  return j.dump(2) + "\n";
}

MonoidWa parse_monoid_wa(std::string_view text, std::uint64_t seed) {
  json j = parse_json(text);
  RegistryDescriptor d;
  d.domain = "monoid-unary";
  d.monoid = text_of(field(j, "monoid"), "monoid");
  if (j.contains("generators")) d.alphabet = names_of(j.at("generators"), "generators");
  MonoidWa w;
  w.alphabet = names_of(field(j, "alphabet"), "alphabet");
  w.registry = make_registry(d, seed);
  w.states = names_of(field(j, "states"), "states");
  w.init.assign(w.states.size(), std::nullopt);
  w.final.assign(w.states.size(), std::nullopt);
  for (const auto& e : field(j, "weights"))
    w.edges.push_back({index_in(w.states, text_of(field(e, "from"), "from"), "state"),
                       symbol_of(w.alphabet, text_of(field(e, "tag"), "tag")), value_of(field(e, "w"), *w.registry),
                       index_in(w.states, text_of(field(e, "to"), "to"), "state")});
  if (j.contains("init"))
    for (const auto& [s, x] : j.at("init").items()) w.init[index_in(w.states, s, "state")] = value_of(x, *w.registry);
  if (j.contains("final"))
    for (const auto& [s, x] : j.at("final").items()) w.final[index_in(w.states, s, "state")] = value_of(x, *w.registry);
  return w;
}

std::string dump_monoid_wa(const MonoidWa& w) {
  const RegistryDescriptor& d = w.registry->descriptor();
  json j;
  j["kind"] = "monoid-wa";
  j["alphabet"] = w.alphabet;
  j["monoid"] = d.monoid;
  if (!d.alphabet.empty()) j["generators"] = d.alphabet;
  j["states"] = w.states;
  json ws = json::array();
  for (const auto& e : w.edges)
    ws.push_back({{"from", w.states[e.from]}, {"tag", w.alphabet[e.tag]}, {"to", w.states[e.to]}, {"w", value_json(e.weight)}});
  j["weights"] = ws;
  json init = json::object(), fin = json::object();
  for (std::size_t q = 0; q < w.num_states(); ++q) {
    if (w.init[q]) init[w.states[q]] = value_json(*w.init[q]);
    if (w.final[q]) fin[w.states[q]] = value_json(*w.final[q]);
  }
  j["init"] = init;
  j["final"] = fin;
  return j.dump(2) + "\n";
}

std::string value_to_json(const Value& v) { return value_json(v).dump(); }

// ---------------------------------------------------------------- streams

void for_each_jsonl(std::istream& in, const Alphabet& alphabet, const OperationRegistry& reg, const RecordSink& sink) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": " + e.what());
    }
    Symbol a = symbol_of(alphabet, text_of(field(rec, "tag"), "tag"));
    sink(a, value_of(field(rec, "value"), reg));
  }
}

void for_each_csv(std::istream& in, const Alphabet& alphabet, const OperationRegistry& reg, const RecordSink& sink) {
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
      if (ch == ',') {
        out.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur += ch;
      }
    }
    out.push_back(cur);
    for (auto& x : out) {
      auto b = x.find_first_not_of(' '), e = x.find_last_not_of(' ');
      x = b == std::string::npos ? "" : x.substr(b, e - b + 1);
    }
    return out;
  };
  std::string line;
  if (!std::getline(in, line)) return;
  auto head = split(line);
  std::size_t ti = index_in(head, "tag", "CSV column");
  std::size_t vi = index_in(head, "value", "CSV column");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split(line);
    if (cells.size() != head.size())
      fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected " + std::to_string(head.size()) + " cells");
    sink(symbol_of(alphabet, cells[ti]), reg.parse_value(cells[vi]));
  }
}

DataWord read_stream(std::istream& in, bool csv, const Alphabet& alphabet, const OperationRegistry& reg) {
  DataWord w;
  auto push = [&w](Symbol a, const Value& v) { w.push_back({a, v}); };
  if (csv)
    for_each_csv(in, alphabet, reg, push);
  else
    for_each_jsonl(in, alphabet, reg, push);
  return w;
}

}  // namespace streamcra

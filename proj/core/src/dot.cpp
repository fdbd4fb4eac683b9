#include <map>
#include <sstream>

#include "streamcra/cra.hpp"
#include "streamcra/rules.hpp"

namespace streamcra {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string tag_text(const Alphabet& al, int tag) {
  return tag == kEpsilon ? std::string("ε") : al[static_cast<std::size_t>(tag)];
}

}  // namespace

std::string to_dot(const Cra& m, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n  rankdir=LR;\n  node [shape=box];\n";
  for (std::size_t q = 0; q < m.num_states(); ++q) {
    std::string label = m.states[q];
    if (m.final[q]) label += "\nout: " + format_expr(*m.final[q], m.registers);
    os << "  q" << q << " [label=\"" << escape(label) << "\"" << (m.final[q] ? ", peripheries=2" : "") << "];\n";
    if (m.init[q]) {
      std::string u;
      for (std::size_t r = 0; r < m.num_registers(); ++r)
        u += m.registers[r] + ":=" + format_expr((*m.init[q])[r], m.registers) + "\n";
      os << "  init" << q << " [shape=point];\n  init" << q << " -> q" << q << " [label=\"" << escape(u) << "\"];\n";
    }
  }
  for (const auto& t : m.transitions) {
    std::string label = tag_text(m.alphabet, t.tag);
    for (std::size_t r = 0; r < m.num_registers(); ++r) {
      if (t.update[r].kind() == Expr::Kind::Reg && t.update[r].reg_id() == r) continue;
      label += "\n" + m.registers[r] + ":=" + format_expr(t.update[r], m.registers);
    }
    os << "  q" << t.from << " -> q" << t.to << " [label=\"" << escape(label) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_dot(const RuleTransduction& t, const OutputDag& g, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n  rankdir=BT;\n";
  std::map<std::size_t, std::vector<std::size_t>> by_position;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) by_position[g.vertices[v].position].push_back(v);
  for (const auto& [x, vs] : by_position) {
    os << "  subgraph cluster_" << x << " {\n    label=\"" << x << "\";\n";
    for (std::size_t v : vs) {
      const auto& vx = g.vertices[v];
      os << "    v" << v << " [label=\"" << escape(t.copies[vx.copy] + "\n" + vx.label) << "\""
         << (v == g.sink ? ", peripheries=2" : "") << "];\n";
    }
    os << "  }\n";
  }
  for (const auto& e : g.edges) os << "  v" << e.src << " -> v" << e.dst << " [label=\"" << e.arg << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string to_dot(const FuturePast& fp, const std::string& name) {
  const RuleTransduction& t = fp.rules;
  std::ostringstream os;
  os << "digraph " << name << " {\n  rankdir=LR;\n  node [shape=box];\n";
  for (std::size_t s = 0; s < fp.states.size(); ++s) {
    const Shape& sh = fp.shapes[s];
    std::string label = "p" + std::to_string(fp.states[s].first) + ".a" + std::to_string(fp.states[s].second);
    for (std::size_t c = 0; c < t.copies.size(); ++c)
      for (std::size_t r : sh.rules[c]) label += "\n" + t.copies[c] + ": " + t.vertex_rules[r].label;
    for (const auto& e : sh.eps_edges)
      label += "\n" + t.copies[e.src] + " -" + std::to_string(e.arg) + "-> " + t.copies[e.dst];
    for (std::size_t c : sh.sinks) label += "\nsink " + t.copies[c];
    os << "  s" << s << " [label=\"" << escape(label) << "\"" << (fp.accepting[s] ? ", peripheries=2" : "") << "];\n";
    if (fp.initial[s]) os << "  init" << s << " [shape=point];\n  init" << s << " -> s" << s << ";\n";
  }
  for (const auto& tr : fp.transitions) {
    std::string label = t.alphabet[tr.tag];
    for (const auto& [a, e] : fp.shapes[tr.from].letter_edges)
      if (a == tr.tag) label += "\n" + t.copies[e.src] + " -" + std::to_string(e.arg) + "-> " + t.copies[e.dst];
    os << "  s" << tr.from << " -> s" << tr.to << " [label=\"" << escape(label) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace streamcra

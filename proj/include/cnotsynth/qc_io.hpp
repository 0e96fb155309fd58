#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cnotsynth/bitmatrix.hpp"
#include "cnotsynth/circuit.hpp"

namespace cnot {

/// .qc subset: `.v` declares wires in order, optional `.i`/`.o` lines,
/// gates between BEGIN and END. `tof a b` is CNOT(control a, target b);
/// `cnot a b` is accepted as an alias; `tof a` / `x a` and the single-wire
/// tokens H,X,Y,Z,S,S*,T,T* pass through as opaque gates.
struct QcFile {
  std::vector<std::string> wire_names;
  Circuit circuit;
};

inline QcFile read_qc(std::istream& in) {
  QcFile out;
  std::map<std::string, std::size_t> index;
  std::string line;
  std::size_t lineno = 0;
  bool in_body = false, saw_v = false, ended = false;

  auto wire = [&](const std::string& tok) {
    auto it = index.find(tok);
    if (it == index.end()) throw parse_error("undeclared wire '" + tok + "'", lineno);
    return it->second;
  };

  static const std::vector<std::string> pass_through = {"H", "X", "Y", "Z",
                                                        "S", "S*", "T", "T*"};

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string::size_type hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.empty()) continue;
    if (ended) throw parse_error("content after END", lineno);

    const std::string& head = toks[0];
    if (!in_body) {
      if (head == ".v") {
        if (saw_v) throw parse_error("duplicate .v line", lineno);
        saw_v = true;
        for (std::size_t i = 1; i < toks.size(); ++i) {
          if (index.count(toks[i])) throw parse_error("duplicate wire '" + toks[i] + "'", lineno);
          index[toks[i]] = out.wire_names.size();
          out.wire_names.push_back(toks[i]);
        }
      } else if (head == ".i" || head == ".o") {
        if (!saw_v) throw parse_error(head + " before .v", lineno);
        for (std::size_t i = 1; i < toks.size(); ++i) wire(toks[i]);
      } else if (head == "BEGIN") {
        if (!saw_v) throw parse_error("BEGIN before .v", lineno);
        in_body = true;
        out.circuit = Circuit(out.wire_names.size());
      } else {
        throw parse_error("unexpected token '" + head + "'", lineno);
      }
      continue;
    }

    if (head == "END") {
      ended = true;
      continue;
    }
    if (head == "tof" || head == "cnot") {
      if (toks.size() == 3) {
        std::size_t c = wire(toks[1]), t = wire(toks[2]);
        if (c == t) throw parse_error("CNOT control equals target", lineno);
        out.circuit.add_cnot(c, t);
        continue;
      }
      if (head == "tof" && toks.size() == 2) {
        out.circuit.gates.push_back(Gate::other("x", {wire(toks[1])}));
        continue;
      }
      throw parse_error("bad argument count for '" + head + "'", lineno);
    }
    if (head == "x" && toks.size() == 2) {
      out.circuit.gates.push_back(Gate::other("x", {wire(toks[1])}));
      continue;
    }
    bool known = false;
    for (const std::string& p : pass_through) known = known || head == p;
    if (known) {
      if (toks.size() != 2) throw parse_error("'" + head + "' takes one wire", lineno);
      out.circuit.gates.push_back(Gate::other(head, {wire(toks[1])}));
      continue;
    }
    throw parse_error("unknown gate '" + head + "'", lineno);
  }
  if (!saw_v) throw parse_error("missing .v line", lineno == 0 ? 1 : lineno);
  if (in_body && !ended) throw parse_error("missing END", lineno);
  return out;
}

inline void write_qc(std::ostream& out, const QcFile& qc,
                     const Permutation* out_perm = nullptr) {
  out << ".v";
  for (const std::string& w : qc.wire_names) out << ' ' << w;
  out << "\n.i";
  for (const std::string& w : qc.wire_names) out << ' ' << w;
  out << "\n\nBEGIN\n";
  for (const Gate& g : qc.circuit.gates) {
    if (g.is_cnot()) {
      out << "tof " << qc.wire_names[g.control] << ' ' << qc.wire_names[g.target] << '\n';
    } else {
      out << g.name;
      for (std::size_t w : g.wires) out << ' ' << qc.wire_names[w];
      out << '\n';
    }
  }
  out << "END\n";
  if (out_perm && !out_perm->is_identity()) {
    out << "# out-perm:";
    for (std::size_t i = 0; i < out_perm->size(); ++i) out << ' ' << out_perm->image[i];
    out << '\n';
  }
}

inline std::vector<std::string> default_wire_names(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back("q" + std::to_string(i));
  return names;
}

}  // namespace cnot

#pragma once

#include "mlqls/circuit.hpp"

#include <cctype>
#include <charconv>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace mlqls {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Statement {
  std::string text;
  std::size_t line;
};

/// Splits on ';' with comments removed, remembering the line each statement starts on.
inline std::vector<Statement> split_statements(std::string_view src) {
  std::vector<Statement> out;
  std::string cur;
  std::size_t line = 1, start_line = 1;
  bool in_line_comment = false;
  for (std::size_t i = 0; i < src.size(); ++i) {
    char ch = src[i];
    if (in_line_comment) {
      if (ch == '\n') {
        in_line_comment = false;
        ++line;
      }
      continue;
    }
    if (ch == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      in_line_comment = true;
      continue;
    }
    if (ch == '\n') ++line;
    if (trim(cur).empty() && !std::isspace(static_cast<unsigned char>(ch))) start_line = line;
    if (ch == ';') {
      out.push_back({std::string(trim(cur)), start_line});
      cur.clear();
      continue;
    }
    if (ch == '{' || ch == '}') {
      throw ParseError(line, "unsupported construct: gate definitions and blocks");
    }
    cur.push_back(ch);
  }
  if (!trim(cur).empty()) throw ParseError(start_line, "missing ';' at end of statement");
  return out;
}

}  // namespace detail

/// Parses the OpenQASM 2.0 subset used by layout synthesis benchmarks: a
/// single quantum register, one- and two-qubit gates, `barrier`, and
/// trailing measurements. Gates other than these are opaque; their names
/// (including parameter lists) are kept verbatim.
inline Circuit parse_qasm(std::string_view text) {
  using detail::trim;
  auto statements = detail::split_statements(text);

  std::string qreg;
  int nq = -1;
  Circuit c;
  bool measured = false;

  auto parse_operand = [&](std::string_view op, std::size_t line) -> std::vector<Qubit> {
    op = trim(op);
    auto lb = op.find('[');
    std::string_view reg = trim(op.substr(0, lb));
    if (nq < 0) throw ParseError(line, "gate before qreg declaration");
    if (reg != qreg) throw ParseError(line, "unknown register '" + std::string(reg) + "'");
    if (lb == std::string_view::npos) {
      std::vector<Qubit> all(static_cast<std::size_t>(nq));
      for (int i = 0; i < nq; ++i) all[i] = i;
      return all;
    }
    auto rb = op.find(']', lb);
    if (rb == std::string_view::npos || !trim(op.substr(rb + 1)).empty()) {
      throw ParseError(line, "malformed operand '" + std::string(op) + "'");
    }
    std::string_view idx = trim(op.substr(lb + 1, rb - lb - 1));
    int v = -1;
    auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), v);
    if (ec != std::errc() || ptr != idx.data() + idx.size()) {
      throw ParseError(line, "bad qubit index '" + std::string(idx) + "'");
    }
    if (v < 0 || v >= nq) throw ParseError(line, "qubit index " + std::to_string(v) + " out of range");
    return {v};
  };

  for (const auto& [raw, line] : statements) {
    std::string_view st = trim(raw);
    if (st.empty()) continue;
    if (st.starts_with("OPENQASM")) continue;
    if (st.starts_with("include")) continue;
    if (st.starts_with("qreg")) {
      if (nq >= 0) throw ParseError(line, "multiple quantum registers are not supported");
      std::string_view decl = trim(st.substr(4));
      auto lb = decl.find('['), rb = decl.find(']');
      if (lb == std::string_view::npos || rb == std::string_view::npos || rb < lb) {
        throw ParseError(line, "malformed qreg declaration");
      }
      qreg = std::string(trim(decl.substr(0, lb)));
      std::string_view size = trim(decl.substr(lb + 1, rb - lb - 1));
      auto [ptr, ec] = std::from_chars(size.data(), size.data() + size.size(), nq);
      if (ec != std::errc() || nq < 0) throw ParseError(line, "bad register size");
      c = Circuit(nq);
      continue;
    }
    if (st.starts_with("creg")) continue;
    if (st.starts_with("barrier")) continue;
    if (st.starts_with("measure")) {
      measured = true;
      continue;
    }
    if (st.starts_with("if") && (st.size() == 2 || st[2] == ' ' || st[2] == '(')) {
      throw ParseError(line, "unsupported construct: classical control");
    }
    for (std::string_view kw : {"gate", "opaque", "reset"}) {
      if (st.starts_with(kw) && (st.size() == kw.size() || std::isspace(static_cast<unsigned char>(st[kw.size()])))) {
        throw ParseError(line, "unsupported construct: " + std::string(kw));
      }
    }

    // name[(params)] operand[, operand]
    std::size_t name_end = 0;
    int depth = 0;
    while (name_end < st.size()) {
      char ch = st[name_end];
      if (ch == '(') ++depth;
      if (ch == ')') --depth;
      if (depth == 0 && std::isspace(static_cast<unsigned char>(ch))) break;
      ++name_end;
    }
    std::string name(trim(st.substr(0, name_end)));
    std::string_view args = trim(st.substr(name_end));
    if (name.empty() || args.empty()) throw ParseError(line, "syntax error in '" + std::string(st) + "'");
    if (!std::isalpha(static_cast<unsigned char>(name[0]))) {
      throw ParseError(line, "syntax error in '" + std::string(st) + "'");
    }
    if (measured) throw ParseError(line, "unsupported construct: mid-circuit measurement");

    std::vector<std::vector<Qubit>> operands;
    std::size_t pos = 0;
    while (pos <= args.size()) {
      auto comma = args.find(',', pos);
      std::string_view op = args.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
      operands.push_back(parse_operand(op, line));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (operands.size() > 2) throw ParseError(line, "unsupported construct: gate on 3 or more qubits");
    if (operands.size() == 1) {
      for (Qubit q : operands[0]) c.add_gate(name, q);
    } else {
      if (operands[0].size() != 1 || operands[1].size() != 1) {
        throw ParseError(line, "register broadcast is only supported for single-qubit gates");
      }
      if (operands[0][0] == operands[1][0]) throw ParseError(line, "duplicate operands");
      c.add_gate(name, operands[0][0], operands[1][0]);
    }
  }
  if (nq < 0) throw ParseError(1, "no qreg declaration");
  return c;
}

/// OpenQASM 2.0 text for `c` over register `q`.
inline std::string to_qasm(const Circuit& c) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" << c.num_qubits() << "];\n";
  for (const Gate& g : c.gates()) {
    out << g.name << " q[" << g.qubits[0] << "]";
    if (g.two_qubit()) out << ",q[" << g.qubits[1] << "]";
    out << ";\n";
  }
  return out.str();
}

}  // namespace mlqls

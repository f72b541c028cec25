#pragma once

#include "mlqls/circuit.hpp"
#include "mlqls/device.hpp"
#include "mlqls/solution.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace mlqls {

using json = nlohmann::json;

// Circuit: {"num_qubits": n, "commutable": bool, "gates": [{"name": s, "qubits": [..]}],
//           "dependencies": [[from, to], ...]}   (dependencies optional)
inline json circuit_to_json(const Circuit& c) {
  json gates = json::array();
  for (const Gate& g : c.gates()) {
    json qs = json::array();
    for (Qubit q : g.targets()) qs.push_back(q);
    gates.push_back({{"name", g.name}, {"qubits", std::move(qs)}});
  }
  json j = {{"num_qubits", c.num_qubits()}, {"commutable", c.commutable()}, {"gates", std::move(gates)}};
  if (c.has_explicit_dependencies()) {
    json deps = json::array();
    for (auto [a, b] : c.explicit_dependencies()) deps.push_back({a, b});
    j["dependencies"] = std::move(deps);
  }
  return j;
}

inline Circuit circuit_from_json(const json& j) {
  try {
    Circuit c(j.at("num_qubits").get<int>(), j.value("commutable", false));
    for (const auto& g : j.at("gates")) {
      const auto& qs = g.at("qubits");
      std::string name = g.value("name", qs.size() == 2 ? "cx" : "u");
      if (qs.size() == 1) {
        c.add_gate(name, qs[0].get<Qubit>());
      } else if (qs.size() == 2) {
        c.add_gate(name, qs[0].get<Qubit>(), qs[1].get<Qubit>());
      } else {
        throw InvalidInput("gate with " + std::to_string(qs.size()) + " qubits");
      }
    }
    if (j.contains("dependencies")) {
      std::vector<Dependency> deps;
      for (const auto& d : j.at("dependencies")) deps.emplace_back(d.at(0).get<GateId>(), d.at(1).get<GateId>());
      c.set_dependencies(std::move(deps));
    }
    return c;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("circuit JSON: ") + e.what());
  }
}

// Device: {"name": s, "num_qubits": n, "edges": [[a, b], ...]}
inline json device_to_json(const CouplingGraph& g) {
  json edges = json::array();
  for (auto [a, b] : g.edges()) edges.push_back({a, b});
  return {{"name", g.name()}, {"num_qubits", g.num_physical()}, {"edges", std::move(edges)}};
}

inline CouplingGraph device_from_json(const json& j) {
  try {
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return CouplingGraph(j.at("num_qubits").get<int>(), std::move(edges), j.value("name", "custom"));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("device JSON: ") + e.what());
  }
}

// Solution: {"blocks": [{"mapping": [..]}], "gate_block": [..],
//            "swaps": [{"edge": [a, b], "gap": i}], "swap_count": n, "depth": d}
inline json solution_to_json(const QlsSolution& sol) {
  json blocks = json::array();
  for (const Mapping& m : sol.block_mappings) blocks.push_back({{"mapping", m}});
  json swaps = json::array();
  for (const Swap& s : sol.swaps) swaps.push_back({{"edge", {s.a, s.b}}, {"gap", s.gap}});
  json j = {{"blocks", std::move(blocks)},
            {"gate_block", sol.gate_block},
            {"swaps", std::move(swaps)},
            {"swap_count", sol.swap_count()}};
  if (sol.depth) j["depth"] = *sol.depth;
  return j;
}

inline QlsSolution solution_from_json(const json& j) {
  try {
    QlsSolution sol;
    for (const auto& b : j.at("blocks")) sol.block_mappings.push_back(b.at("mapping").get<Mapping>());
    sol.gate_block = j.at("gate_block").get<std::vector<int>>();
    for (const auto& s : j.at("swaps")) {
      sol.swaps.push_back({s.at("edge").at(0).get<PhysQubit>(), s.at("edge").at(1).get<PhysQubit>(),
                           s.at("gap").get<int>()});
    }
    if (j.contains("depth") && !j["depth"].is_null()) sol.depth = j["depth"].get<int>();
    return sol;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("solution JSON: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

inline json read_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InvalidInput("'" + path + "': " + e.what());
  }
}

}  // namespace mlqls

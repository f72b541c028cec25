#pragma once

#include "mlqls/exact.hpp"
#include "mlqls/flow.hpp"
#include "mlqls/generators.hpp"
#include "mlqls/json_io.hpp"
#include "mlqls/srefine/srefine.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace mlqls {

enum class Mode { srefine, vcycle, exact };

inline std::string mode_name(Mode m) {
  switch (m) {
    case Mode::srefine: return "srefine";
    case Mode::vcycle: return "vcycle";
    case Mode::exact: return "exact";
  }
  return "?";
}

inline Mode parse_mode(std::string_view s) {
  if (s == "srefine") return Mode::srefine;
  if (s == "vcycle") return Mode::vcycle;
  if (s == "exact") return Mode::exact;
  throw InvalidInput("unknown mode '" + std::string(s) + "'");
}

struct BenchSpec {
  std::string suite = "queko";           // queko | qaoa | chain
  std::vector<std::string> devices;       // empty: grid:4 for queko, smallest fitting grid otherwise
  std::vector<int> sizes;                 // queko: depths; qaoa and chain: qubit counts
  int seeds = 5;
  std::uint64_t base_seed = 1;
  std::vector<Mode> modes{Mode::srefine, Mode::vcycle};
  double budget_scale = 0.01;
  double queko_density = 0.5;
  std::string solutions_dir;              // when set, every solution is written here as JSON
};

struct BenchRow {
  std::string suite, circuit, device;
  Mode mode = Mode::srefine;
  std::uint64_t seed = 0;
  int swaps = 0;
  int depth = 0;
  double seconds = 0.0;
};

struct BenchInstance {
  std::string name;
  std::string device_spec;
  CouplingGraph device;
  Circuit circuit;
  std::uint64_t seed;
};

inline std::string smallest_grid_for(int n) {
  int side = 2;
  while (side * side < n) ++side;
  return "grid:" + std::to_string(side);
}

inline std::vector<BenchInstance> bench_instances(const BenchSpec& spec) {
  std::vector<BenchInstance> out;
  if (spec.seeds < 1) throw InvalidInput("bench needs at least one seed");
  if (spec.suite == "queko") {
    std::vector<std::string> devices = spec.devices.empty() ? std::vector<std::string>{"grid:4"} : spec.devices;
    std::vector<int> depths = spec.sizes.empty() ? std::vector<int>{5, 10} : spec.sizes;
    for (const auto& d : devices) {
      CouplingGraph g = make_device(d);
      for (int depth : depths) {
        for (int s = 0; s < spec.seeds; ++s) {
          std::uint64_t seed = spec.base_seed + s;
          auto inst = gen_queko(g, depth, spec.queko_density, seed);
          out.push_back({"queko_d" + std::to_string(depth) + "_s" + std::to_string(seed), d, g,
                         std::move(inst.circuit), seed});
        }
      }
    }
  } else if (spec.suite == "qaoa") {
    std::vector<int> sizes = spec.sizes.empty() ? std::vector<int>{16} : spec.sizes;
    for (int n : sizes) {
      std::string d = spec.devices.empty() ? smallest_grid_for(n) : spec.devices.front();
      CouplingGraph g = make_device(d);
      for (int s = 0; s < spec.seeds; ++s) {
        std::uint64_t seed = spec.base_seed + s;
        out.push_back({"qaoa" + std::to_string(n) + "_s" + std::to_string(seed), d, g, gen_qaoa(n, seed), seed});
      }
    }
  } else if (spec.suite == "chain") {
    std::vector<int> sizes = spec.sizes.empty() ? std::vector<int>{9, 16, 25} : spec.sizes;
    for (int n : sizes) {
      std::string d = spec.devices.empty() ? smallest_grid_for(n) : spec.devices.front();
      CouplingGraph g = make_device(d);
      for (auto [kind, label] : {std::pair{ChainKind::ghz, "ghz"}, std::pair{ChainKind::wstate, "wstate"}}) {
        out.push_back({std::string(label) + std::to_string(n), d, g, gen_chain(kind, n), spec.base_seed});
      }
    }
  } else {
    throw InvalidInput("unknown suite '" + spec.suite + "'");
  }
  return out;
}

/// Runs one instance in one mode. Throws InstanceTooLarge for exact mode on
/// instances past the exact limits.
inline QlsSolution run_mode(const Circuit& c, const CouplingGraph& g, Mode mode, std::uint64_t seed,
                            double budget_scale) {
  switch (mode) {
    case Mode::srefine: {
      SrefineConfig cfg;
      cfg.budget_scale = budget_scale;
      Rng rng = make_rng(seed);
      return srefine_run(c, g, nullptr, cfg, rng).solution;
    }
    case Mode::vcycle: {
      FlowConfig cfg;
      cfg.seed = seed;
      cfg.budget_scale = budget_scale;
      return run_mlqls(c, g, cfg).final;
    }
    case Mode::exact: {
      ExactConfig cfg;
      cfg.seed = seed;
      cfg.post_first_solution_budget = 100.0 * budget_scale;
      return solve_exact(c, g, cfg).solution;
    }
  }
  throw InvalidInput("bad mode");
}

inline std::vector<BenchRow> run_bench(const BenchSpec& spec, std::ostream* log = nullptr) {
  std::vector<BenchRow> rows;
  for (const BenchInstance& inst : bench_instances(spec)) {
    for (Mode mode : spec.modes) {
      Stopwatch sw;
      QlsSolution sol;
      try {
        sol = run_mode(inst.circuit, inst.device, mode, inst.seed, spec.budget_scale);
      } catch (const InstanceTooLarge&) {
        if (log) *log << "skip " << inst.name << " " << mode_name(mode) << ": too large for exact\n";
        continue;
      }
      BenchRow row{spec.suite, inst.name, inst.device_spec, mode, inst.seed, sol.swap_count(),
                   sol.depth.value_or(asap_depth(inst.circuit, inst.device, sol)), sw.seconds()};
      if (log) {
        *log << row.circuit << " " << row.device << " " << mode_name(mode) << " swaps=" << row.swaps
             << " depth=" << row.depth << "\n";
      }
      if (!spec.solutions_dir.empty()) {
        std::filesystem::create_directories(spec.solutions_dir);
        std::string base = spec.solutions_dir + "/" + inst.name + "_" + mode_name(mode);
        for (char& ch : base) {
          if (ch == ':') ch = '-';
        }
        write_file(base + ".solution.json", solution_to_json(sol).dump(2) + "\n");
        write_file(base + ".circuit.json", circuit_to_json(inst.circuit).dump() + "\n");
        write_file(base + ".device.json", device_to_json(inst.device).dump() + "\n");
      }
      rows.push_back(std::move(row));
    }
  }
  std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.suite, a.device, a.circuit, a.mode, a.seed) < std::tie(b.suite, b.device, b.circuit, b.mode, b.seed);
  });
  return rows;
}

/// CSV with header suite,circuit,device,mode,seed,swaps,depth,seconds. The
/// seconds column is omitted when `timing` is false.
inline std::string bench_csv(const std::vector<BenchRow>& rows, bool timing = true) {
  std::ostringstream os;
  os << "suite,circuit,device,mode,seed,swaps,depth";
  if (timing) os << ",seconds";
  os << "\n";
  for (const BenchRow& r : rows) {
    os << r.suite << "," << r.circuit << "," << r.device << "," << mode_name(r.mode) << "," << r.seed << ","
       << r.swaps << "," << r.depth;
    if (timing) os << "," << std::fixed << std::setprecision(3) << r.seconds << std::defaultfloat;
    os << "\n";
  }
  return os.str();
}

/// Geometric mean over instances of (swaps(mode)+1)/(swaps(ref)+1). The +1
/// keeps zero-SWAP instances in the mean. Only instances run in both modes
/// count; returns 1 when there are none.
inline double geo_ratio(const std::vector<BenchRow>& rows, Mode mode, Mode ref) {
  std::map<std::tuple<std::string, std::string, std::uint64_t>, std::pair<int, int>> pairs;
  for (const BenchRow& r : rows) {
    auto& e = pairs.try_emplace({r.device, r.circuit, r.seed}, -1, -1).first->second;
    if (r.mode == mode) e.first = r.swaps;
    if (r.mode == ref) e.second = r.swaps;
  }
  double sum = 0.0;
  int count = 0;
  for (const auto& [key, p] : pairs) {
    if (p.first < 0 || p.second < 0) continue;
    sum += std::log((p.first + 1.0) / (p.second + 1.0));
    ++count;
  }
  return count == 0 ? 1.0 : std::exp(sum / count);
}

/// Markdown table with one row per instance and a SWAP and depth column per
/// mode, followed by each mode's geometric-mean SWAP ratio against the
/// first mode.
inline std::string bench_markdown(const std::vector<BenchRow>& rows, const std::vector<Mode>& modes) {
  std::map<std::pair<std::string, std::string>, std::map<Mode, const BenchRow*>> table;
  for (const BenchRow& r : rows) table[{r.device, r.circuit}][r.mode] = &r;
  std::ostringstream os;
  os << "| device | circuit |";
  for (Mode m : modes) os << " " << mode_name(m) << " swaps | " << mode_name(m) << " depth |";
  os << "\n|---|---|";
  for (std::size_t i = 0; i < modes.size(); ++i) os << "---:|---:|";
  os << "\n";
  for (const auto& [key, per_mode] : table) {
    os << "| " << key.first << " | " << key.second << " |";
    for (Mode m : modes) {
      auto it = per_mode.find(m);
      if (it == per_mode.end()) {
        os << " - | - |";
      } else {
        os << " " << it->second->swaps << " | " << it->second->depth << " |";
      }
    }
    os << "\n";
  }
  if (!modes.empty()) {
    os << "| Geo. Ratio (vs " << mode_name(modes.front()) << ") | |";
    for (Mode m : modes) os << " " << std::fixed << std::setprecision(2) << geo_ratio(rows, m, modes.front()) << " | |";
    os << "\n";
  }
  return os.str();
}

}  // namespace mlqls

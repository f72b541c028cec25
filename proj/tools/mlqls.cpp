// Command-line front end: compile one circuit, verify a solution, or run a
// benchmark suite.

#include "mlqls/mlqls.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

using namespace mlqls;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

CouplingGraph load_device(const std::string& spec) {
  if (spec.rfind("file:", 0) == 0) return device_from_json(read_json_file(spec.substr(5)));
  return make_device(spec);
}

Circuit load_circuit(const std::string& path) {
  std::string text = read_file(path);
  if (std::filesystem::path(path).extension() == ".json") return circuit_from_json(json::parse(text));
  return parse_qasm(text);
}

// queko:DEPTH[:DENSITY] | qaoa:N | chain:ghz:N | chain:wstate:N
Circuit generate(const std::string& spec, const CouplingGraph& g, std::uint64_t seed) {
  auto parts = split(spec, ':');
  if (parts[0] == "queko" && (parts.size() == 2 || parts.size() == 3)) {
    double density = parts.size() == 3 ? std::stod(parts[2]) : 0.5;
    return gen_queko(g, std::stoi(parts[1]), density, seed).circuit;
  }
  if (parts[0] == "qaoa" && parts.size() == 2) return gen_qaoa(std::stoi(parts[1]), seed);
  if (parts[0] == "chain" && parts.size() == 3) {
    if (parts[1] == "ghz") return gen_chain(ChainKind::ghz, std::stoi(parts[2]));
    if (parts[1] == "wstate") return gen_chain(ChainKind::wstate, std::stoi(parts[2]));
  }
  throw InvalidInput("bad generator spec '" + spec + "'");
}

struct CompileArgs {
  std::string device, circuit, gen, mode = "vcycle", solution, dump_levels, out, report, emit_circuit;
  std::uint64_t seed = 1;
  bool commutable = false;
  FlowConfig flow;
  double exact_budget = 0.0;
};

int cmd_compile(CompileArgs& a) {
  CouplingGraph g = load_device(a.device);
  Circuit c = a.circuit.empty() ? generate(a.gen, g, a.seed) : load_circuit(a.circuit);
  if (a.commutable) c.set_commutable(true);
  if (!a.emit_circuit.empty()) {
    bool as_json = std::filesystem::path(a.emit_circuit).extension() == ".json";
    write_file(a.emit_circuit, as_json ? circuit_to_json(c).dump(2) + "\n" : to_qasm(c));
  }
  if (c.num_qubits() > g.num_physical()) {
    throw InvalidInput("infeasible: " + std::to_string(c.num_qubits()) + " program qubits on a " +
                       std::to_string(g.num_physical()) + "-qubit device");
  }

  if (a.mode == "verify") {
    if (a.solution.empty()) throw InvalidInput("--mode verify needs --solution");
    QlsSolution sol = solution_from_json(read_json_file(a.solution));
    VerifyReport rep = verify(c, g, sol);
    std::cout << rep.summary();
    if (!rep.ok()) return 1;
    std::cout << "swaps=" << sol.swap_count() << " depth=" << asap_depth(c, g, sol) << "\n";
    return 0;
  }

  FlowConfig& cfg = a.flow;
  cfg.seed = a.seed;
  cfg.srefine.budget_scale = cfg.budget_scale;
  Stopwatch sw;
  QlsSolution sol;
  std::string extra;
  if (a.mode == "srefine") {
    Rng rng = make_rng(a.seed);
    sol = srefine_run(c, g, nullptr, cfg.srefine, rng).solution;
  } else if (a.mode == "exact") {
    ExactConfig ec = cfg.exact;
    ec.seed = a.seed;
    ec.max_qubits = cfg.coarsest_qubit_limit;
    ec.max_gates = cfg.coarsest_gate_limit;
    ec.post_first_solution_budget = a.exact_budget > 0 ? a.exact_budget : 100.0 * cfg.budget_scale;
    ExactResult er = solve_exact(c, g, ec);
    sol = std::move(er.solution);
    extra = er.proven_optimal ? " optimal=yes" : " optimal=no";
  } else if (a.mode == "vcycle") {
    FlowResult fr = run_mlqls(c, g, cfg);
    sol = fr.final;
    extra = " initial_swaps=" + std::to_string(fr.initial.swap_count()) +
            " levels=" + std::to_string(fr.levels.depth());
    if (!a.dump_levels.empty()) write_file(a.dump_levels, hierarchy_to_json(fr.levels).dump(2) + "\n");
    if (!a.report.empty()) write_file(a.report, flow_result_to_json(fr).dump(2) + "\n");
  } else {
    throw InvalidInput("unknown mode '" + a.mode + "'");
  }
  const double secs = sw.seconds();

  VerifyReport rep = verify(c, g, sol);
  if (!rep.ok()) {
    std::cerr << "internal error:\n" << rep.summary();
    return 1;
  }
  const int depth = sol.depth.value_or(asap_depth(c, g, sol));
  if (!a.out.empty()) write_file(a.out, solution_to_json(sol).dump(2) + "\n");
  std::cout << "mode=" << a.mode << " device=" << g.name() << " qubits=" << c.num_qubits()
            << " gates=" << c.size() << " swaps=" << sol.swap_count() << " depth=" << depth << extra
            << " time=" << secs << "s\n";
  return 0;
}

struct BenchArgs {
  BenchSpec spec;
  std::vector<std::string> modes{"srefine", "vcycle"};
  std::string csv, markdown;
  bool no_timing = false;
};

int cmd_bench(BenchArgs& a) {
  a.spec.modes.clear();
  for (const auto& m : a.modes) a.spec.modes.push_back(parse_mode(m));
  auto rows = run_bench(a.spec, &std::cerr);
  std::string csv = bench_csv(rows, !a.no_timing);
  if (a.csv.empty()) {
    std::cout << csv;
  } else {
    write_file(a.csv, csv);
  }
  std::string md = bench_markdown(rows, a.spec.modes);
  if (a.markdown.empty()) {
    std::cerr << md;
  } else {
    write_file(a.markdown, md);
  }
  return 0;
}

void add_tuning(CLI::App* app, FlowConfig& f, double& exact_budget) {
  auto& s = f.srefine;
  app->add_option("--budget-scale", f.budget_scale, "scale on the 1000 s / 100 s time limits")->capture_default_str();
  app->add_option("--candidates", s.num_candidates, "initial mapping candidates")->capture_default_str();
  app->add_option("--alpha", s.fb.astar.alpha, "A* lookahead weight")->capture_default_str();
  app->add_option("--beta", s.fb.astar.beta, "A* related-qubit weight")->capture_default_str();
  app->add_option("--gamma", s.fb.astar.gamma, "A* unexecuted-gate weight")->capture_default_str();
  app->add_option("--state-threshold", s.fb.astar.state_threshold, "open states before trimming")->capture_default_str();
  app->add_option("--trim-keep", s.fb.astar.trim_keep, "states kept by a trim")->capture_default_str();
  app->add_option("--region-escape-prob", s.fb.astar.region_escape_prob, "chance to expand an out-of-region SWAP")
      ->capture_default_str();
  app->add_option("--max-expansions", s.fb.astar.max_expansions, "A* expansions before going greedy (0: auto)")
      ->capture_default_str();
  app->add_option("--max-passes", s.fb.max_passes, "forward/backward pass cap")->capture_default_str();
  app->add_option("--sa-decay", s.sa.gate_weight_decay, "gate weight decay per dependency level")->capture_default_str();
  app->add_option("--sa-iterations", s.sa.iterations, "annealing moves (0: 50*|Q|^2)")->capture_default_str();
  app->add_option("--sa-initial-temp", s.sa.initial_temp, "start temperature (0: calibrated)")->capture_default_str();
  app->add_option("--sa-cooling", s.sa.cooling, "per-move cooling factor (0: auto)")->capture_default_str();
  app->add_option("--sa-region-bias", s.sa.region_bias, "chance of an out-of-region proposal")->capture_default_str();
  app->add_option("--mapper-qubit-limit", s.mapper_qubit_limit, "InitialMapper only below this size")
      ->capture_default_str();
  app->add_option("--vcycles", f.num_vcycles, "V cycles after stage one")->capture_default_str();
  app->add_option("--coarsest-qubits", f.coarsest_qubit_limit, "exact solver qubit limit")->capture_default_str();
  app->add_option("--coarsest-gates", f.coarsest_gate_limit, "exact solver gate limit")->capture_default_str();
  app->add_option("--min-shrink", f.min_shrink, "stop coarsening below this shrink rate")->capture_default_str();
  app->add_flag("--regions-all-blocks", f.interpolate.all_blocks, "regions from every coarse block");
  app->add_option("--affinity-decay", f.cluster.affinity_decay, "depth-weighted affinity (0: plain counts)")
      ->capture_default_str();
  app->add_option("--exact-budget", exact_budget, "exact-mode search seconds (0: 100 * budget scale)")
      ->capture_default_str();
  app->add_flag("!--no-symmetry", f.exact.symmetry_breaking, "disable automorphism symmetry breaking");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilevel quantum layout synthesis"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option values");

  CompileArgs ca;
  CLI::App* compile = app.add_subcommand("compile", "synthesize or verify one layout");
  compile->add_option("--device", ca.device, "grid:N | grid:RxC | path:N | sycamore | eagle | ourense | file:PATH")
      ->required();
  auto* circ = compile->add_option("--circuit", ca.circuit, "OpenQASM 2.0 or circuit JSON file");
  auto* gen = compile->add_option("--gen", ca.gen, "queko:DEPTH[:DENSITY] | qaoa:N | chain:ghz:N | chain:wstate:N");
  circ->excludes(gen);
  gen->excludes(circ);
  compile->add_option("--mode", ca.mode, "srefine | vcycle | exact | verify")
      ->check(CLI::IsMember({"srefine", "vcycle", "exact", "verify"}))
      ->capture_default_str();
  compile->add_option("--solution", ca.solution, "solution JSON to check in verify mode");
  compile->add_option("--seed", ca.seed, "random seed (also seeds --gen)")->capture_default_str();
  compile->add_option("--out", ca.out, "write the solution JSON here");
  compile->add_option("--report", ca.report, "write per-stage flow statistics JSON here (vcycle)");
  compile->add_option("--dump-levels", ca.dump_levels, "write the level hierarchy JSON here (vcycle)");
  compile->add_option("--emit-circuit", ca.emit_circuit, "write the input circuit (.qasm or .json)");
  compile->add_flag("--commutable", ca.commutable, "treat all gates as mutually commuting");
  add_tuning(compile, ca.flow, ca.exact_budget);

  BenchArgs ba;
  CLI::App* bench = app.add_subcommand("bench", "run a benchmark suite");
  bench->add_option("--suite", ba.spec.suite, "queko | qaoa | chain")
      ->check(CLI::IsMember({"queko", "qaoa", "chain"}))
      ->capture_default_str();
  bench->add_option("--device", ba.spec.devices, "device specs (default depends on the suite)");
  bench->add_option("--sizes", ba.spec.sizes, "queko depths, or qubit counts for qaoa/chain");
  bench->add_option("--seeds", ba.spec.seeds, "seeds per size")->capture_default_str();
  bench->add_option("--base-seed", ba.spec.base_seed, "first seed")->capture_default_str();
  bench->add_option("--modes", ba.modes, "modes to run")->capture_default_str();
  bench->add_option("--budget-scale", ba.spec.budget_scale, "scale on the time limits")->capture_default_str();
  bench->add_option("--density", ba.spec.queko_density, "QUEKO two-qubit gate density")->capture_default_str();
  bench->add_option("--csv", ba.csv, "CSV output path (default stdout)");
  bench->add_option("--markdown", ba.markdown, "Markdown table path (default stderr)");
  bench->add_option("--solutions-dir", ba.spec.solutions_dir, "write every instance and solution as JSON here");
  bench->add_flag("--no-timing", ba.no_timing, "omit the seconds column");

  CLI11_PARSE(app, argc, argv);
  try {
    if (compile->parsed()) {
      if (ca.circuit.empty() && ca.gen.empty()) throw InvalidInput("one of --circuit or --gen is required");
      return cmd_compile(ca);
    }
    return cmd_bench(ba);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}

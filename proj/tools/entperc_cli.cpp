// entperc: command-line front end for sweeps, threshold tables and single
// pair runs.
//
// Exit codes: 0 ok, 1 config error, 2 runtime failure, 3 threshold self-check.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "entperc/experiment.hpp"

namespace {

using namespace entperc;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;
constexpr int kThresholdMismatch = 3;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string format;
  int workers = 1;
  std::optional<int> samples;
  std::optional<int> max_improve;
};

struct TopologyFlags {
  std::string kind = "diagonal-square";
  int rows = 6;
  int cols = 6;
  double lambda = 0.5;
};

void apply_globals(ExperimentConfig& cfg, const Globals& g) {
  if (g.seed) cfg.master_seed = *g.seed;
  if (!g.output.empty()) cfg.output = g.output;
  if (!g.format.empty()) cfg.format = parse_output_format(g.format);
  if (g.samples || g.max_improve) {
    // Overriding the budget rescales the default relaxation schedule.
    const int samples = g.samples.value_or(cfg.heuristics.samples);
    const int improve = g.max_improve.value_or(cfg.heuristics.max_improve_iterations);
    cfg.heuristics = HeuristicParams::with_default_schedule(samples, improve);
  }
}

QuantumNetwork network_from(const TopologyFlags& t, const std::string& network_file) {
  if (!network_file.empty()) {
    std::ifstream in(network_file);
    if (!in) throw ConfigError("cannot open network file '" + network_file + "'");
    return read_network(in);
  }
  auto net = build_topology({parse_topology_kind(t.kind), t.rows, t.cols});
  assign(net, {DisorderMode::Uniform, t.lambda, 0.0, 0});
  return net;
}

void print_log(std::ostream& os, const QuantumNetwork& net, const PathSolution& s) {
  for (const auto& op : s.log) {
    os << (op.kind == Operation::Kind::Swap ? "swap   " : "distill");
    for (const auto in : op.inputs) os << ' ' << index(in);
    const auto& l = net.link(op.output);
    os << " -> " << index(op.output) << " (" << index(l.u) << '-' << index(l.v)
       << ", lambda " << detail::format_double(l.lambda.value(), 9) << ")\n";
  }
}

int run_sweep(const std::string& config_path, const Globals& g, bool disorder) {
  auto cfg = parse_config_file(config_path);
  apply_globals(cfg, g);
  if (cfg.output.empty()) throw ConfigError("no output path (set [run] output or --output)");
  const auto records = disorder ? run_disorder_sweep(cfg, g.workers) : run_uniform_sweep(cfg, g.workers);
  emit(records, cfg.format, cfg.output);
  std::cerr << records.size() << " records -> " << cfg.output << '\n';
  return kOk;
}

int run_thresholds() {
  bool ok = true;
  std::printf("%-10s %-34s %-12s %-10s %s\n", "name", "expression", "threshold", "published",
              "|delta|");
  for (const auto& row : threshold_table()) {
    const auto delta = row.delta();
    if (delta && *delta >= 1e-3) ok = false;
    std::printf("%-10s %-34s %-12.6f %-10s %s\n", row.name.c_str(), row.expression.c_str(),
                row.solved, row.published ? detail::format_double(*row.published, 6).c_str() : "-",
                delta ? detail::format_double(*delta, 3).c_str() : "-");
  }
  return ok ? kOk : kThresholdMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement percolation on quantum networks"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--output,-o", g.output, "Output path");
  app.add_option("--format", g.format, "csv or json-lines");
  app.add_option("--workers,-j", g.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--samples", g.samples, "Heuristic samples per pair")->check(CLI::PositiveNumber);
  app.add_option("--max-improve-iters", g.max_improve, "Improvement attempts per hop link")
      ->check(CLI::NonNegativeNumber);

  std::string config_path;
  auto* sweep = app.add_subcommand("sweep", "Uniform-lambda sweep from a config file");
  sweep->add_option("config", config_path, "Config file")->required();
  auto* dsweep = app.add_subcommand("disorder-sweep", "Disorder ensemble sweep from a config file");
  dsweep->add_option("config", config_path, "Config file")->required();

  app.add_subcommand("thresholds", "Threshold table of the strategy catalog");

  TopologyFlags topo;
  auto add_topology_flags = [&topo](CLI::App* sub) {
    sub->add_option("--kind", topo.kind, "square, diagonal-square, honeycomb, fully-connected-honeycomb");
    sub->add_option("--rows", topo.rows);
    sub->add_option("--cols", topo.cols);
    sub->add_option("--lambda", topo.lambda, "Uniform Schmidt value");
  };
  auto* topology = app.add_subcommand("topology", "Write a generated network");
  add_topology_flags(topology);

  std::string network_file;
  int source = 0;
  int target = 1;
  auto* pair = app.add_subcommand("pair", "Route one pair and print the operation log");
  add_topology_flags(pair);
  pair->add_option("--network", network_file, "Network file (overrides topology flags)");
  pair->add_option("--source", source)->required();
  pair->add_option("--target", target)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*sweep) return run_sweep(config_path, g, false);
    if (*dsweep) return run_sweep(config_path, g, true);
    if (app.got_subcommand("thresholds")) return run_thresholds();
    if (*topology) {
      const auto net = network_from(topo, "");
      if (g.output.empty()) {
        write_network(std::cout, net);
      } else {
        std::ofstream out(g.output);
        if (!out) throw IoError("cannot write '" + g.output + "'");
        write_network(out, net);
      }
      return kOk;
    }
    if (*pair) {
      auto net = network_from(topo, network_file);
      if (source < 0 || target < 0 || static_cast<std::size_t>(source) >= net.node_count() ||
          static_cast<std::size_t>(target) >= net.node_count() || source == target) {
        throw ConfigError("invalid source/target");
      }
      auto params = HeuristicParams::with_default_schedule(g.samples.value_or(600),
                                                           g.max_improve.value_or(10));
      const auto report = sample_and_select_report(net, node_id(static_cast<std::size_t>(source)),
                                                   node_id(static_cast<std::size_t>(target)),
                                                   params, g.seed.value_or(0));
      const auto& s = report.selected;
      print_log(std::cout, net, s);
      std::cout << "sample " << s.sample_index;
      if (s.combined_with) std::cout << " + " << *s.combined_with;
      std::cout << (s.failed() ? " failed" : "") << ", final lambda "
                << detail::format_double(s.final_lambda.value(), 12) << ", destroyed "
                << s.destroyed << '\n';
      return s.failed() ? kRuntimeError : kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

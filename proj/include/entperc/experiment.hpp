#pragma once

// Batch experiments: config files, uniform and disorder sweeps over
// (grid point, network sample, node pair), and deterministic CSV / JSON-lines
// output.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "entperc/disorder.hpp"
#include "entperc/engine.hpp"
#include "entperc/metrics.hpp"
#include "entperc/strategy.hpp"
#include "entperc/topology.hpp"

namespace entperc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, JsonLines };

inline std::string_view to_string(OutputFormat f) {
  return f == OutputFormat::Csv ? "csv" : "json-lines";
}

inline OutputFormat parse_output_format(std::string_view s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json-lines" || s == "jsonl") return OutputFormat::JsonLines;
  throw ConfigError("unknown output format '" + std::string(s) + "'");
}

struct PairSelection {
  enum class Kind { AllPairs, PerDistanceCap, Explicit };
  Kind kind = Kind::AllPairs;
  int cap = 0;
  std::vector<std::pair<int, int>> pairs;

  friend bool operator==(const PairSelection&, const PairSelection&) = default;
};

struct ExperimentConfig {
  TopologySpec topology;
  // mode and sigma are used; lambda_mean and seed are set per grid point.
  DisorderSpec disorder;
  std::vector<double> lambda_grid;
  std::vector<double> mean_grid;
  int network_samples = 10;
  PairSelection pairs;
  HeuristicParams heuristics = HeuristicParams::with_default_schedule();
  std::uint64_t master_seed = 0;
  std::string output;
  OutputFormat format = OutputFormat::Csv;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// ---------------------------------------------------------------------------
// Config text format
//
//   # comment
//   [section]
//   key = value
//
// Sections and keys:
//   [topology]   kind, rows, cols
//   [disorder]   mode, sigma, network_samples, mean_grid
//   [sweep]      lambda_grid, pairs
//   [heuristics] samples, max_improve_iterations, slack_schedule, distance_schedule
//   [run]        master_seed, output, format
//
// Grids are comma separated values or start:stop:step (inclusive stop); a
// missing grid defaults to 0.5:0.85:0.005.
// pairs is `all`, `per-distance-cap N` or `explicit u-v u-v ...`.
// Schedules are comma separated `begin-end:value` stages over [begin, end).

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string format_double(double v, int digits = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline double parse_double(const std::string& s, const std::string& ctx) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(ctx + ": expected a number, got '" + s + "'");
  }
}

inline long long parse_int(const std::string& s, const std::string& ctx) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(ctx + ": expected an integer, got '" + s + "'");
  }
}

inline std::uint64_t parse_u64(const std::string& s, const std::string& ctx) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size() || s.starts_with('-')) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(ctx + ": expected an unsigned integer, got '" + s + "'");
  }
}

/// Grid points start + i*step, rounded to 1e-12 so that textual and
/// generated grids coincide.
inline std::vector<double> range_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw ConfigError("grid step must be positive");
  std::vector<double> out;
  const auto n = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
  for (long long i = 0; i <= n; ++i) {
    out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
  }
  return out;
}

// Used when a config names no grid.
inline std::vector<double> default_grid() { return range_grid(0.5, 0.85, 0.005); }

inline std::vector<double> parse_grid(const std::string& value, const std::string& ctx) {
  std::vector<double> out;
  if (value.find(':') != std::string::npos) {
    const auto parts = split(value, ':');
    if (parts.size() != 3) throw ConfigError(ctx + ": range must be start:stop:step");
    out = range_grid(parse_double(parts[0], ctx), parse_double(parts[1], ctx),
                     parse_double(parts[2], ctx));
  } else {
    for (const auto& p : split(value, ',')) out.push_back(parse_double(p, ctx));
  }
  return out;
}

inline void validate_grid(const std::vector<double>& grid, const std::string& name) {
  if (grid.empty()) throw ConfigError(name + " is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.5 && grid[i] <= 1.0)) {
      throw ConfigError(name + ": value " + format_double(grid[i]) + " outside [0.5, 1]");
    }
    if (i && !(grid[i] > grid[i - 1])) throw ConfigError(name + " must be strictly increasing");
  }
}

inline std::pair<int, int> parse_range(const std::string& s, const std::string& ctx) {
  const auto dash = s.find('-');
  if (dash == std::string::npos) throw ConfigError(ctx + ": expected begin-end, got '" + s + "'");
  return {static_cast<int>(parse_int(trim(s.substr(0, dash)), ctx)),
          static_cast<int>(parse_int(trim(s.substr(dash + 1)), ctx))};
}

inline std::string grid_to_string(const std::vector<double>& grid) {
  std::string out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i) out += ", ";
    out += format_double(grid[i]);
  }
  return out;
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  cfg.heuristics.slack_schedule.clear();
  cfg.heuristics.distance_schedule.clear();
  bool explicit_schedule = false;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError(where + ": malformed section header");
      section = detail::trim(std::string_view(text).substr(1, text.size() - 2));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const auto key = detail::trim(std::string_view(text).substr(0, eq));
    const auto value = detail::trim(std::string_view(text).substr(eq + 1));
    const std::string ctx = where + " [" + section + "] " + key;

    try {
      if (section == "topology") {
        if (key == "kind") cfg.topology.kind = parse_topology_kind(value);
        else if (key == "rows") cfg.topology.rows = static_cast<int>(detail::parse_int(value, ctx));
        else if (key == "cols") cfg.topology.cols = static_cast<int>(detail::parse_int(value, ctx));
        else throw ConfigError(ctx + ": unknown key");
      } else if (section == "disorder") {
        if (key == "mode") cfg.disorder.mode = parse_disorder_mode(value);
        else if (key == "sigma") cfg.disorder.sigma = detail::parse_double(value, ctx);
        else if (key == "network_samples")
          cfg.network_samples = static_cast<int>(detail::parse_int(value, ctx));
        else if (key == "mean_grid") cfg.mean_grid = detail::parse_grid(value, ctx);
        else throw ConfigError(ctx + ": unknown key");
      } else if (section == "sweep") {
        if (key == "lambda_grid") {
          cfg.lambda_grid = detail::parse_grid(value, ctx);
        } else if (key == "pairs") {
          std::istringstream ps(value);
          std::string kind;
          ps >> kind;
          if (kind == "all") {
            cfg.pairs = {PairSelection::Kind::AllPairs, 0, {}};
          } else if (kind == "per-distance-cap") {
            std::string n;
            ps >> n;
            cfg.pairs = {PairSelection::Kind::PerDistanceCap,
                         static_cast<int>(detail::parse_int(n, ctx)), {}};
          } else if (kind == "explicit") {
            cfg.pairs = {PairSelection::Kind::Explicit, 0, {}};
            std::string item;
            while (ps >> item) cfg.pairs.pairs.push_back(detail::parse_range(item, ctx));
          } else {
            throw ConfigError(ctx + ": unknown pair selection '" + kind + "'");
          }
        } else {
          throw ConfigError(ctx + ": unknown key");
        }
      } else if (section == "heuristics") {
        if (key == "samples") {
          cfg.heuristics.samples = static_cast<int>(detail::parse_int(value, ctx));
        } else if (key == "max_improve_iterations") {
          cfg.heuristics.max_improve_iterations = static_cast<int>(detail::parse_int(value, ctx));
        } else if (key == "slack_schedule") {
          explicit_schedule = true;
          for (const auto& stage : detail::split(value, ',')) {
            const auto colon = stage.find(':');
            if (colon == std::string::npos) throw ConfigError(ctx + ": expected begin-end:slack");
            const auto [b, e] = detail::parse_range(stage.substr(0, colon), ctx);
            cfg.heuristics.slack_schedule.push_back(
                {b, e, detail::parse_double(detail::trim(stage.substr(colon + 1)), ctx)});
          }
        } else if (key == "distance_schedule") {
          explicit_schedule = true;
          for (const auto& stage : detail::split(value, ',')) {
            const auto colon = stage.find(':');
            if (colon == std::string::npos) throw ConfigError(ctx + ": expected begin-end:mode");
            const auto [b, e] = detail::parse_range(stage.substr(0, colon), ctx);
            cfg.heuristics.distance_schedule.push_back(
                {b, e, parse_distance_mode(detail::trim(stage.substr(colon + 1)))});
          }
        } else {
          throw ConfigError(ctx + ": unknown key");
        }
      } else if (section == "run") {
        if (key == "master_seed") cfg.master_seed = detail::parse_u64(value, ctx);
        else if (key == "output") cfg.output = value;
        else if (key == "format") cfg.format = parse_output_format(value);
        else throw ConfigError(ctx + ": unknown key");
      } else {
        throw ConfigError(ctx + ": unknown section '" + section + "'");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(ctx + ": " + e.what());
    }
  }
  if (cfg.lambda_grid.empty()) cfg.lambda_grid = detail::default_grid();
  if (cfg.mean_grid.empty()) cfg.mean_grid = detail::default_grid();
  if (!explicit_schedule) {
    const auto p = HeuristicParams::with_default_schedule(cfg.heuristics.samples,
                                                          cfg.heuristics.max_improve_iterations);
    cfg.heuristics.slack_schedule = p.slack_schedule;
    cfg.heuristics.distance_schedule = p.distance_schedule;
  }
  return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

/// Canonical text form; parse_config(to_config_text(c)) == c.
inline std::string to_config_text(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "[topology]\n"
     << "kind = " << to_string(cfg.topology.kind) << '\n'
     << "rows = " << cfg.topology.rows << '\n'
     << "cols = " << cfg.topology.cols << '\n'
     << "\n[disorder]\n"
     << "mode = " << to_string(cfg.disorder.mode) << '\n'
     << "sigma = " << detail::format_double(cfg.disorder.sigma) << '\n'
     << "network_samples = " << cfg.network_samples << '\n';
  if (!cfg.mean_grid.empty()) os << "mean_grid = " << detail::grid_to_string(cfg.mean_grid) << '\n';
  os << "\n[sweep]\n";
  if (!cfg.lambda_grid.empty())
    os << "lambda_grid = " << detail::grid_to_string(cfg.lambda_grid) << '\n';
  os << "pairs = ";
  switch (cfg.pairs.kind) {
    case PairSelection::Kind::AllPairs: os << "all"; break;
    case PairSelection::Kind::PerDistanceCap: os << "per-distance-cap " << cfg.pairs.cap; break;
    case PairSelection::Kind::Explicit:
      os << "explicit";
      for (const auto& [u, v] : cfg.pairs.pairs) os << ' ' << u << '-' << v;
      break;
  }
  os << "\n\n[heuristics]\n"
     << "samples = " << cfg.heuristics.samples << '\n'
     << "max_improve_iterations = " << cfg.heuristics.max_improve_iterations << '\n'
     << "slack_schedule = ";
  for (std::size_t i = 0; i < cfg.heuristics.slack_schedule.size(); ++i) {
    const auto& s = cfg.heuristics.slack_schedule[i];
    os << (i ? ", " : "") << s.begin << '-' << s.end << ':' << detail::format_double(s.slack);
  }
  os << "\ndistance_schedule = ";
  for (std::size_t i = 0; i < cfg.heuristics.distance_schedule.size(); ++i) {
    const auto& s = cfg.heuristics.distance_schedule[i];
    os << (i ? ", " : "") << s.begin << '-' << s.end << ':' << to_string(s.mode);
  }
  os << "\n\n[run]\n"
     << "master_seed = " << cfg.master_seed << '\n';
  if (!cfg.output.empty()) os << "output = " << cfg.output << '\n';
  os << "format = " << to_string(cfg.format) << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Records

struct SweepRecord {
  TopologySpec topology;
  DisorderMode mode = DisorderMode::Uniform;
  double lambda_mean = 0.5;
  double sigma = 0.0;
  int network_sample = 0;
  int source = 0;
  int target = 0;
  int distance = 1;
  double final_lambda = 0.5;
  double entanglement = 1.0;
  std::size_t destroyed = 1;
  double integrity = 1.0;
  double connectivity = 1.0;
  bool failed = false;
  std::uint64_t seed = 0;
};

struct AggregateRecord {
  double lambda_mean;
  double sigma;
  int distance;
  double mean_entanglement;
  double mean_integrity;
  double mean_connectivity;
  std::size_t count;
};

inline bool record_order(const SweepRecord& a, const SweepRecord& b) {
  return std::tie(a.lambda_mean, a.network_sample, a.distance, a.source, a.target) <
         std::tie(b.lambda_mean, b.network_sample, b.distance, b.source, b.target);
}

/// Per-(lambda_mean, sigma, distance) means over pairs and network samples.
inline std::vector<AggregateRecord> aggregate(const std::vector<SweepRecord>& records) {
  std::map<std::tuple<double, double>, std::vector<PairOutcome>> groups;
  for (const auto& r : records) {
    groups[{r.lambda_mean, r.sigma}].push_back(
        {node_id(static_cast<std::size_t>(r.source)), node_id(static_cast<std::size_t>(r.target)),
         r.distance, SchmidtValue(r.final_lambda), r.destroyed, r.failed});
  }
  std::vector<AggregateRecord> out;
  for (const auto& [key, outcomes] : groups) {
    for (const auto& [d, agg] : aggregate_by_distance(outcomes)) {
      out.push_back({std::get<0>(key), std::get<1>(key), d, agg.mean_entanglement,
                     agg.mean_integrity, agg.mean_connectivity, agg.count});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pair selection

struct NodePair {
  NodeId source;
  NodeId target;
  int distance;
};

inline constexpr std::int64_t kPairStream = 0x7061697273;     // "pairs"
inline constexpr std::int64_t kDisorderStream = 0x646973;     // "dis"
inline constexpr std::int64_t kEngineStream = 0x656e67;       // "eng"

inline std::vector<NodePair> select_pairs(const QuantumNetwork& net, const PairSelection& sel,
                                          std::uint64_t master_seed) {
  const DistanceTable dist(net);
  std::vector<NodePair> out;
  if (sel.kind == PairSelection::Kind::Explicit) {
    for (const auto& [u, v] : sel.pairs) {
      if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= net.node_count() ||
          static_cast<std::size_t>(v) >= net.node_count() || u == v) {
        throw ConfigError("explicit pair " + std::to_string(u) + "-" + std::to_string(v) +
                          " is invalid");
      }
      const auto a = node_id(static_cast<std::size_t>(u));
      const auto b = node_id(static_cast<std::size_t>(v));
      if (dist(a, b) < 0) throw ConfigError("explicit pair is disconnected");
      out.push_back({a, b, dist(a, b)});
    }
  } else {
    std::map<int, std::vector<NodePair>> by_distance;
    for (std::size_t u = 0; u < net.node_count(); ++u)
      for (std::size_t v = u + 1; v < net.node_count(); ++v) {
        const int d = dist(node_id(u), node_id(v));
        if (d > 0) by_distance[d].push_back({node_id(u), node_id(v), d});
      }
    for (auto& [d, pairs] : by_distance) {
      if (sel.kind == PairSelection::Kind::PerDistanceCap &&
          pairs.size() > static_cast<std::size_t>(std::max(sel.cap, 0))) {
        Rng rng(derive_seed(master_seed, {kPairStream, d}));
        for (std::size_t i = pairs.size() - 1; i > 0; --i) std::swap(pairs[i], pairs[rng.index(i + 1)]);
        pairs.resize(static_cast<std::size_t>(std::max(sel.cap, 0)));
        std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
          return std::tie(a.source, a.target) < std::tie(b.source, b.target);
        });
      }
      out.insert(out.end(), pairs.begin(), pairs.end());
    }
  }
  if (out.empty()) throw ConfigError("pair selection is empty");
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

namespace detail {

struct GridPoint {
  double lambda_mean;
  int network_sample;
  std::size_t grid_index;
};

template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  const auto n = static_cast<std::size_t>(std::max(1, workers));
  if (n == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(0, i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < std::min(n, count); ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(w, i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

inline std::vector<SweepRecord> run_points(const ExperimentConfig& cfg,
                                           const std::vector<GridPoint>& points, double sigma,
                                           DisorderMode mode, int workers) {
  cfg.heuristics.validate();
  const QuantumNetwork base = build_topology(cfg.topology);
  const auto pairs = select_pairs(base, cfg.pairs, cfg.master_seed);

  // Schmidt values per grid point, drawn up front so workers share them.
  std::vector<std::vector<double>> values;
  values.reserve(points.size());
  for (const auto& p : points) {
    DisorderSpec spec{mode, p.lambda_mean, sigma,
                      derive_seed(cfg.master_seed, {kDisorderStream,
                                                    static_cast<std::int64_t>(p.grid_index),
                                                    p.network_sample})};
    values.push_back(sample_schmidt_values(spec, base.original_count()));
  }

  const std::size_t items = points.size() * pairs.size();
  std::vector<SweepRecord> records(items);
  const auto n_workers = static_cast<std::size_t>(std::max(1, workers));
  std::vector<std::optional<QuantumNetwork>> nets(n_workers);
  std::vector<std::size_t> loaded(n_workers, static_cast<std::size_t>(-1));

  parallel_for(items, workers, [&](std::size_t w, std::size_t item) {
    const std::size_t pi = item / pairs.size();
    const auto& point = points[pi];
    const auto& pair = pairs[item % pairs.size()];
    if (!nets[w]) nets[w].emplace(base);
    auto& net = *nets[w];
    if (loaded[w] != pi) {
      net.rollback(QuantumNetwork::Checkpoint{net.checkpoint().network_token,
                                              net.original_count(), 0});
      for (std::size_t i = 0; i < values[pi].size(); ++i)
        net.set_original_lambda(link_id(i), SchmidtValue(values[pi][i]));
      loaded[w] = pi;
    }
    const auto pristine = net.checkpoint();
    const std::uint64_t seed =
        derive_seed(cfg.master_seed, {kEngineStream, point.network_sample});
    const auto sol = sample_and_select(net, pair.source, pair.target, cfg.heuristics, seed);
    net.rollback(pristine);

    PairOutcome o{pair.source, pair.target, pair.distance, sol.final_lambda, sol.destroyed,
                  sol.failed()};
    SweepRecord r;
    r.topology = cfg.topology;
    r.mode = mode;
    r.lambda_mean = point.lambda_mean;
    r.sigma = sigma;
    r.network_sample = point.network_sample;
    r.source = static_cast<int>(index(pair.source));
    r.target = static_cast<int>(index(pair.target));
    r.distance = pair.distance;
    r.final_lambda = sol.final_lambda.value();
    r.entanglement = outcome_entanglement(o);
    r.destroyed = sol.destroyed;
    r.integrity = integrity(o);
    r.connectivity = connectivity(o);
    r.failed = sol.failed();
    r.seed = seed;
    records[item] = r;
  });
  std::sort(records.begin(), records.end(), record_order);
  return records;
}

}  // namespace detail

/// Every pair at every uniform lambda of the grid.
inline std::vector<SweepRecord> run_uniform_sweep(const ExperimentConfig& cfg, int workers = 1) {
  detail::validate_grid(cfg.lambda_grid, "lambda_grid");
  std::vector<detail::GridPoint> points;
  for (std::size_t i = 0; i < cfg.lambda_grid.size(); ++i)
    points.push_back({cfg.lambda_grid[i], 0, i});
  return detail::run_points(cfg, points, 0.0, DisorderMode::Uniform, workers);
}

/// Every pair on network_samples disorder draws per mean of the grid.
inline std::vector<SweepRecord> run_disorder_sweep(const ExperimentConfig& cfg, int workers = 1) {
  detail::validate_grid(cfg.mean_grid, "mean_grid");
  if (cfg.network_samples < 1) throw ConfigError("network_samples must be positive");
  if (!(cfg.disorder.sigma >= 0.0)) throw ConfigError("sigma must be non-negative");
  std::vector<detail::GridPoint> points;
  for (std::size_t i = 0; i < cfg.mean_grid.size(); ++i)
    for (int j = 0; j < cfg.network_samples; ++j) points.push_back({cfg.mean_grid[i], j, i});
  return detail::run_points(cfg, points, cfg.disorder.sigma, cfg.disorder.mode, workers);
}

// ---------------------------------------------------------------------------
// Output

inline constexpr std::string_view kRecordHeader =
    "topology,rows,cols,mode,lambda_mean,sigma,network_sample,source,target,distance,"
    "final_lambda,entanglement,destroyed,integrity,connectivity,failed,seed";

inline constexpr std::string_view kAggregateHeader =
    "lambda_mean,sigma,distance,mean_entanglement,mean_integrity,mean_connectivity,count";

inline void write_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  using detail::format_double;
  os << kRecordHeader << '\n';
  for (const auto& r : records) {
    os << to_string(r.topology.kind) << ',' << r.topology.rows << ',' << r.topology.cols << ','
       << to_string(r.mode) << ',' << format_double(r.lambda_mean, 9) << ','
       << format_double(r.sigma, 9) << ',' << r.network_sample << ',' << r.source << ','
       << r.target << ',' << r.distance << ',' << format_double(r.final_lambda, 9) << ','
       << format_double(r.entanglement, 9) << ',' << r.destroyed << ','
       << format_double(r.integrity, 9) << ',' << format_double(r.connectivity, 9) << ','
       << (r.failed ? 1 : 0) << ',' << r.seed << '\n';
  }
}

inline void write_json_lines(std::ostream& os, const std::vector<SweepRecord>& records) {
  using detail::format_double;
  for (const auto& r : records) {
    os << "{\"topology\":\"" << to_string(r.topology.kind) << "\",\"rows\":" << r.topology.rows
       << ",\"cols\":" << r.topology.cols << ",\"mode\":\"" << to_string(r.mode)
       << "\",\"lambda_mean\":" << format_double(r.lambda_mean, 9)
       << ",\"sigma\":" << format_double(r.sigma, 9) << ",\"network_sample\":" << r.network_sample
       << ",\"source\":" << r.source << ",\"target\":" << r.target
       << ",\"distance\":" << r.distance << ",\"final_lambda\":" << format_double(r.final_lambda, 9)
       << ",\"entanglement\":" << format_double(r.entanglement, 9)
       << ",\"destroyed\":" << r.destroyed << ",\"integrity\":" << format_double(r.integrity, 9)
       << ",\"connectivity\":" << format_double(r.connectivity, 9)
       << ",\"failed\":" << (r.failed ? "true" : "false") << ",\"seed\":" << r.seed << "}\n";
  }
}

inline void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRecord>& rows) {
  using detail::format_double;
  os << kAggregateHeader << '\n';
  for (const auto& a : rows) {
    os << format_double(a.lambda_mean, 9) << ',' << format_double(a.sigma, 9) << ','
       << a.distance << ',' << format_double(a.mean_entanglement, 9) << ','
       << format_double(a.mean_integrity, 9) << ',' << format_double(a.mean_connectivity, 9)
       << ',' << a.count << '\n';
  }
}

/// Sibling path of the aggregate table: out.csv -> out.agg.csv.
inline std::filesystem::path aggregate_path(const std::filesystem::path& output) {
  auto p = output;
  p.replace_extension(".agg.csv");
  return p;
}

/// Writes records to `path` and the per-distance aggregate to its sibling.
inline void emit(const std::vector<SweepRecord>& records, OutputFormat format,
                 const std::filesystem::path& path) {
  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + p.string() + "'");
    return out;
  };
  {
    auto out = open(path);
    if (format == OutputFormat::Csv) write_csv(out, records);
    else write_json_lines(out, records);
    if (!out) throw IoError("write failed for '" + path.string() + "'");
  }
  auto out = open(aggregate_path(path));
  write_aggregate_csv(out, aggregate(records));
  if (!out) throw IoError("write failed for '" + aggregate_path(path).string() + "'");
}

// ---------------------------------------------------------------------------
// Threshold table

struct ThresholdRow {
  std::string name;
  std::string expression;
  double solved;
  std::optional<double> published;
  [[nodiscard]] std::optional<double> delta() const {
    if (!published) return std::nullopt;
    return std::abs(solved - *published);
  }
};

inline std::vector<ThresholdRow> threshold_table() {
  std::vector<ThresholdRow> rows;
  for (const auto& e : standard_catalog()) {
    rows.push_back({e.name, e.expr.to_string(), solve_threshold(e.expr), e.published_threshold});
  }
  return rows;
}

}  // namespace entperc

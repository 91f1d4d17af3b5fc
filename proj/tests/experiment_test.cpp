#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "entperc/experiment.hpp"
#include "json.hpp"

using namespace entperc;
namespace fs = std::filesystem;

namespace {

const char* kConfig = R"(# small test sweep
[topology]
kind = diagonal-square
rows = 3
cols = 3

[disorder]
mode = truncated-normal
sigma = 0.05
network_samples = 2
mean_grid = 0.6, 0.7

[sweep]
lambda_grid = 0.6:0.7:0.05
pairs = all

[heuristics]
samples = 6
max_improve_iterations = 3

[run]
master_seed = 17
format = csv
)";

ExperimentConfig config() {
  std::istringstream in(kConfig);
  return parse_config(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "entperc_test";
  fs::create_directories(dir);
  return dir / name;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ENTPERC_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, Parse) {
  const auto cfg = config();
  EXPECT_EQ(cfg.topology, (TopologySpec{TopologyKind::DiagonalSquare, 3, 3}));
  EXPECT_EQ(cfg.disorder.mode, DisorderMode::TruncatedNormal);
  EXPECT_DOUBLE_EQ(cfg.disorder.sigma, 0.05);
  EXPECT_EQ(cfg.network_samples, 2);
  EXPECT_EQ(cfg.lambda_grid, (std::vector<double>{0.6, 0.65, 0.7}));
  EXPECT_EQ(cfg.pairs.kind, PairSelection::Kind::AllPairs);
  EXPECT_EQ(cfg.heuristics, HeuristicParams::with_default_schedule(6, 3));
  EXPECT_EQ(cfg.master_seed, 17u);
}

TEST(Config, MissingGridsUseDefault) {
  std::istringstream in("[topology]\nkind = square\nrows = 2\ncols = 2\n");
  const auto cfg = parse_config(in);
  ASSERT_EQ(cfg.lambda_grid.size(), 71u);
  EXPECT_EQ(cfg.lambda_grid.front(), 0.5);
  EXPECT_EQ(cfg.lambda_grid.back(), 0.85);
  EXPECT_EQ(cfg.mean_grid, cfg.lambda_grid);
}

TEST(Config, RangeGrid) {
  const auto g = detail::range_grid(0.60, 0.76, 0.0025);
  ASSERT_EQ(g.size(), 65u);
  EXPECT_DOUBLE_EQ(g.front(), 0.6);
  EXPECT_DOUBLE_EQ(g[20], 0.65);
  EXPECT_DOUBLE_EQ(g.back(), 0.76);
}

TEST(Config, RoundTrip) {
  auto cfg = config();
  cfg.pairs = {PairSelection::Kind::Explicit, 0, {{0, 8}, {2, 6}}};
  cfg.output = "out/run.csv";
  cfg.format = OutputFormat::JsonLines;
  cfg.lambda_grid = detail::range_grid(0.6, 0.76, 0.0025);
  const auto text = to_config_text(cfg);
  std::istringstream in(text);
  const auto back = parse_config(in);
  EXPECT_EQ(back, cfg);
  EXPECT_EQ(to_config_text(back), text);

  cfg.pairs = {PairSelection::Kind::PerDistanceCap, 4, {}};
  cfg.heuristics.slack_schedule = {{0, 3, 0.0}, {3, 6, 0.125}};
  std::istringstream in2(to_config_text(cfg));
  EXPECT_EQ(parse_config(in2), cfg);
}

TEST(Config, ErrorsCarryLineAndKey) {
  auto expect_error = [](const std::string& text, const std::string& fragment) {
    std::istringstream in(text);
    try {
      parse_config(in);
      FAIL() << "no error for: " << text;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  expect_error("[topology]\nrows = x\n", "line 2 [topology] rows");
  expect_error("[topology]\nkind = torus\n", "line 2 [topology] kind");
  expect_error("[nowhere]\nkey = 1\n", "unknown section");
  expect_error("[run]\nmaster_seed = -4\n", "master_seed");
  expect_error("[sweep]\npairs = some\n", "pair selection");
  expect_error("[sweep]\nlambda_grid\n", "line 2");
}

TEST(Config, GridValidation) {
  auto cfg = config();
  cfg.lambda_grid = {0.6, 0.6};
  EXPECT_THROW(run_uniform_sweep(cfg), ConfigError);
  cfg.lambda_grid = {0.4, 0.6};
  EXPECT_THROW(run_uniform_sweep(cfg), ConfigError);
  cfg.lambda_grid = {};
  EXPECT_THROW(run_uniform_sweep(cfg), ConfigError);
}

TEST(Pairs, Selection) {
  const auto net = build_topology({TopologyKind::DiagonalSquare, 4, 4});
  EXPECT_EQ(select_pairs(net, {PairSelection::Kind::AllPairs, 0, {}}, 1).size(), 120u);

  const auto capped = select_pairs(net, {PairSelection::Kind::PerDistanceCap, 5, {}}, 1);
  std::map<int, int> per;
  for (const auto& p : capped) ++per[p.distance];
  EXPECT_EQ(per.size(), 3u);
  for (const auto& [d, n] : per) EXPECT_LE(n, 5);
  const auto again = select_pairs(net, {PairSelection::Kind::PerDistanceCap, 5, {}}, 1);
  ASSERT_EQ(again.size(), capped.size());
  for (std::size_t i = 0; i < capped.size(); ++i) EXPECT_EQ(again[i].source, capped[i].source);

  const auto explicit_pairs = select_pairs(net, {PairSelection::Kind::Explicit, 0, {{0, 15}}}, 1);
  ASSERT_EQ(explicit_pairs.size(), 1u);
  EXPECT_EQ(explicit_pairs[0].distance, 3);
  EXPECT_THROW(select_pairs(net, {PairSelection::Kind::Explicit, 0, {}}, 1), ConfigError);
  EXPECT_THROW(select_pairs(net, {PairSelection::Kind::Explicit, 0, {{0, 16}}}, 1), ConfigError);
  EXPECT_THROW(select_pairs(net, {PairSelection::Kind::PerDistanceCap, 0, {}}, 1), ConfigError);
}

TEST(Sweep, PerfectNetworkIsPerfect) {
  for (auto kind : {TopologyKind::Square, TopologyKind::Honeycomb}) {
    auto cfg = config();
    cfg.topology = {kind, 2, 3};
    cfg.lambda_grid = {0.5};
    for (const auto& r : run_uniform_sweep(cfg)) {
      EXPECT_EQ(r.entanglement, 1.0);
      EXPECT_EQ(r.integrity, 1.0);
      EXPECT_EQ(r.connectivity, 1.0);
    }
  }
}

TEST(Sweep, RecordCountsAndOrder) {
  const auto cfg = config();
  const auto uniform = run_uniform_sweep(cfg);
  EXPECT_EQ(uniform.size(), 3u * 36u);
  EXPECT_TRUE(std::is_sorted(uniform.begin(), uniform.end(), record_order));
  const auto disorder = run_disorder_sweep(cfg);
  EXPECT_EQ(disorder.size(), 2u * 2u * 36u);
  for (const auto& r : disorder) EXPECT_DOUBLE_EQ(r.sigma, 0.05);
}

TEST(Sweep, ZeroSigmaReproducesUniform) {
  auto cfg = config();
  cfg.disorder.sigma = 0.0;
  cfg.network_samples = 1;
  cfg.mean_grid = cfg.lambda_grid;
  const auto u = run_uniform_sweep(cfg);
  const auto d = run_disorder_sweep(cfg);
  ASSERT_EQ(u.size(), d.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    EXPECT_EQ(u[i].lambda_mean, d[i].lambda_mean);
    EXPECT_EQ(u[i].source, d[i].source);
    EXPECT_EQ(u[i].target, d[i].target);
    EXPECT_EQ(u[i].final_lambda, d[i].final_lambda);
    EXPECT_EQ(u[i].destroyed, d[i].destroyed);
    EXPECT_EQ(u[i].seed, d[i].seed);
  }
}

TEST(Sweep, SeedsIndependentOfLambda) {
  const auto records = run_uniform_sweep(config());
  std::map<std::pair<int, int>, std::uint64_t> seeds;
  for (const auto& r : records) {
    auto [it, fresh] = seeds.emplace(std::pair{r.source, r.target}, r.seed);
    EXPECT_EQ(it->second, r.seed);
  }
}

TEST(Emit, ByteIdenticalAcrossRunsAndWorkers) {
  const auto cfg = config();
  const auto a = scratch("a.csv"), b = scratch("b.csv"), c = scratch("c.csv");
  emit(run_uniform_sweep(cfg, 1), OutputFormat::Csv, a);
  emit(run_uniform_sweep(cfg, 1), OutputFormat::Csv, b);
  emit(run_uniform_sweep(cfg, 3), OutputFormat::Csv, c);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a), slurp(c));
  EXPECT_EQ(slurp(aggregate_path(a)), slurp(aggregate_path(c)));

  const auto da = scratch("da.csv"), dc = scratch("dc.csv");
  emit(run_disorder_sweep(cfg, 1), OutputFormat::Csv, da);
  emit(run_disorder_sweep(cfg, 4), OutputFormat::Csv, dc);
  EXPECT_EQ(slurp(da), slurp(dc));
}

TEST(Emit, CsvLayout) {
  const auto path = scratch("layout.csv");
  emit(run_uniform_sweep(config()), OutputFormat::Csv, path);
  std::istringstream in(slurp(path));
  std::string header, row;
  std::getline(in, header);
  EXPECT_EQ(header, kRecordHeader);
  std::getline(in, row);
  EXPECT_EQ(row.rfind("diagonal-square,3,3,uniform,0.6,0,0,0,1,1,", 0), 0u) << row;

  EXPECT_EQ(aggregate_path(path).filename(), "layout.agg.csv");
  std::istringstream agg(slurp(aggregate_path(path)));
  std::getline(agg, header);
  EXPECT_EQ(header, kAggregateHeader);
  int rows = 0;
  while (std::getline(agg, row)) ++rows;
  EXPECT_EQ(rows, 3 * 2);  // grid points x distance classes
}

TEST(Emit, JsonLines) {
  const auto path = scratch("records.jsonl");
  const auto records = run_uniform_sweep(config());
  emit(records, OutputFormat::JsonLines, path);
  std::istringstream in(slurp(path));
  std::string line;
  std::size_t n = 0;
  std::string header(kRecordHeader);
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    std::size_t fields = 0;
    for (std::size_t pos = 0; pos != std::string::npos;) {
      const auto next = header.find(',', pos);
      const auto key = header.substr(pos, next == std::string::npos ? next : next - pos);
      EXPECT_TRUE(j.contains(key)) << key;
      ++fields;
      pos = next == std::string::npos ? next : next + 1;
    }
    EXPECT_EQ(j.size(), fields);
    ++n;
  }
  EXPECT_EQ(n, records.size());
}

TEST(Emit, UnwritablePath) {
  EXPECT_THROW(emit(run_uniform_sweep(config()), OutputFormat::Csv, "/nonexistent/dir/out.csv"),
               IoError);
}

TEST(Thresholds, Table) {
  const auto rows = threshold_table();
  ASSERT_EQ(rows.size(), standard_catalog().size());
  for (const auto& r : rows)
    if (r.delta()) {
      EXPECT_LT(*r.delta(), 1e-3) << r.name;
    }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("thresholds"), 0);
  EXPECT_EQ(run_cli("bogus"), 1);

  const auto cfg_path = scratch("cli.cfg");
  {
    std::ofstream out(cfg_path);
    out << kConfig;
  }
  const auto out = scratch("cli_out.csv");
  EXPECT_EQ(run_cli("sweep " + cfg_path.string() + " --output " + out.string() + " -j 2"), 0);
  EXPECT_TRUE(fs::exists(out));
  EXPECT_TRUE(fs::exists(aggregate_path(out)));
  EXPECT_EQ(run_cli("sweep " + cfg_path.string() + " --output /nonexistent/dir/x.csv"), 2);

  const auto broken = scratch("broken.cfg");
  {
    std::ofstream o(broken);
    o << "[topology]\nrows = many\n";
  }
  EXPECT_EQ(run_cli("sweep " + broken.string() + " --output " + out.string()), 1);
  EXPECT_EQ(run_cli("pair --kind square --rows 3 --cols 3 --source 0 --target 8 --samples 6"), 0);
}

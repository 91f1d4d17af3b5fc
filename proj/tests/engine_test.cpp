#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "entperc/engine.hpp"
#include "entperc/topology.hpp"

using namespace entperc;

namespace {

SchmidtValue S(double x) { return SchmidtValue(x); }
NodeId N(int i) { return node_id(static_cast<std::size_t>(i)); }

// The 7-node example: S, N1..N5, T.
enum : int { kS = 0, kN1, kN2, kN3, kN4, kN5, kT };

QuantumNetwork seven_node_network() {
  const Edge edges[] = {
      {N(kS), N(kN1), S(0.75)},  {N(kS), N(kN2), S(0.58)},  {N(kS), N(kN3), S(0.8)},
      {N(kN1), N(kN3), S(0.8)},  {N(kN2), N(kN3), S(0.7)},  {N(kN1), N(kN4), S(0.7)},
      {N(kN3), N(kN4), S(0.5)},  {N(kN2), N(kN5), S(0.6)},  {N(kN3), N(kN5), S(0.65)},
      {N(kN4), N(kT), S(0.6)},   {N(kN5), N(kT), S(0.6)},
  };
  return QuantumNetwork(7, edges);
}

std::vector<NodeId> nodes(std::initializer_list<int> ids) {
  std::vector<NodeId> out;
  for (int i : ids) out.push_back(N(i));
  return out;
}

HeuristicParams params(int samples) { return HeuristicParams::with_default_schedule(samples, 10); }

}  // namespace

TEST(LocalResources, SevenNodeSourceToN3) {
  const auto net = seven_node_network();
  const auto res = enumerate_local_resources(net, N(kS), N(kN3));
  ASSERT_EQ(res.size(), 3u);
  std::multiset<double> values;
  for (const auto& r : res) values.insert(std::round(r.lambda.value() * 1e9) / 1e9);
  const std::multiset<double> expect{
      0.8, std::round(swap(S(0.75), S(0.8)).value() * 1e9) / 1e9,
      std::round(swap(S(0.58), S(0.7)).value() * 1e9) / 1e9};
  EXPECT_EQ(values, expect);
  EXPECT_THROW(enumerate_local_resources(net, N(kS), N(kT)), std::invalid_argument);
  EXPECT_THROW(enumerate_local_resources(net, N(kS), N(kS)), std::invalid_argument);
}

TEST(LocalResources, SoleDirectLink) {
  const Edge e[] = {{N(0), N(1), S(0.6)}};
  const QuantumNetwork net(2, e);
  const auto res = enumerate_local_resources(net, N(0), N(1));
  ASSERT_EQ(res.size(), 1u);
  EXPECT_EQ(res[0].kind, LocalResource::Kind::Direct);
}

// On a bare 3x3 grid, distance-2 resources are exactly the two-link paths,
// counted here by brute force over node triples.
TEST(LocalResources, GridTwoHopPathsMatchBruteForce) {
  const auto net = build_topology({TopologyKind::Square, 3, 3});
  auto adjacent = [&](int a, int b) { return !net.links_between(N(a), N(b)).empty(); };
  for (int u = 0; u < 9; ++u)
    for (int v = 0; v < 9; ++v) {
      if (u == v || net.hop_distance(N(u), N(v)) != 2) continue;
      int paths = 0;
      for (int w = 0; w < 9; ++w) paths += w != u && w != v && adjacent(u, w) && adjacent(w, v);
      const auto res = enumerate_local_resources(net, N(u), N(v));
      EXPECT_EQ(static_cast<int>(res.size()), paths);
      for (const auto& r : res) EXPECT_EQ(r.kind, LocalResource::Kind::SwapPath);
    }
}

TEST(LocalStrategy, SevenNodeCaptions) {
  const auto net = seven_node_network();
  const auto n1 = best_local_strategy(net, N(kS), N(kN1));
  EXPECT_NEAR(n1->final_lambda.value(), 0.663, 5e-4);
  const auto n2 = best_local_strategy(net, N(kS), N(kN2));
  EXPECT_DOUBLE_EQ(n2->final_lambda.value(), 0.5);
  EXPECT_EQ(n2->destroyed, 3u);
  const auto n3 = best_local_strategy(net, N(kS), N(kN3));
  EXPECT_DOUBLE_EQ(n3->final_lambda.value(), 0.5);
  EXPECT_EQ(n3->destroyed, 5u);
  EXPECT_NEAR(best_local_strategy(net, N(kS), N(kN4))->final_lambda.value(), 0.6432, 5e-4);
  EXPECT_NEAR(best_local_strategy(net, N(kS), N(kN5))->final_lambda.value(), 0.516, 5e-4);
  EXPECT_EQ(best_local_strategy(net, N(kS), N(kN4))->destroyed, 4u);
  EXPECT_EQ(best_local_strategy(net, N(kS), N(kN5))->destroyed, 4u);
}

TEST(LocalStrategy, ApplyMatchesPrediction) {
  auto net = seven_node_network();
  const auto sol = *best_local_strategy(net, N(kS), N(kN3));
  std::vector<Operation> log;
  const auto id = apply_local_solution(net, sol, &log);
  EXPECT_DOUBLE_EQ(net.link(id).lambda.value(), 0.5);
  EXPECT_EQ(net.link(id).origin.size(), 5u);
  EXPECT_EQ(log.size(), 3u);  // two swaps and a distillation
}

TEST(LocalStrategy, PerfectDirectLink) {
  const Edge e[] = {{N(0), N(1), S(0.5)}};
  const QuantumNetwork net(2, e);
  const auto sol = best_local_strategy(net, N(0), N(1));
  EXPECT_DOUBLE_EQ(sol->final_lambda.value(), 0.5);
  EXPECT_EQ(sol->destroyed, 1u);
}

TEST(Route, AdjacentPerfectLinkNeedsNoOperations) {
  auto net = build_topology({TopologyKind::Square, 2, 2});
  Rng rng(1);
  const auto s = route(net, N(0), N(1), params(3), 0, rng);
  EXPECT_TRUE(s.log.empty());
  EXPECT_DOUBLE_EQ(s.final_lambda.value(), 0.5);
  EXPECT_EQ(s.destroyed, 1u);
}

TEST(Route, GreedyRunIsImperfect) {
  auto net = seven_node_network();
  Rng rng(1);
  const auto s = route(net, N(kS), N(kT), params(3), 0, rng);
  EXPECT_EQ(s.hop_nodes, nodes({kS, kN2, kN5, kT}));
  EXPECT_GT(s.final_lambda.value(), 0.5);
  EXPECT_DOUBLE_EQ(s.final_lambda.value(), swap(S(0.6), S(0.6)).value());

  const auto improved = improve_path(net, s, params(3), rng);
  ASSERT_EQ(improved.hop_links.size(), 3u);
  EXPECT_DOUBLE_EQ(net.link(improved.hop_links[2]).lambda.value(), 0.5);  // N5-T
  EXPECT_GT(net.link(improved.hop_links[1]).lambda.value(), 0.5);        // N2-N5
  EXPECT_NEAR(improved.final_lambda.value(), 0.6, 1e-12);
  EXPECT_LT(improved.final_lambda.value(), s.final_lambda.value());
}

TEST(Route, ImproveOnConsumedPathIsNoOp) {
  std::vector<Edge> edges;
  for (int i = 0; i < 4; ++i) edges.push_back({N(i), N(i + 1), S(0.7)});
  QuantumNetwork net(5, edges);
  Rng rng(2);
  const auto s = route(net, N(0), N(4), params(3), 0, rng);
  const auto improved = improve_path(net, s, params(3), rng);
  EXPECT_EQ(improved.final_lambda.value(), s.final_lambda.value());
  EXPECT_EQ(improved.destroyed, 4u);
  EXPECT_EQ(improved.log.size(), s.log.size());
}

TEST(SampleAndSelect, SevenNodeRelaxationFindsPerfectRoute) {
  auto net = seven_node_network();
  const auto report = sample_and_select_report(net, N(kS), N(kT), params(60), 2024);
  const auto& sel = report.selected;
  EXPECT_EQ(sel.final_lambda.value(), 0.5);
  EXPECT_EQ(sel.hop_nodes, nodes({kS, kN3, kT}));
  EXPECT_EQ(sel.destroyed, 9u);
  // Greedy samples went through N2 and ended imperfect.
  const auto& first = report.samples.front();
  EXPECT_EQ(first.hop_nodes, nodes({kS, kN2, kN5, kT}));
  EXPECT_GT(first.final_lambda, 0.5);
  EXPECT_LT(first.sample_index, sel.sample_index);
}

TEST(SampleAndSelect, NetworkHoldsSelectedSolution) {
  auto net = seven_node_network();
  const auto sel = sample_and_select(net, N(kS), N(kT), params(30), 5);
  ASSERT_FALSE(sel.failed());
  const auto& l = net.link(*sel.final_link);
  EXPECT_TRUE(l.alive);
  EXPECT_EQ(l.lambda.value(), sel.final_lambda.value());
  EXPECT_EQ(net.consumed_original_count(), sel.destroyed);
  // The log replays to the same link on a fresh copy.
  auto fresh = seven_node_network();
  std::vector<std::pair<LinkId, LinkId>> remap;
  LinkId last{};
  for (const auto& op : sel.log) last = fresh.replay(op, remap);
  EXPECT_EQ(fresh.link(last).lambda.value(), sel.final_lambda.value());
  EXPECT_EQ(fresh.link(last).origin, l.origin);
}

TEST(SampleAndSelect, PerfectNetworkUsesSwapChain) {
  for (auto kind : {TopologyKind::Square, TopologyKind::DiagonalSquare, TopologyKind::Honeycomb,
                    TopologyKind::FullyConnectedHoneycomb}) {
    auto net = build_topology({kind, 3, 3});
    const auto last = N(static_cast<int>(net.node_count()) - 1);
    const int d = *net.hop_distance(N(0), last);
    const auto s = sample_and_select(net, N(0), last, params(9), 1);
    EXPECT_EQ(s.final_lambda.value(), 0.5);
    EXPECT_EQ(s.destroyed, static_cast<std::size_t>(d));
  }
}

TEST(SampleAndSelect, CombinesDisjointImperfectSamples) {
  // Two disjoint three-link chains A-x1-x2-B and A-y1-y2-B, each worth 0.7.
  enum : int { A = 0, X1, X2, Y1, Y2, B };
  const Edge edges[] = {{N(A), N(X1), S(0.7)}, {N(X1), N(X2), S(0.5)}, {N(X2), N(B), S(0.5)},
                        {N(A), N(Y1), S(0.7)}, {N(Y1), N(Y2), S(0.5)}, {N(Y2), N(B), S(0.5)}};
  QuantumNetwork net(6, edges);
  const auto report = sample_and_select_report(net, N(A), N(B), params(30), 3);
  // Strict walks always finish on one chain. Relaxed walks may swap through B
  // and strand themselves, which is a legitimate dead end.
  for (const auto& s : report.samples) {
    if (s.sample_index < 10) {
      EXPECT_FALSE(s.failed);
    }
    if (!s.failed) {
      EXPECT_NEAR(s.final_lambda, 0.7, 1e-12);
    }
  }
  const auto& sel = report.selected;
  EXPECT_TRUE(sel.combined_with.has_value());
  EXPECT_EQ(sel.final_lambda.value(), 0.5);
  EXPECT_EQ(sel.destroyed, 6u);
}

TEST(SampleAndSelect, DeterministicUnderSeed) {
  auto a = build_topology({TopologyKind::DiagonalSquare, 4, 4});
  auto b = build_topology({TopologyKind::DiagonalSquare, 4, 4});
  assign(a, {DisorderMode::TruncatedNormal, 0.7, 0.05, 8});
  assign(b, {DisorderMode::TruncatedNormal, 0.7, 0.05, 8});
  const auto sa = sample_and_select(a, N(0), N(15), params(30), 99);
  const auto sb = sample_and_select(b, N(0), N(15), params(30), 99);
  EXPECT_EQ(sa.final_lambda.value(), sb.final_lambda.value());
  EXPECT_EQ(sa.destroyed, sb.destroyed);
  EXPECT_EQ(sa.hop_nodes, sb.hop_nodes);
  EXPECT_EQ(sa.log.size(), sb.log.size());
}

TEST(SampleAndSelect, UnreachableTargetFails) {
  const Edge edges[] = {{N(0), N(1), S(0.6)}, {N(2), N(3), S(0.6)}};
  QuantumNetwork net(4, edges);
  const auto s = sample_and_select(net, N(0), N(3), params(3), 1);
  EXPECT_TRUE(s.failed());
  EXPECT_EQ(s.entanglement(), 0.0);
  EXPECT_TRUE(net.is_pristine());
}

TEST(HeuristicParams, Schedules) {
  const auto p = HeuristicParams::with_default_schedule(150, 10);
  EXPECT_EQ(p.mode_for(0), DistanceMode::Strict);
  EXPECT_EQ(p.mode_for(50), DistanceMode::AllowEqual);
  EXPECT_EQ(p.mode_for(149), DistanceMode::AllowPlusOne);
  EXPECT_DOUBLE_EQ(p.slack_for(49), 0.0);
  EXPECT_DOUBLE_EQ(p.slack_for(100), 0.05);
  EXPECT_THROW((void)p.slack_for(150), std::invalid_argument);
  HeuristicParams bad = p;
  bad.samples = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

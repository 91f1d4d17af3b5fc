#pragma once

// Heuristic entanglement routing between two distant stations.
//
// A route hops from the source towards the target. At each hop every station
// within two links is a candidate; the best local strategy (direct links and
// two-link swap paths, distilled together) to each candidate is evaluated and
// one of the best candidates is applied. At the target the per-hop links are
// swapped into one source-target link. Non-maximal hop links are then improved
// by routing around them and distilling. Many samples with progressively
// relaxed choice rules are drawn and the best outcome is kept.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "entperc/disorder.hpp"
#include "entperc/network.hpp"
#include "entperc/schmidt.hpp"
#include "entperc/tolerance.hpp"

namespace entperc {

// ---------------------------------------------------------------------------
// Parameters

enum class DistanceMode { Strict, AllowEqual, AllowPlusOne };

inline std::string_view to_string(DistanceMode m) {
  switch (m) {
    case DistanceMode::Strict: return "strict";
    case DistanceMode::AllowEqual: return "allow-equal";
    case DistanceMode::AllowPlusOne: return "allow-plus-one";
  }
  return "?";
}

inline DistanceMode parse_distance_mode(std::string_view s) {
  for (auto m : {DistanceMode::Strict, DistanceMode::AllowEqual, DistanceMode::AllowPlusOne})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown distance mode '" + std::string(s) + "'");
}

struct SlackStage {
  int begin;  // sample range [begin, end)
  int end;
  double slack;
  friend bool operator==(const SlackStage&, const SlackStage&) = default;
};

struct DistanceStage {
  int begin;
  int end;
  DistanceMode mode;
  friend bool operator==(const DistanceStage&, const DistanceStage&) = default;
};

struct HeuristicParams {
  int samples = 600;
  int max_improve_iterations = 10;
  std::vector<SlackStage> slack_schedule;
  std::vector<DistanceStage> distance_schedule;

  /// Thirds of the sample budget: strict/0, allow-equal/0.02, allow-plus-one/0.05.
  static HeuristicParams with_default_schedule(int samples = 600, int max_improve = 10) {
    HeuristicParams p;
    p.samples = samples;
    p.max_improve_iterations = max_improve;
    const int a = samples / 3;
    const int b = 2 * samples / 3;
    p.slack_schedule = {{0, a, 0.0}, {a, b, 0.02}, {b, samples, 0.05}};
    p.distance_schedule = {{0, a, DistanceMode::Strict},
                           {a, b, DistanceMode::AllowEqual},
                           {b, samples, DistanceMode::AllowPlusOne}};
    return p;
  }

  void validate() const {
    if (samples < 1) throw std::invalid_argument("heuristics: samples must be positive");
    if (max_improve_iterations < 0) {
      throw std::invalid_argument("heuristics: negative max_improve_iterations");
    }
    for (int i = 0; i < samples; ++i) {
      (void)slack_for(i);
      (void)mode_for(i);
    }
    for (const auto& s : slack_schedule)
      if (!(s.slack >= 0.0)) throw std::invalid_argument("heuristics: negative slack");
  }

  [[nodiscard]] double slack_for(int sample) const {
    for (const auto& s : slack_schedule)
      if (sample >= s.begin && sample < s.end) return s.slack;
    throw std::invalid_argument("heuristics: slack schedule does not cover sample " +
                                std::to_string(sample));
  }

  [[nodiscard]] DistanceMode mode_for(int sample) const {
    for (const auto& s : distance_schedule)
      if (sample >= s.begin && sample < s.end) return s.mode;
    throw std::invalid_argument("heuristics: distance schedule does not cover sample " +
                                std::to_string(sample));
  }

  friend bool operator==(const HeuristicParams&, const HeuristicParams&) = default;
};

// ---------------------------------------------------------------------------
// Local strategies

struct LocalResource {
  enum class Kind { Direct, SwapPath };
  Kind kind;
  LinkId first;
  LinkId second;  // == first for Direct
  NodeId via;     // == target for Direct
  SchmidtValue lambda;
  int cost;  // links consumed: 1 direct, 2 swap path
  std::size_t destroyed;  // original links behind the consumed links

  [[nodiscard]] bool shares_link(const LocalResource& o) const {
    return first == o.first || first == o.second || second == o.first || second == o.second;
  }
};

struct LocalSolution {
  NodeId target;
  std::vector<LocalResource> chosen;
  SchmidtValue final_lambda;
  std::size_t destroyed = 0;
};

/// Alive-link mask; links not covered are treated as free.
class LinkMask {
 public:
  [[nodiscard]] bool contains(LinkId id) const {
    return index(id) < bits_.size() && bits_[index(id)];
  }
  void insert(LinkId id) {
    if (index(id) >= bits_.size()) bits_.resize(index(id) + 1, false);
    bits_[index(id)] = true;
  }
  void erase(LinkId id) {
    if (index(id) < bits_.size()) bits_[index(id)] = false;
  }

 private:
  std::vector<bool> bits_;
};

namespace detail {

inline LocalResource direct_resource(const QuantumNetwork& net, LinkId id, NodeId target) {
  const auto& l = net.link(id);
  return {LocalResource::Kind::Direct, id, id, target, l.lambda, 1, l.origin.size()};
}

inline LocalResource swap_resource(const QuantumNetwork& net, LinkId a, LinkId b, NodeId via) {
  const auto& la = net.link(a);
  const auto& lb = net.link(b);
  return {LocalResource::Kind::SwapPath, a, b, via, swap(la.lambda, lb.lambda), 2,
          la.origin.size() + lb.origin.size()};
}

// Resources from u to every station within two free links, grouped by target.
class ResourceTable {
 public:
  explicit ResourceTable(std::size_t nodes) : by_node_(nodes) {}

  void gather(const QuantumNetwork& net, NodeId u, const LinkMask& reserved) {
    for (const auto t : touched_) by_node_[index(t)].clear();
    touched_.clear();
    for (const auto l1 : net.incident(u)) {
      if (reserved.contains(l1)) continue;
      const NodeId w = net.link(l1).other(u);
      add(w, direct_resource(net, l1, w));
      for (const auto l2 : net.incident(w)) {
        if (l2 == l1 || reserved.contains(l2)) continue;
        const NodeId x = net.link(l2).other(w);
        if (x == u) continue;
        add(x, swap_resource(net, l1, l2, w));
      }
    }
    std::sort(touched_.begin(), touched_.end());
  }

  [[nodiscard]] const std::vector<NodeId>& targets() const { return touched_; }
  [[nodiscard]] const std::vector<LocalResource>& at(NodeId n) const { return by_node_[index(n)]; }

 private:
  void add(NodeId n, LocalResource r) {
    auto& v = by_node_[index(n)];
    if (v.empty()) touched_.push_back(n);
    v.push_back(r);
  }

  std::vector<std::vector<LocalResource>> by_node_;
  std::vector<NodeId> touched_;
};

inline constexpr std::size_t kExactSearchLimit = 12;

// Picks an edge-disjoint subset: lowest clipped lambda first; among subsets
// within `slack` of it, fewest destroyed links.
inline std::optional<LocalSolution> select_resources(const std::vector<LocalResource>& res,
                                                     NodeId target, double slack) {
  if (res.empty()) return std::nullopt;
  const std::size_t n = res.size();

  if (n <= kExactSearchLimit) {
    std::vector<std::uint32_t> conflicts(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && res[i].shares_link(res[j])) conflicts[i] |= 1u << j;

    const std::uint32_t full = 1u << n;
    std::vector<double> product(full, 1.0);
    std::vector<std::size_t> destroyed(full, 0);
    std::vector<bool> valid(full, true);
    double best = 2.0;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
      const auto low = static_cast<std::size_t>(__builtin_ctz(mask));
      const std::uint32_t rest = mask & (mask - 1);
      valid[mask] = valid[rest] && !(conflicts[low] & rest);
      if (!valid[mask]) continue;
      product[mask] = product[rest] * res[low].lambda.value();
      destroyed[mask] = destroyed[rest] + res[low].destroyed;
      best = std::min(best, std::max(0.5, product[mask]));
    }
    std::uint32_t pick = 0;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
      if (!valid[mask]) continue;
      const double clipped = std::max(0.5, product[mask]);
      if (clipped > best + slack + Tolerances::compare) continue;
      if (pick == 0) {
        pick = mask;
        continue;
      }
      const double pick_clipped = std::max(0.5, product[pick]);
      if (destroyed[mask] != destroyed[pick]) {
        if (destroyed[mask] < destroyed[pick]) pick = mask;
      } else if (clipped < pick_clipped - Tolerances::compare) {
        pick = mask;
      } else if (std::abs(clipped - pick_clipped) <= Tolerances::compare &&
                 product[mask] < product[pick] - Tolerances::compare) {
        pick = mask;
      }
    }
    LocalSolution sol{target, {}, SchmidtValue(std::max(0.5, product[pick])), destroyed[pick]};
    for (std::size_t i = 0; i < n; ++i)
      if (pick & (1u << i)) sol.chosen.push_back(res[i]);
    return sol;
  }

  // Greedy: most entangled resources first, cheaper first on ties.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (std::abs(res[a].lambda.value() - res[b].lambda.value()) > Tolerances::compare)
      return res[a].lambda.value() < res[b].lambda.value();
    return res[a].destroyed < res[b].destroyed;
  });
  LocalSolution sol{target, {}, SchmidtValue(1.0), 0};
  double product = 1.0;
  for (const auto i : order) {
    const bool clash = std::any_of(sol.chosen.begin(), sol.chosen.end(),
                                   [&](const LocalResource& c) { return c.shares_link(res[i]); });
    if (clash) continue;
    sol.chosen.push_back(res[i]);
    product *= res[i].lambda.value();
    sol.destroyed += res[i].destroyed;
    if (product <= 0.5) break;
  }
  sol.final_lambda = SchmidtValue(std::max(0.5, product));
  return sol;
}

}  // namespace detail

/// Direct links and two-link swap paths between u and v (alive, not reserved).
inline std::vector<LocalResource> enumerate_local_resources(const QuantumNetwork& net, NodeId u,
                                                            NodeId v,
                                                            const LinkMask& reserved = {}) {
  if (u == v) throw std::invalid_argument("enumerate_local_resources: u == v");
  const auto d = net.hop_distance(u, v);
  if (!d || *d > 2) {
    throw std::invalid_argument("enumerate_local_resources: nodes are more than two links apart");
  }
  detail::ResourceTable table(net.node_count());
  table.gather(net, u, reserved);
  return table.at(v);
}

/// Most entangling combination of local resources between u and v; among
/// combinations within `slack` of the optimum, the one destroying fewest links.
inline std::optional<LocalSolution> best_local_strategy(const QuantumNetwork& net, NodeId u,
                                                        NodeId v, double slack = 0.0,
                                                        const LinkMask& reserved = {}) {
  return detail::select_resources(enumerate_local_resources(net, u, v, reserved), v, slack);
}

/// Applies a local solution; returns the resulting u-v link.
inline LinkId apply_local_solution(QuantumNetwork& net, const LocalSolution& sol,
                                   std::vector<Operation>* log = nullptr) {
  std::vector<LinkId> parts;
  parts.reserve(sol.chosen.size());
  for (const auto& r : sol.chosen) {
    if (r.kind == LocalResource::Kind::Direct) {
      parts.push_back(r.first);
    } else {
      const LinkId out = net.apply_swap(r.first, r.second);
      if (log) log->push_back({Operation::Kind::Swap, {r.first, r.second}, out});
      parts.push_back(out);
    }
  }
  if (parts.size() == 1) return parts.front();
  const LinkId out = net.apply_distill(parts);
  if (log) log->push_back({Operation::Kind::Distill, parts, out});
  return out;
}

// ---------------------------------------------------------------------------
// Routing

/// Hop distances on the original (unmutated) topology.
class DistanceTable {
 public:
  explicit DistanceTable(const QuantumNetwork& net) : n_(net.node_count()), d_(n_ * n_, -1) {
    std::vector<std::vector<NodeId>> adj(n_);
    for (std::size_t i = 0; i < net.original_count(); ++i) {
      const auto& l = net.link(link_id(i));
      adj[index(l.u)].push_back(l.v);
      adj[index(l.v)].push_back(l.u);
    }
    std::vector<std::size_t> queue;
    for (std::size_t s = 0; s < n_; ++s) {
      int* row = &d_[s * n_];
      queue.assign(1, s);
      row[s] = 0;
      for (std::size_t h = 0; h < queue.size(); ++h) {
        const auto x = queue[h];
        for (const auto y : adj[x]) {
          if (row[index(y)] >= 0) continue;
          row[index(y)] = row[x] + 1;
          queue.push_back(index(y));
        }
      }
    }
  }

  /// -1 when disconnected.
  [[nodiscard]] int operator()(NodeId a, NodeId b) const { return d_[index(a) * n_ + index(b)]; }
  [[nodiscard]] std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<int> d_;
};

struct PathSolution {
  std::optional<LinkId> final_link;  // absent on failure
  SchmidtValue final_lambda{1.0};
  std::size_t destroyed = 0;
  std::vector<Operation> log;
  std::vector<NodeId> hop_nodes;  // source, intermediates, target
  std::vector<LinkId> hop_links;  // per-hop links before assembly
  std::vector<LinkId> origin;     // original links consumed
  int sample_index = -1;
  std::optional<int> combined_with;  // second sample of a distilled pair

  [[nodiscard]] bool failed() const { return !final_link.has_value(); }
  [[nodiscard]] double entanglement() const {
    return failed() ? 0.0 : entperc::entanglement(final_lambda);
  }
};

namespace detail {

struct Walk {
  std::vector<NodeId> nodes;
  std::vector<LinkId> links;
};

class Router {
 public:
  Router(QuantumNetwork& net, const DistanceTable& dist, std::uint64_t salt)
      : net_(net), dist_(dist), base_salt_(salt), salt_(salt), table_(net.node_count()) {}

  // Hops from source to target, applying a local strategy per hop. Returns
  // nullopt at a dead end (the network is left partially mutated).
  std::optional<Walk> walk(NodeId source, NodeId target, DistanceMode mode, double slack,
                           LinkMask& reserved, std::vector<Operation>& log) {
    if (dist_(source, target) < 0) return std::nullopt;
    Walk w{{source}, {}};
    std::vector<bool> visited(net_.node_count(), false);
    visited[index(source)] = true;
    NodeId current = source;
    struct Candidate {
      NodeId node;
      LocalSolution sol;
    };
    std::vector<Candidate> candidates;
    while (current != target) {
      const int here = dist_(current, target);
      table_.gather(net_, current, reserved);
      candidates.clear();
      for (const NodeId n : table_.targets()) {
        if (visited[index(n)]) continue;
        const int there = dist_(n, target);
        if (there < 0) continue;
        const bool ok = mode == DistanceMode::Strict       ? there < here
                        : mode == DistanceMode::AllowEqual ? there <= here
                                                           : there <= here + 1;
        if (!ok) continue;
        if (auto sol = select_resources(table_.at(n), n, 0.0)) {
          candidates.push_back({n, std::move(*sol)});
        }
      }
      if (candidates.empty()) return std::nullopt;

      auto better = [](const LocalSolution& a, const LocalSolution& b) {
        if (std::abs(a.final_lambda.value() - b.final_lambda.value()) > Tolerances::compare)
          return a.final_lambda.value() < b.final_lambda.value();
        return a.destroyed < b.destroyed;
      };
      const LocalSolution* best = &candidates.front().sol;
      for (const auto& c : candidates)
        if (better(c.sol, *best)) best = &c.sol;
      const double best_lambda = best->final_lambda.value();
      const std::size_t best_destroyed = best->destroyed;

      viable_.clear();
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& s = candidates[i].sol;
        if (s.final_lambda.value() > best_lambda + slack + Tolerances::compare) continue;
        if (slack == 0.0 && s.destroyed != best_destroyed) continue;
        viable_.push_back(i);
      }
      // Random choice by per-node priority: iid within a sample, but shared
      // across lambda values, so nearby grid points make the same choices.
      std::size_t pick = viable_.front();
      for (const auto i : viable_)
        if (priority(candidates[i].node) < priority(candidates[pick].node)) pick = i;
      const auto& chosen = candidates[pick];
      const LinkId hop = apply_local_solution(net_, chosen.sol, &log);
      reserved.insert(hop);
      w.links.push_back(hop);
      w.nodes.push_back(chosen.node);
      visited[index(chosen.node)] = true;
      current = chosen.node;
    }
    return w;
  }

  // Swaps per-hop links into one end-to-end link.
  LinkId assemble(const std::vector<LinkId>& hops, std::vector<Operation>& log) {
    LinkId acc = hops.front();
    for (std::size_t i = 1; i < hops.size(); ++i) {
      const LinkId out = net_.apply_swap(acc, hops[i]);
      log.push_back({Operation::Kind::Swap, {acc, hops[i]}, out});
      acc = out;
    }
    return acc;
  }

  // Distills alternative routes into non-maximal hop links.
  void improve(Walk& path, double slack, int max_iterations, LinkMask& reserved,
               std::vector<Operation>& log) {
    for (std::size_t i = 0; i < path.links.size(); ++i) {
      for (int attempt = 0; attempt < max_iterations; ++attempt) {
        const auto& current = net_.link(path.links[i]);
        if (current.lambda.is_maximal()) break;
        const double before = current.lambda.value();
        const auto cp = net_.checkpoint();
        const std::size_t log_size = log.size();
        LinkMask scratch = reserved;
        salt_ = derive_seed(base_salt_, {static_cast<std::int64_t>(i), attempt});
        auto alt = walk(path.nodes[i], path.nodes[i + 1], DistanceMode::AllowPlusOne, slack,
                        scratch, log);
        bool kept = false;
        if (alt) {
          const LinkId side = assemble(alt->links, log);
          const LinkId parts[] = {path.links[i], side};
          const LinkId merged = net_.apply_distill(parts);
          log.push_back({Operation::Kind::Distill, {parts[0], parts[1]}, merged});
          if (net_.link(merged).lambda.value() < before - Tolerances::compare) {
            reserved.erase(path.links[i]);
            reserved.insert(merged);
            path.links[i] = merged;
            kept = true;
          }
        }
        if (!kept) {
          net_.rollback(cp);
          log.resize(log_size);
        }
      }
    }
    salt_ = base_salt_;
  }

 private:
  [[nodiscard]] std::uint64_t priority(NodeId n) const {
    return mix64(salt_ ^ mix64(static_cast<std::uint64_t>(index(n))));
  }

  QuantumNetwork& net_;
  const DistanceTable& dist_;
  std::uint64_t base_salt_;
  std::uint64_t salt_;
  ResourceTable table_;
  std::vector<std::size_t> viable_;
};

inline PathSolution finish(const QuantumNetwork& net, Walk walk, std::optional<LinkId> final_link,
                           std::vector<Operation> log, int distance) {
  PathSolution s;
  s.log = std::move(log);
  s.hop_nodes = std::move(walk.nodes);
  s.hop_links = std::move(walk.links);
  if (final_link) {
    const auto& l = net.link(*final_link);
    s.final_link = final_link;
    s.final_lambda = l.lambda;
    s.origin = l.origin;
    s.destroyed = l.origin.size();
  } else {
    for (std::size_t i = 0; i < net.original_count(); ++i)
      if (!net.link(link_id(i)).alive) s.origin.push_back(link_id(i));
    s.destroyed = std::max<std::size_t>(s.origin.size(), static_cast<std::size_t>(std::max(distance, 1)));
  }
  return s;
}

}  // namespace detail

/// One greedy route from source to target under the sample's choice rules,
/// without the improvement pass. Mutates `net`.
inline PathSolution route(QuantumNetwork& net, NodeId source, NodeId target,
                          const HeuristicParams& params, int sample_index, Rng& rng,
                          const DistanceTable* distances = nullptr) {
  if (source == target) throw std::invalid_argument("route: source equals target");
  std::optional<DistanceTable> own;
  if (!distances) distances = &own.emplace(net);
  detail::Router router(net, *distances, rng.next());
  LinkMask reserved;
  std::vector<Operation> log;
  auto walk = router.walk(source, target, params.mode_for(sample_index),
                          params.slack_for(sample_index), reserved, log);
  const int d = (*distances)(source, target);
  if (!walk) {
    auto failed = detail::finish(net, {{source}, {}}, std::nullopt, std::move(log), d);
    failed.sample_index = sample_index;
    return failed;
  }
  const LinkId final_link = router.assemble(walk->links, log);
  auto s = detail::finish(net, std::move(*walk), final_link, std::move(log), d);
  s.sample_index = sample_index;
  return s;
}

/// Improves the non-maximal hop links of a routed solution by distilling in
/// alternative routes between their endpoints, then re-assembles the chain.
/// `solution` must be the most recent route applied to `net`.
inline PathSolution improve_path(QuantumNetwork& net, const PathSolution& solution,
                                 const HeuristicParams& params, Rng& rng,
                                 const DistanceTable* distances = nullptr) {
  if (solution.failed() || solution.hop_links.size() < 1) return solution;
  std::optional<DistanceTable> own;
  if (!distances) distances = &own.emplace(net);

  // Undo the final assembly: the trailing swaps of the log.
  const std::size_t assembly = solution.hop_links.size() - 1;
  if (solution.log.size() < assembly) throw std::invalid_argument("improve_path: foreign solution");
  const auto cp = net.checkpoint();
  std::vector<Operation> log(solution.log.begin(),
                             solution.log.end() - static_cast<std::ptrdiff_t>(assembly));
  {
    // Rolling back exactly `assembly` swaps: each killed two links and added one.
    QuantumNetwork::Checkpoint before{cp.network_token, cp.links - assembly,
                                      cp.journal - 2 * assembly};
    net.rollback(before);
  }
  for (const auto id : solution.hop_links) {
    if (!net.link(id).alive) throw std::invalid_argument("improve_path: hop links not restorable");
  }

  detail::Router router(net, *distances, rng.next());
  LinkMask reserved;
  for (const auto id : solution.hop_links) reserved.insert(id);
  detail::Walk walk{solution.hop_nodes, solution.hop_links};
  const double slack = solution.sample_index >= 0 ? params.slack_for(solution.sample_index) : 0.0;
  router.improve(walk, slack, params.max_improve_iterations, reserved, log);
  const LinkId final_link = router.assemble(walk.links, log);
  auto s = detail::finish(net, std::move(walk), final_link, std::move(log),
                          (*distances)(solution.hop_nodes.front(), solution.hop_nodes.back()));
  s.sample_index = solution.sample_index;
  return s;
}

namespace detail {

inline bool disjoint(const std::vector<LinkId>& a, const std::vector<LinkId>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i;
    else ++j;
  }
  return true;
}

// Replays `log` on `net`, returning the mapped id of `final_link`. Link ids
// created by the log are renumbered to the ids `net` assigns.
inline LinkId replay_log(QuantumNetwork& net, const std::vector<Operation>& log, LinkId final_link,
                         std::vector<Operation>& out_log) {
  std::vector<std::pair<LinkId, LinkId>> remap;
  auto mapped = [&remap](LinkId id) {
    for (const auto& [from, to] : remap)
      if (from == id) return to;
    return id;
  };
  for (const auto& op : log) {
    Operation m{op.kind, {}, op.output};
    for (const auto in : op.inputs) m.inputs.push_back(mapped(in));
    m.output = op.kind == Operation::Kind::Swap ? net.apply_swap(m.inputs.at(0), m.inputs.at(1))
                                                : net.apply_distill(m.inputs);
    remap.emplace_back(op.output, m.output);
    out_log.push_back(std::move(m));
  }
  return mapped(final_link);
}

}  // namespace detail

/// Per-sample record kept by sample_and_select.
struct SampleOutcome {
  int sample_index;
  bool failed;
  double final_lambda;
  std::size_t destroyed;
  std::vector<NodeId> hop_nodes;
};

struct SelectionReport {
  PathSolution selected;
  std::vector<SampleOutcome> samples;
};

/// Draws params.samples routes from the pristine state of `net` (route +
/// improvement), adds distilled combinations of independent imperfect
/// solutions, and returns the best. On return `net` holds the selected
/// solution applied to the pristine state.
inline SelectionReport sample_and_select_report(QuantumNetwork& net, NodeId source, NodeId target,
                                                const HeuristicParams& params,
                                                std::uint64_t master_seed) {
  params.validate();
  if (source == target) throw std::invalid_argument("sample_and_select: source equals target");
  const DistanceTable distances(net);
  const auto pristine = net.checkpoint();
  const int d = distances(source, target);

  std::vector<PathSolution> solutions;
  solutions.reserve(static_cast<std::size_t>(params.samples));
  SelectionReport report;
  for (int i = 0; i < params.samples; ++i) {
    net.rollback(pristine);
    Rng rng(derive_seed(master_seed, {static_cast<std::int64_t>(index(source)),
                                      static_cast<std::int64_t>(index(target)), i}));
    auto s = route(net, source, target, params, i, rng, &distances);
    if (!s.failed()) s = improve_path(net, s, params, rng, &distances);
    s.sample_index = i;
    report.samples.push_back({i, s.failed(), s.final_lambda.value(), s.destroyed, s.hop_nodes});
    solutions.push_back(std::move(s));
  }
  net.rollback(pristine);

  struct Choice {
    double lambda;
    std::size_t destroyed;
    int first;
    int second;  // -1 for a single sample
  };
  auto better = [](const Choice& a, const Choice& b) {
    if (std::abs(a.lambda - b.lambda) > Tolerances::compare) return a.lambda < b.lambda;
    if (a.destroyed != b.destroyed) return a.destroyed < b.destroyed;
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  };

  std::optional<Choice> best;
  std::vector<int> imperfect;
  for (const auto& s : solutions) {
    if (s.failed()) continue;
    Choice c{s.final_lambda.value(), s.destroyed, s.sample_index, -1};
    if (!best || better(c, *best)) best = c;
    if (!s.final_lambda.is_maximal()) {
      // One representative per distinct consumed set.
      const bool dup = std::any_of(imperfect.begin(), imperfect.end(), [&](int k) {
        return solutions[static_cast<std::size_t>(k)].origin == s.origin;
      });
      if (!dup) imperfect.push_back(s.sample_index);
    }
  }
  for (std::size_t a = 0; a < imperfect.size(); ++a) {
    const auto& sa = solutions[static_cast<std::size_t>(imperfect[a])];
    for (std::size_t b = a + 1; b < imperfect.size(); ++b) {
      const auto& sb = solutions[static_cast<std::size_t>(imperfect[b])];
      if (!detail::disjoint(sa.origin, sb.origin)) continue;
      Choice c{distill_pair(sa.final_lambda, sb.final_lambda).value(),
               sa.destroyed + sb.destroyed, imperfect[a], imperfect[b]};
      if (better(c, *best)) best = c;
    }
  }

  if (!best) {
    // Every sample stranded: report the least destructive failure.
    auto least = std::min_element(solutions.begin(), solutions.end(),
                                  [](const auto& a, const auto& b) { return a.destroyed < b.destroyed; });
    report.selected = *least;
    report.selected.destroyed = std::max<std::size_t>(report.selected.destroyed,
                                                      static_cast<std::size_t>(std::max(d, 1)));
    return report;
  }

  // Materialize the choice on the pristine network.
  const auto& first = solutions[static_cast<std::size_t>(best->first)];
  std::vector<Operation> log;
  LinkId final_link = detail::replay_log(net, first.log, *first.final_link, log);
  PathSolution selected = first;
  if (best->second >= 0) {
    const auto& second = solutions[static_cast<std::size_t>(best->second)];
    const LinkId other = detail::replay_log(net, second.log, *second.final_link, log);
    const LinkId parts[] = {final_link, other};
    final_link = net.apply_distill(parts);
    log.push_back({Operation::Kind::Distill, {parts[0], parts[1]}, final_link});
    selected.combined_with = best->second;
  }
  const auto& l = net.link(final_link);
  selected.final_link = final_link;
  selected.final_lambda = l.lambda;
  selected.origin = l.origin;
  selected.destroyed = l.origin.size();
  selected.log = std::move(log);
  report.selected = std::move(selected);
  return report;
}

inline PathSolution sample_and_select(QuantumNetwork& net, NodeId source, NodeId target,
                                      const HeuristicParams& params, std::uint64_t master_seed) {
  return sample_and_select_report(net, source, target, params, master_seed).selected;
}

}  // namespace entperc

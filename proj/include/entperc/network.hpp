#pragma once

// Mutable multigraph of entangled links between network stations.
//
// Links are never removed: swapping and distillation mark their inputs dead
// and append a new link whose origin records every original link it consumed.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <deque>
#include <iterator>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "entperc/schmidt.hpp"

namespace entperc {

enum class NodeId : std::int32_t {};
enum class LinkId : std::int32_t {};

constexpr std::size_t index(NodeId n) { return static_cast<std::size_t>(n); }
constexpr std::size_t index(LinkId l) { return static_cast<std::size_t>(l); }
constexpr NodeId node_id(std::size_t i) { return static_cast<NodeId>(i); }
constexpr LinkId link_id(std::size_t i) { return static_cast<LinkId>(i); }

struct Edge {
  NodeId u;
  NodeId v;
  SchmidtValue lambda{};
};

struct LinkState {
  LinkId id;
  NodeId u;  // u < v
  NodeId v;
  SchmidtValue lambda;
  std::vector<LinkId> origin;  // sorted original link ids
  bool alive = true;

  [[nodiscard]] bool connects(NodeId a, NodeId b) const {
    return (u == a && v == b) || (u == b && v == a);
  }
  [[nodiscard]] bool touches(NodeId n) const { return u == n || v == n; }
  [[nodiscard]] NodeId other(NodeId n) const { return n == u ? v : u; }
};

struct Operation {
  enum class Kind { Swap, Distill };
  Kind kind;
  std::vector<LinkId> inputs;
  LinkId output;
};

class QuantumNetwork {
 public:
  class Snapshot {
   public:
    [[nodiscard]] std::size_t link_count() const { return links_.size(); }

   private:
    friend class QuantumNetwork;
    std::uint64_t network_token_ = 0;
    std::vector<LinkState> links_;
    std::vector<std::vector<LinkId>> adjacency_;
    std::vector<LinkId> journal_;
  };

  // Cheap undo point: operations after it can be rolled back exactly.
  struct Checkpoint {
    std::uint64_t network_token = 0;
    std::size_t links = 0;
    std::size_t journal = 0;
  };

  QuantumNetwork(std::size_t nodes, std::span<const Edge> edges)
      : token_(next_token()), adjacency_(nodes) {
    links_.reserve(edges.size() * 3);
    for (const auto& e : edges) {
      check_node(e.u);
      check_node(e.v);
      if (e.u == e.v) throw std::invalid_argument("QuantumNetwork: self-loop link");
      const auto id = link_id(links_.size());
      links_.push_back(LinkState{id, std::min(e.u, e.v), std::max(e.u, e.v),
                                 e.lambda, {id}, true});
      attach(links_.back());
    }
    original_count_ = links_.size();
  }

  QuantumNetwork(const QuantumNetwork& other)
      : token_(next_token()),
        links_(other.links_),
        adjacency_(other.adjacency_),
        journal_(other.journal_),
        original_count_(other.original_count_) {}

  QuantumNetwork& operator=(const QuantumNetwork& other) {
    if (this != &other) {
      links_ = other.links_;
      adjacency_ = other.adjacency_;
      journal_ = other.journal_;
      original_count_ = other.original_count_;
      token_ = next_token();
    }
    return *this;
  }

  QuantumNetwork(QuantumNetwork&&) noexcept = default;
  QuantumNetwork& operator=(QuantumNetwork&&) noexcept = default;

  [[nodiscard]] std::size_t node_count() const { return adjacency_.size(); }
  [[nodiscard]] std::size_t original_count() const { return original_count_; }
  [[nodiscard]] std::size_t link_count() const { return links_.size(); }

  [[nodiscard]] const LinkState& link(LinkId id) const {
    if (index(id) >= links_.size()) {
      throw std::out_of_range("unknown link id " + std::to_string(index(id)));
    }
    return links_[index(id)];
  }

  [[nodiscard]] const std::vector<LinkState>& links() const { return links_; }

  /// Alive links incident to n.
  [[nodiscard]] const std::vector<LinkId>& incident(NodeId n) const {
    check_node(n);
    return adjacency_[index(n)];
  }

  [[nodiscard]] std::vector<LinkId> alive_links() const {
    std::vector<LinkId> out;
    for (const auto& l : links_)
      if (l.alive) out.push_back(l.id);
    return out;
  }

  [[nodiscard]] std::vector<LinkId> links_between(NodeId a, NodeId b) const {
    std::vector<LinkId> out;
    for (const auto id : incident(a))
      if (links_[index(id)].connects(a, b)) out.push_back(id);
    return out;
  }

  [[nodiscard]] bool is_pristine() const {
    return links_.size() == original_count_ &&
           std::all_of(links_.begin(), links_.end(), [](const auto& l) { return l.alive; });
  }

  /// Overwrite the Schmidt value of an original link of a pristine network.
  void set_original_lambda(LinkId id, SchmidtValue lambda) {
    if (!is_pristine()) {
      throw std::logic_error("set_original_lambda: network already mutated");
    }
    if (index(id) >= original_count_) throw std::out_of_range("not an original link");
    links_[index(id)].lambda = lambda;
  }

  /// Number of original links that are no longer alive.
  [[nodiscard]] std::size_t consumed_original_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < original_count_; ++i) n += !links_[i].alive;
    return n;
  }

  /// Entanglement swapping at the node shared by two links.
  LinkId apply_swap(LinkId l1, LinkId l2) {
    const auto& a = alive_link(l1);
    const auto& b = alive_link(l2);
    if (l1 == l2) throw std::invalid_argument("apply_swap: same link twice");
    const bool share_u = b.touches(a.u);
    const bool share_v = b.touches(a.v);
    if (share_u == share_v) {
      throw std::invalid_argument(share_u ? "apply_swap: links share both endpoints"
                                          : "apply_swap: links are not adjacent");
    }
    const NodeId middle = share_u ? a.u : a.v;
    const NodeId x = a.other(middle);
    const NodeId y = b.other(middle);
    const auto lambda = swap(a.lambda, b.lambda);
    auto origin = merge(a.origin, b.origin);
    kill(l1);
    kill(l2);
    return append(x, y, lambda, std::move(origin));
  }

  /// Deterministic distillation of parallel links into one.
  LinkId apply_distill(std::span<const LinkId> ids) {
    if (ids.size() < 2) throw std::invalid_argument("apply_distill: need at least two links");
    const auto& first = alive_link(ids[0]);
    const NodeId u = first.u;
    const NodeId v = first.v;
    std::vector<SchmidtValue> lambdas;
    std::vector<LinkId> origin;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const auto& l = alive_link(ids[i]);
      if (l.u != u || l.v != v) throw std::invalid_argument("apply_distill: mismatched endpoints");
      if (std::find(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(i), ids[i]) !=
          ids.begin() + static_cast<std::ptrdiff_t>(i)) {
        throw std::invalid_argument("apply_distill: duplicate link");
      }
      lambdas.push_back(l.lambda);
      origin = merge(origin, l.origin);
    }
    const auto lambda = distill_many(lambdas);
    for (const auto id : ids) kill(id);
    return append(u, v, lambda, std::move(origin));
  }

  LinkId apply_distill(std::initializer_list<LinkId> ids) {
    return apply_distill(std::span<const LinkId>(ids.begin(), ids.size()));
  }

  /// Number of original links consumed to produce `id`.
  [[nodiscard]] std::size_t destroyed_count(LinkId id) const { return link(id).origin.size(); }

  /// Breadth-first hop count over alive links; nullopt when disconnected.
  [[nodiscard]] std::optional<int> hop_distance(NodeId a, NodeId b) const {
    check_node(a);
    check_node(b);
    if (a == b) return 0;
    std::vector<int> dist(node_count(), -1);
    std::deque<NodeId> queue{a};
    dist[index(a)] = 0;
    while (!queue.empty()) {
      const NodeId n = queue.front();
      queue.pop_front();
      for (const auto id : adjacency_[index(n)]) {
        const NodeId m = links_[index(id)].other(n);
        if (dist[index(m)] >= 0) continue;
        dist[index(m)] = dist[index(n)] + 1;
        if (m == b) return dist[index(m)];
        queue.push_back(m);
      }
    }
    return std::nullopt;
  }

  /// All-source hop distances over alive links, -1 where disconnected.
  [[nodiscard]] std::vector<int> distances_from(NodeId a) const {
    check_node(a);
    std::vector<int> dist(node_count(), -1);
    std::deque<NodeId> queue{a};
    dist[index(a)] = 0;
    while (!queue.empty()) {
      const NodeId n = queue.front();
      queue.pop_front();
      for (const auto id : adjacency_[index(n)]) {
        const NodeId m = links_[index(id)].other(n);
        if (dist[index(m)] >= 0) continue;
        dist[index(m)] = dist[index(n)] + 1;
        queue.push_back(m);
      }
    }
    return dist;
  }

  [[nodiscard]] Snapshot snapshot() const {
    Snapshot s;
    s.network_token_ = token_;
    s.links_ = links_;
    s.adjacency_ = adjacency_;
    s.journal_ = journal_;
    return s;
  }

  void restore(const Snapshot& s) {
    if (s.network_token_ != token_) {
      throw std::invalid_argument("restore: snapshot belongs to a different network");
    }
    links_ = s.links_;
    adjacency_ = s.adjacency_;
    journal_ = s.journal_;
  }

  [[nodiscard]] Checkpoint checkpoint() const { return {token_, links_.size(), journal_.size()}; }

  /// Undoes every operation applied since `cp`. Adjacency lists are kept
  /// sorted by link id, so the result is identical to the state at `cp`.
  void rollback(const Checkpoint& cp) {
    if (cp.network_token != token_) {
      throw std::invalid_argument("rollback: checkpoint belongs to a different network");
    }
    if (cp.links > links_.size() || cp.journal > journal_.size()) {
      throw std::invalid_argument("rollback: checkpoint is newer than the network state");
    }
    while (links_.size() > cp.links) {
      const auto& l = links_.back();
      if (l.alive) {
        detach(l.u, l.id);
        detach(l.v, l.id);
      }
      links_.pop_back();
    }
    while (journal_.size() > cp.journal) {
      const LinkId id = journal_.back();
      journal_.pop_back();
      if (index(id) >= links_.size()) continue;
      auto& l = links_[index(id)];
      l.alive = true;
      reattach(l.u, id);
      reattach(l.v, id);
    }
  }

  /// Re-applies a logged operation; link ids created by the log are mapped
  /// onto the ids this network assigns. Returns the mapped output id.
  LinkId replay(const Operation& op, std::vector<std::pair<LinkId, LinkId>>& remap) {
    std::vector<LinkId> inputs;
    inputs.reserve(op.inputs.size());
    for (const auto id : op.inputs) {
      auto it = std::find_if(remap.begin(), remap.end(),
                             [id](const auto& p) { return p.first == id; });
      inputs.push_back(it == remap.end() ? id : it->second);
    }
    const LinkId out = op.kind == Operation::Kind::Swap
                           ? apply_swap(inputs.at(0), inputs.at(1))
                           : apply_distill(inputs);
    remap.emplace_back(op.output, out);
    return out;
  }

 private:
  static std::uint64_t next_token() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
  }

  static std::vector<LinkId> merge(const std::vector<LinkId>& a, const std::vector<LinkId>& b) {
    std::vector<LinkId> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  }

  void check_node(NodeId n) const {
    if (index(n) >= adjacency_.size()) {
      throw std::out_of_range("unknown node id " + std::to_string(index(n)));
    }
  }

  const LinkState& alive_link(LinkId id) const {
    const auto& l = link(id);
    if (!l.alive) throw std::invalid_argument("link " + std::to_string(index(id)) + " is dead");
    return l;
  }

  void attach(const LinkState& l) {
    adjacency_[index(l.u)].push_back(l.id);
    adjacency_[index(l.v)].push_back(l.id);
  }

  void detach(NodeId n, LinkId id) {
    auto& adj = adjacency_[index(n)];
    adj.erase(std::find(adj.begin(), adj.end(), id));
  }

  void reattach(NodeId n, LinkId id) {
    auto& adj = adjacency_[index(n)];
    adj.insert(std::lower_bound(adj.begin(), adj.end(), id), id);
  }

  void kill(LinkId id) {
    auto& l = links_[index(id)];
    l.alive = false;
    journal_.push_back(id);
    detach(l.u, id);
    detach(l.v, id);
  }

  LinkId append(NodeId x, NodeId y, SchmidtValue lambda, std::vector<LinkId> origin) {
    const auto id = link_id(links_.size());
    links_.push_back(LinkState{id, std::min(x, y), std::max(x, y), lambda, std::move(origin), true});
    attach(links_.back());
    return id;
  }

  std::uint64_t token_;
  std::vector<LinkState> links_;
  std::vector<std::vector<LinkId>> adjacency_;
  std::vector<LinkId> journal_;  // killed links, in order
  std::size_t original_count_ = 0;
};

}  // namespace entperc

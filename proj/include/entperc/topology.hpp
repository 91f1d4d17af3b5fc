#pragma once

// Planar lattice generators.
//
// square / diagonal-square: rows x cols stations, open boundaries, numbered
// row-major. diagonal-square adds both diagonals of every unit cell.
//
// honeycomb / fully-connected-honeycomb: rows x cols hexagons laid out as a
// brick wall. Node row i (0..rows) holds columns 0..2*cols+1; hexagon k of
// band i spans columns 2k + (i mod 2) .. 2k + 2 + (i mod 2) on rows i and i+1.
// The two columns touched by no hexagon are dropped, leaving
// 2(rows+1)(cols+1) - 2 nodes, numbered row-major over the remaining cells.
// The fully connected variant adds every chord inside each hexagon.

#include <algorithm>
#include <array>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "entperc/network.hpp"

namespace entperc {

enum class TopologyKind { Square, DiagonalSquare, Honeycomb, FullyConnectedHoneycomb };

inline std::string_view to_string(TopologyKind k) {
  switch (k) {
    case TopologyKind::Square: return "square";
    case TopologyKind::DiagonalSquare: return "diagonal-square";
    case TopologyKind::Honeycomb: return "honeycomb";
    case TopologyKind::FullyConnectedHoneycomb: return "fully-connected-honeycomb";
  }
  return "?";
}

inline TopologyKind parse_topology_kind(std::string_view s) {
  for (auto k : {TopologyKind::Square, TopologyKind::DiagonalSquare, TopologyKind::Honeycomb,
                 TopologyKind::FullyConnectedHoneycomb}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown topology kind '" + std::string(s) + "'");
}

struct TopologySpec {
  TopologyKind kind = TopologyKind::DiagonalSquare;
  int rows = 1;
  int cols = 1;

  friend bool operator==(const TopologySpec&, const TopologySpec&) = default;
};

namespace detail {

inline std::vector<Edge> grid_edges(int rows, int cols, bool diagonals) {
  auto id = [cols](int r, int c) { return node_id(static_cast<std::size_t>(r * cols + c)); };
  std::vector<Edge> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
      if (diagonals && r + 1 < rows && c + 1 < cols) {
        edges.push_back({id(r, c), id(r + 1, c + 1)});
        edges.push_back({id(r, c + 1), id(r + 1, c)});
      }
    }
  }
  return edges;
}

struct Honeycomb {
  std::size_t nodes = 0;
  std::vector<std::array<NodeId, 6>> hexagons;  // boundary order
};

inline Honeycomb honeycomb_cells(int rows, int cols) {
  const int width = 2 * cols + 2;
  // Which (row, column) cells are used by some hexagon.
  std::vector<std::vector<bool>> used(static_cast<std::size_t>(rows + 1),
                                      std::vector<bool>(static_cast<std::size_t>(width), false));
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const int j0 = 2 * k + (i % 2);
      for (int dj = 0; dj <= 2; ++dj) {
        used[static_cast<std::size_t>(i)][static_cast<std::size_t>(j0 + dj)] = true;
        used[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(j0 + dj)] = true;
      }
    }
  std::vector<std::vector<int>> number(used.size(), std::vector<int>(static_cast<std::size_t>(width), -1));
  Honeycomb h;
  for (std::size_t r = 0; r < used.size(); ++r)
    for (std::size_t c = 0; c < static_cast<std::size_t>(width); ++c)
      if (used[r][c]) number[r][c] = static_cast<int>(h.nodes++);

  auto at = [&](int r, int c) {
    return node_id(static_cast<std::size_t>(number[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]));
  };
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const int j0 = 2 * k + (i % 2);
      h.hexagons.push_back({at(i, j0), at(i, j0 + 1), at(i, j0 + 2), at(i + 1, j0 + 2),
                            at(i + 1, j0 + 1), at(i + 1, j0)});
    }
  return h;
}

inline std::vector<Edge> honeycomb_edges(const Honeycomb& h, bool complete) {
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (const auto& hex : h.hexagons) {
    for (std::size_t a = 0; a < 6; ++a) {
      if (complete) {
        for (std::size_t b = a + 1; b < 6; ++b)
          pairs.emplace(std::min(hex[a], hex[b]), std::max(hex[a], hex[b]));
      } else {
        const auto b = (a + 1) % 6;
        pairs.emplace(std::min(hex[a], hex[b]), std::max(hex[a], hex[b]));
      }
    }
  }
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [u, v] : pairs) edges.push_back({u, v});
  return edges;
}

}  // namespace detail

/// Builds the lattice with every link at lambda = 1/2.
inline QuantumNetwork build_topology(const TopologySpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) {
    throw std::invalid_argument("build_topology: rows and cols must be positive");
  }
  switch (spec.kind) {
    case TopologyKind::Square:
    case TopologyKind::DiagonalSquare: {
      const auto edges = detail::grid_edges(spec.rows, spec.cols,
                                            spec.kind == TopologyKind::DiagonalSquare);
      return QuantumNetwork(static_cast<std::size_t>(spec.rows * spec.cols), edges);
    }
    case TopologyKind::Honeycomb:
    case TopologyKind::FullyConnectedHoneycomb: {
      const auto h = detail::honeycomb_cells(spec.rows, spec.cols);
      const auto edges =
          detail::honeycomb_edges(h, spec.kind == TopologyKind::FullyConnectedHoneycomb);
      return QuantumNetwork(h.nodes, edges);
    }
  }
  throw std::invalid_argument("build_topology: unknown kind");
}

/// Line-oriented dump: `nodes N`, then `id u v lambda` per alive link.
inline void write_network(std::ostream& os, const QuantumNetwork& net) {
  os << "nodes " << net.node_count() << '\n';
  char buf[64];
  for (const auto& l : net.links()) {
    if (!l.alive) continue;
    std::snprintf(buf, sizeof buf, "%.17g", l.lambda.value());
    os << index(l.id) << ' ' << index(l.u) << ' ' << index(l.v) << ' ' << buf << '\n';
  }
}

/// Inverse of write_network for a freshly built network. Link ids must be
/// 0..L-1 in order.
inline QuantumNetwork read_network(std::istream& is) {
  std::string word;
  std::size_t nodes = 0;
  if (!(is >> word >> nodes) || word != "nodes") {
    throw std::invalid_argument("network file: expected 'nodes N' header");
  }
  std::vector<Edge> edges;
  std::size_t id = 0;
  std::size_t u = 0;
  std::size_t v = 0;
  double lambda = 0.5;
  while (is >> id >> u >> v >> lambda) {
    if (id != edges.size()) {
      throw std::invalid_argument("network file: link ids must be consecutive from 0");
    }
    edges.push_back({node_id(u), node_id(v), SchmidtValue(lambda)});
  }
  if (!is.eof()) throw std::invalid_argument("network file: malformed link line");
  return QuantumNetwork(nodes, edges);
}

}  // namespace entperc

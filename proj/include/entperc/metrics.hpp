#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "entperc/network.hpp"
#include "entperc/schmidt.hpp"

namespace entperc {

struct PairOutcome {
  NodeId source;
  NodeId target;
  int distance = 1;
  SchmidtValue final_lambda{};
  std::size_t destroyed = 1;
  bool failed = false;  // entanglement is 0 regardless of final_lambda
};

/// Hop distance over original links destroyed.
inline double integrity(const PairOutcome& o) {
  if (o.destroyed == 0) throw std::invalid_argument("integrity: zero destroyed links");
  if (o.distance < 1) throw std::invalid_argument("integrity: distance must be positive");
  return static_cast<double>(o.distance) / static_cast<double>(o.destroyed);
}

inline double outcome_entanglement(const PairOutcome& o) {
  return o.failed ? 0.0 : entanglement(o.final_lambda);
}

/// Entanglement of the delivered state times integrity.
inline double connectivity(const PairOutcome& o) { return outcome_entanglement(o) * integrity(o); }

struct DistanceAggregate {
  double mean_entanglement = 0.0;
  double mean_integrity = 0.0;
  double mean_connectivity = 0.0;
  std::size_t count = 0;
};

/// Per-distance arithmetic means, ordered by distance.
inline std::map<int, DistanceAggregate> aggregate_by_distance(std::span<const PairOutcome> outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("aggregate_by_distance: no outcomes");
  std::map<int, DistanceAggregate> rows;
  for (const auto& o : outcomes) {
    auto& r = rows[o.distance];
    r.mean_entanglement += outcome_entanglement(o);
    r.mean_integrity += integrity(o);
    r.mean_connectivity += connectivity(o);
    ++r.count;
  }
  for (auto& [d, r] : rows) {
    const auto n = static_cast<double>(r.count);
    r.mean_entanglement /= n;
    r.mean_integrity /= n;
    r.mean_connectivity /= n;
  }
  return rows;
}

}  // namespace entperc

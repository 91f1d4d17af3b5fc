#pragma once

// Percolation strategies as swap/distill expression trees over link slots,
// their evaluation, and the Schmidt-value threshold at which a strategy stops
// producing a maximally entangled state.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "entperc/schmidt.hpp"
#include "entperc/tolerance.hpp"

namespace entperc {

class StrategyExpr {
 public:
  static StrategyExpr leaf(int slot = 0) {
    if (slot < 0) throw std::invalid_argument("StrategyExpr: negative slot");
    return StrategyExpr(std::make_shared<const Node>(Node{Kind::Leaf, slot, {}}));
  }

  static StrategyExpr swap(StrategyExpr left, StrategyExpr right) {
    return StrategyExpr(std::make_shared<const Node>(
        Node{Kind::Swap, -1, {std::move(left), std::move(right)}}));
  }

  static StrategyExpr distill(std::vector<StrategyExpr> children) {
    if (children.empty()) {
      throw std::invalid_argument("StrategyExpr: distill needs at least one child");
    }
    return StrategyExpr(
        std::make_shared<const Node>(Node{Kind::Distill, -1, std::move(children)}));
  }

  [[nodiscard]] bool is_leaf() const { return node_->kind == Kind::Leaf; }
  [[nodiscard]] bool is_swap() const { return node_->kind == Kind::Swap; }
  [[nodiscard]] bool is_distill() const { return node_->kind == Kind::Distill; }
  [[nodiscard]] int slot() const { return node_->slot; }
  [[nodiscard]] const std::vector<StrategyExpr>& children() const {
    return node_->children;
  }

  [[nodiscard]] int max_slot() const {
    int m = node_->slot;
    for (const auto& c : node_->children) m = std::max(m, c.max_slot());
    return m;
  }

  [[nodiscard]] std::string to_string() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }

 private:
  enum class Kind { Leaf, Swap, Distill };
  struct Node {
    Kind kind;
    int slot;
    std::vector<StrategyExpr> children;
  };

  explicit StrategyExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  void write(std::ostream& os) const {
    switch (node_->kind) {
      case Kind::Leaf:
        os << 'x' << node_->slot;
        return;
      case Kind::Swap:
        os << "S(";
        break;
      case Kind::Distill:
        os << "D(";
        break;
    }
    for (std::size_t i = 0; i < node_->children.size(); ++i) {
      if (i) os << ',';
      node_->children[i].write(os);
    }
    os << ')';
  }

  std::shared_ptr<const Node> node_;
};

namespace detail {

template <class Binding>
double evaluate_node(const StrategyExpr& e, const Binding& bind, bool clip) {
  if (e.is_leaf()) return bind(e.slot()).value();
  if (e.is_swap()) {
    const auto& c = e.children();
    return entperc::swap(SchmidtValue(evaluate_node(c[0], bind, true)),
                         SchmidtValue(evaluate_node(c[1], bind, true)))
        .value();
  }
  double product = 1.0;
  for (const auto& c : e.children()) product *= evaluate_node(c, bind, true);
  return clip ? std::max(0.5, product) : product;
}

}  // namespace detail

/// Resulting Schmidt value of `expr` with slot i bound to binding[i].
/// Every distill node clips at 1/2.
inline SchmidtValue evaluate(const StrategyExpr& expr,
                             const std::vector<SchmidtValue>& binding) {
  auto bind = [&](int slot) -> SchmidtValue {
    if (slot < 0 || static_cast<std::size_t>(slot) >= binding.size()) {
      throw std::out_of_range("evaluate: unbound slot x" + std::to_string(slot));
    }
    return binding[static_cast<std::size_t>(slot)];
  };
  return SchmidtValue(detail::evaluate_node(expr, bind, true));
}

/// Uniform binding: every slot carries the same Schmidt value.
inline SchmidtValue evaluate(const StrategyExpr& expr, SchmidtValue lambda) {
  return SchmidtValue(
      detail::evaluate_node(expr, [lambda](int) { return lambda; }, true));
}

/// As evaluate, but a distill at the root returns the bare product. This is
/// the left-hand side of the threshold inequality.
inline double evaluate_unclipped(const StrategyExpr& expr,
                                 const std::vector<SchmidtValue>& binding) {
  auto bind = [&](int slot) -> SchmidtValue {
    if (slot < 0 || static_cast<std::size_t>(slot) >= binding.size()) {
      throw std::out_of_range("evaluate_unclipped: unbound slot x" +
                              std::to_string(slot));
    }
    return binding[static_cast<std::size_t>(slot)];
  };
  return detail::evaluate_node(expr, bind, false);
}

inline double evaluate_unclipped(const StrategyExpr& expr, SchmidtValue lambda) {
  return detail::evaluate_node(expr, [lambda](int) { return lambda; }, false);
}

/// Largest uniform lambda for which `expr` still yields a maximally entangled
/// state, i.e. the root of evaluate_unclipped(expr, lambda) = 1/2.
inline double solve_threshold(const StrategyExpr& expr) {
  auto f = [&](double lambda) { return evaluate_unclipped(expr, SchmidtValue(lambda)); };

  if (f(0.5) > 0.5 + Tolerances::compare) {
    throw std::invalid_argument("solve_threshold: " + expr.to_string() +
                                " cannot reach maximal entanglement");
  }
  constexpr int kGrid = 101;
  double previous = f(0.5);
  for (int i = 1; i < kGrid; ++i) {
    const double v = f(0.5 + 0.5 * i / (kGrid - 1));
    if (v < previous - Tolerances::compare) {
      throw std::domain_error("solve_threshold: " + expr.to_string() +
                              " is not monotone on [1/2, 1]");
    }
    previous = v;
  }
  if (f(1.0) <= 0.5) return 1.0;

  double lo = 0.5;
  double hi = 1.0;
  for (int it = 0; it < Tolerances::bisection_max_iterations &&
                   hi - lo > Tolerances::bisection;
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) <= 0.5) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

struct StrategyCatalogEntry {
  std::string name;
  StrategyExpr expr;
  std::optional<double> published_threshold;
};

/// Named local and recursive strategies with their reference thresholds.
inline std::vector<StrategyCatalogEntry> standard_catalog() {
  using E = StrategyExpr;
  int next = 0;
  auto x = [&next] { return E::leaf(next++); };
  // Locals keep slot numbering left to right.
  auto s = [&] {
    auto a = x();
    return E::swap(a, x());
  };
  auto ss = [&] {
    auto a = x();
    auto b = x();
    return E::swap(a, E::swap(b, x()));
  };

  std::vector<StrategyCatalogEntry> out;
  auto add = [&](std::string name, E expr, std::optional<double> th) {
    out.push_back({std::move(name), std::move(expr), th});
    next = 0;
  };
  add("2S2D", E::distill({s(), s()}), 0.6498);
  add("1S2D", E::distill({s(), x()}), 0.675);
  add("2S+1SS,3D", E::distill({s(), s(), ss()}), 0.705);
  add("3S3D", E::distill({s(), s(), s()}), 0.718);
  add("2S3D", E::distill({s(), s(), x()}), 0.742);
  add("4S4D", E::distill({s(), s(), s(), s()}), 0.759);
  add("3S4D", E::distill({s(), s(), s(), x()}), 0.779);
  add("2SS,2D", E::distill({ss(), ss()}), std::nullopt);
  return out;
}

}  // namespace entperc

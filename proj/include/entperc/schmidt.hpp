#pragma once

// Schmidt-value algebra for two-qubit pure states.
//
// A state sqrt(l)|00> + sqrt(1-l)|11> is identified by its larger Schmidt
// coefficient l in [1/2, 1]: l = 1/2 is a Bell pair, l = 1 a product state.

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>

#include "entperc/tolerance.hpp"

namespace entperc {

class SchmidtValue {
 public:
  constexpr SchmidtValue() = default;

  // Values within Tolerances::compare of the domain are snapped onto it.
  explicit SchmidtValue(double lambda) {
    if (!(lambda >= 0.5 - Tolerances::compare &&
          lambda <= 1.0 + Tolerances::compare)) {
      std::ostringstream os;
      os << "Schmidt value " << lambda << " outside [1/2, 1]";
      throw std::invalid_argument(os.str());
    }
    lambda_ = std::clamp(lambda, 0.5, 1.0);
  }

  [[nodiscard]] constexpr double value() const { return lambda_; }
  [[nodiscard]] constexpr double epsilon() const { return lambda_ - 0.5; }
  [[nodiscard]] bool is_maximal() const {
    return lambda_ <= 0.5 + Tolerances::compare;
  }

  friend constexpr auto operator<=>(SchmidtValue, SchmidtValue) = default;

 private:
  double lambda_ = 0.5;
};

/// Entanglement measure: twice the smaller Schmidt coefficient.
inline double entanglement(SchmidtValue s) { return 2.0 * (1.0 - s.value()); }

/// Worst-case outcome of an XZ Bell measurement joining two links in series.
inline SchmidtValue swap(SchmidtValue a, SchmidtValue b) {
  const double x = a.value() * (1.0 - a.value());
  const double y = b.value() * (1.0 - b.value());
  const double radicand = std::max(0.0, 1.0 - 16.0 * x * y);
  return SchmidtValue((1.0 + std::sqrt(radicand)) / 2.0);
}

/// Swap in the epsilon = lambda - 1/2 parameterization.
inline double swap_epsilon(double e1, double e2) {
  if (e1 < 0.0 || e1 > 0.5 || e2 < 0.0 || e2 > 0.5) {
    throw std::invalid_argument("swap_epsilon: epsilon outside [0, 1/2]");
  }
  const double r = e1 * e1 + e2 * e2 - 4.0 * e1 * e1 * e2 * e2;
  return std::sqrt(std::max(0.0, r));
}

/// Most entangled state obtainable deterministically from two parallel links.
inline SchmidtValue distill_pair(SchmidtValue a, SchmidtValue b) {
  return SchmidtValue(std::max(0.5, a.value() * b.value()));
}

/// Distillation of any number of parallel links. The 1/2 clip is applied
/// once, to the full product.
inline SchmidtValue distill_many(std::span<const SchmidtValue> values) {
  if (values.empty()) {
    throw std::invalid_argument("distill_many: empty input");
  }
  double product = 1.0;
  for (const auto v : values) product *= v.value();
  return SchmidtValue(std::max(0.5, product));
}

inline SchmidtValue distill_many(std::initializer_list<SchmidtValue> values) {
  return distill_many(std::span<const SchmidtValue>(values.begin(), values.size()));
}

}  // namespace entperc

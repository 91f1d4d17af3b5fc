#pragma once

// Majorization predicates and LOCC conversion probabilities (Nielsen / Vidal)
// for Schmidt vectors of bipartite pure states.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>

#include "entperc/schmidt.hpp"
#include "entperc/tolerance.hpp"

namespace entperc {

/// Schmidt coefficients sorted in descending order, summing to one.
template <std::size_t N>
class SchmidtVector {
 public:
  explicit SchmidtVector(std::array<double, N> entries) : entries_(entries) {
    std::sort(entries_.begin(), entries_.end(), std::greater<>());
    double sum = 0.0;
    for (double& e : entries_) {
      if (e < -Tolerances::compare) {
        throw std::invalid_argument("SchmidtVector: negative entry");
      }
      e = std::max(e, 0.0);
      sum += e;
    }
    if (std::abs(sum - 1.0) > Tolerances::compare * N) {
      throw std::invalid_argument("SchmidtVector: entries do not sum to 1");
    }
  }

  [[nodiscard]] const std::array<double, N>& entries() const { return entries_; }
  [[nodiscard]] double operator[](std::size_t i) const { return entries_[i]; }
  static constexpr std::size_t size() { return N; }

  // Sum of entries[l..N).
  [[nodiscard]] double suffix_sum(std::size_t l) const {
    double s = 0.0;
    for (std::size_t i = N; i-- > l;) s += entries_[i];
    return s;
  }

  [[nodiscard]] double prefix_sum(std::size_t l) const {
    double s = 0.0;
    for (std::size_t i = 0; i < l; ++i) s += entries_[i];
    return s;
  }

 private:
  std::array<double, N> entries_;
};

using SchmidtVector4 = SchmidtVector<4>;

/// Schmidt vector of |a> (x) |b>.
inline SchmidtVector4 product_vector(SchmidtValue a, SchmidtValue b) {
  const double x = a.value();
  const double y = b.value();
  return SchmidtVector4({x * y, x * (1.0 - y), y * (1.0 - x), (1.0 - x) * (1.0 - y)});
}

/// v is majorized by w: every prefix sum of v is at most that of w.
/// By Nielsen's theorem this is deterministic LOCC convertibility v -> w.
template <std::size_t N>
bool majorized_by(const SchmidtVector<N>& v, const SchmidtVector<N>& w) {
  double pv = 0.0;
  double pw = 0.0;
  for (std::size_t l = 0; l < N; ++l) {
    pv += v[l];
    pw += w[l];
    if (pv > pw + Tolerances::compare) return false;
  }
  return true;
}

/// v is submajorized by w: every suffix sum of v is at least that of w.
template <std::size_t N>
bool submajorized_by(const SchmidtVector<N>& v, const SchmidtVector<N>& w) {
  for (std::size_t l = 0; l < N; ++l) {
    if (v.suffix_sum(l) < w.suffix_sum(l) - Tolerances::compare) return false;
  }
  return true;
}

/// Optimal probability of converting `source` into `target` by LOCC.
template <std::size_t N>
double vidal_success_probability(const SchmidtVector<N>& source,
                                 const SchmidtVector<N>& target) {
  double best = 1.0;
  for (std::size_t l = 0; l < N; ++l) {
    const double s = source.suffix_sum(l);
    const double t = target.suffix_sum(l);
    if (t <= Tolerances::compare) continue;  // ratio is unbounded or 0/0
    best = std::min(best, s / t);
  }
  if (best >= 1.0 - Tolerances::compare) return 1.0;
  return std::clamp(best, 0.0, 1.0);
}

/// Probability of distilling |a> (x) |b> into a single link with Schmidt
/// value `target`; equals 1 for every target >= max(1/2, ab).
inline double distill_success_probability(SchmidtValue a, SchmidtValue b,
                                          SchmidtValue target) {
  const double ab = a.value() * b.value();
  const double slack = 1.0 - target.value();
  // A product-state target is always reachable.
  if (slack <= Tolerances::compare) return 1.0;
  const double p = (1.0 - ab) / slack;
  if (p >= 1.0 - Tolerances::compare) return 1.0;
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace entperc

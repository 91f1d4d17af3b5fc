#pragma once

// Seeded initial Schmidt values: uniform, or truncated normal with an
// enforced sample mean.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "entperc/network.hpp"
#include "entperc/tolerance.hpp"

namespace entperc {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream seed for a labelled sub-task:
///   h = mix64(master); for each label: h = mix64(h ^ mix64(label));
///   result = mix64(h + count)
/// Order-sensitive and platform independent.
inline std::uint64_t derive_seed(std::uint64_t master, std::span<const std::int64_t> labels) {
  std::uint64_t h = mix64(master);
  for (const auto label : labels) h = mix64(h ^ mix64(static_cast<std::uint64_t>(label)));
  return mix64(h + labels.size());
}

inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::int64_t> labels) {
  return derive_seed(master, std::span<const std::int64_t>(labels.begin(), labels.size()));
}

/// mt19937_64 with distribution code that does not depend on the standard
/// library implementation, so draws are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, n), unbiased.
  std::size_t index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::index: empty range");
    const std::uint64_t bound = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  /// Standard normal by Box-Muller.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do u1 = uniform();
    while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

enum class DisorderMode { Uniform, TruncatedNormal };

inline std::string_view to_string(DisorderMode m) {
  return m == DisorderMode::Uniform ? "uniform" : "truncated-normal";
}

inline DisorderMode parse_disorder_mode(std::string_view s) {
  if (s == "uniform") return DisorderMode::Uniform;
  if (s == "truncated-normal") return DisorderMode::TruncatedNormal;
  throw std::invalid_argument("unknown disorder mode '" + std::string(s) + "'");
}

struct DisorderSpec {
  DisorderMode mode = DisorderMode::Uniform;
  double lambda_mean = 0.5;
  double sigma = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const DisorderSpec&, const DisorderSpec&) = default;
};

struct MeanEnforcementError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Draws `count` values in [1/2, 1] whose mean equals `spec.lambda_mean`.
inline std::vector<double> sample_schmidt_values(const DisorderSpec& spec, std::size_t count) {
  if (!(spec.lambda_mean >= 0.5 && spec.lambda_mean <= 1.0)) {
    throw std::invalid_argument("disorder: lambda_mean outside [1/2, 1]");
  }
  if (!(spec.sigma >= 0.0)) throw std::invalid_argument("disorder: negative sigma");
  std::vector<double> values(count, spec.lambda_mean);
  if (spec.mode == DisorderMode::Uniform || spec.sigma == 0.0 || count == 0) return values;

  Rng rng(spec.seed);
  for (auto& v : values) {
    // Rejection keeps the shape of the normal inside the physical range.
    do v = spec.lambda_mean + spec.sigma * rng.normal();
    while (v < 0.5 || v > 1.0);
  }
  for (int it = 0; it < Tolerances::mean_enforcement_max_iterations; ++it) {
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= static_cast<double>(count);
    const double shift = spec.lambda_mean - mean;
    if (std::abs(shift) <= Tolerances::mean_enforcement) return values;
    for (auto& v : values) v = std::clamp(v + shift, 0.5, 1.0);
  }
  throw MeanEnforcementError("disorder: could not enforce mean " +
                             std::to_string(spec.lambda_mean) + " with sigma " +
                             std::to_string(spec.sigma));
}

/// Overwrites every original link of a pristine network.
inline void assign(QuantumNetwork& net, const DisorderSpec& spec) {
  const auto values = sample_schmidt_values(spec, net.original_count());
  for (std::size_t i = 0; i < values.size(); ++i) {
    net.set_original_lambda(link_id(i), SchmidtValue(values[i]));
  }
}

}  // namespace entperc

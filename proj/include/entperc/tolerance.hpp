#pragma once

namespace entperc {

// Shared numeric tolerances. Property tests and the threshold solver read
// these rather than hard-coding their own.
struct Tolerances {
  // Comparisons of Schmidt values, probabilities and vector sums.
  static constexpr double compare = 1e-12;
  // Absolute width of the bisection bracket at termination.
  static constexpr double bisection = 1e-9;
  static constexpr int bisection_max_iterations = 60;
  // Mean enforcement of sampled disorder.
  static constexpr double mean_enforcement = 1e-6;
  static constexpr int mean_enforcement_max_iterations = 100;
};

inline constexpr double kMaxEntangled = 0.5;

}  // namespace entperc

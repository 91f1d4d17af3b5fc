#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <random>

#include "entperc/majorization.hpp"

using namespace entperc;

namespace {

SchmidtValue S(double x) { return SchmidtValue(x); }

// Target of the two-qubit distillation embedded next to an ancilla pair with
// Schmidt value phi.
SchmidtVector4 ancilla_target(double lambda, double phi) {
  return SchmidtVector4(
      {lambda * phi, (1 - lambda) * phi, lambda * (1 - phi), (1 - lambda) * (1 - phi)});
}

SchmidtVector4 random_vector(std::mt19937_64& gen) {
  std::exponential_distribution<double> e(1.0);
  std::array<double, 4> x{};
  double sum = 0;
  for (auto& v : x) sum += v = e(gen);
  for (auto& v : x) v /= sum;
  // Renormalize the last entry so the sum is exact enough for the checks.
  x[3] = 1.0 - x[0] - x[1] - x[2];
  if (x[3] < 0) x[3] = 0;
  return SchmidtVector4(x);
}

}  // namespace

TEST(ProductVector, Examples) {
  const auto q = product_vector(S(0.5), S(0.5));
  for (double v : q.entries()) EXPECT_DOUBLE_EQ(v, 0.25);
  const auto p = product_vector(S(1.0), S(1.0));
  EXPECT_DOUBLE_EQ(p[0], 1.0);
  EXPECT_DOUBLE_EQ(p[3], 0.0);
  const auto r = product_vector(S(0.8), S(0.7));
  const std::array<double, 4> expect{0.56, 0.24, 0.14, 0.06};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(r[i], expect[i], 1e-12);
}

TEST(SchmidtVector, RejectsBadInput) {
  EXPECT_THROW(SchmidtVector4({0.5, 0.6, 0.0, -0.1}), std::invalid_argument);
  EXPECT_THROW(SchmidtVector4({0.5, 0.6, 0.0, 0.0}), std::invalid_argument);
}

TEST(Majorization, Examples) {
  const SchmidtVector4 u({0.25, 0.25, 0.25, 0.25});
  const SchmidtVector4 e({1, 0, 0, 0});
  EXPECT_TRUE(majorized_by(u, u));
  EXPECT_TRUE(submajorized_by(u, u));
  EXPECT_TRUE(majorized_by(u, e));
  EXPECT_FALSE(majorized_by(e, u));
}

TEST(Vidal, Examples) {
  const SchmidtVector4 a({0.4, 0.3, 0.2, 0.1});
  EXPECT_DOUBLE_EQ(vidal_success_probability(a, a), 1.0);
  EXPECT_DOUBLE_EQ(vidal_success_probability(SchmidtVector4({1, 0, 0, 0}),
                                             SchmidtVector4({0.5, 0.5, 0, 0})),
                   0.0);
}

// Brute-force oracle: v -> w deterministically iff every prefix of v is
// bounded by w's, checked with explicit loops over sorted copies.
TEST(Vidal, DeterministicIffMajorized) {
  std::mt19937_64 gen(7);
  int agree = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto v = random_vector(gen);
    const auto w = (i % 3 == 0) ? SchmidtVector4(v.entries()) : random_vector(gen);
    bool prefix_ok = true;
    double pv = 0, pw = 0;
    for (std::size_t l = 0; l < 4; ++l) {
      pv += v[l];
      pw += w[l];
      prefix_ok = prefix_ok && pv <= pw + 1e-12;
    }
    const bool certain = vidal_success_probability(v, w) == 1.0;
    EXPECT_EQ(majorized_by(v, w), prefix_ok);
    EXPECT_EQ(certain, majorized_by(v, w));
    agree += certain;
  }
  EXPECT_GT(agree, 3000);  // both branches are exercised
}

TEST(DistillProbability, Examples) {
  EXPECT_NEAR(distill_success_probability(S(0.9), S(0.9), S(0.5)), 0.38, 1e-12);
  EXPECT_DOUBLE_EQ(distill_success_probability(S(0.7), S(0.7), S(0.5)), 1.0);
}

TEST(DistillProbability, CertainAtDeterministicTarget) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double a = u(gen), b = u(gen);
    EXPECT_DOUBLE_EQ(distill_success_probability(S(a), S(b), S(std::max(0.5, a * b))), 1.0);
    EXPECT_NEAR(distill_success_probability(S(a), S(b), S(0.5)),
                std::min(1.0, 2.0 * (1.0 - a * b)), 1e-12);
  }
}

TEST(DistillProbability, MatchesVidalInAncillaLimit) {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  const double phi = 1.0 - 1e-9;
  for (int i = 0; i < 1000; ++i) {
    const double a = u(gen), b = u(gen);
    const double target = u(gen);
    const double vidal =
        vidal_success_probability(product_vector(S(a), S(b)), ancilla_target(target, phi));
    EXPECT_NEAR(vidal, distill_success_probability(S(a), S(b), S(target)), 1e-6);
  }
}

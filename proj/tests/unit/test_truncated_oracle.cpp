#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cevem/montecarlo.hpp"
#include "cevem/truncated_oracle.hpp"

using namespace cevem;

TEST(TruncatedDiffusion, Examples) {
  const ModelParams params{0.0, 1.0, 0.5, 1.0};
  const TruncationLevel level(10, params);
  EXPECT_NEAR(truncated_diffusion(0.0, level, params), 0.316228, 5e-7);
  EXPECT_EQ(truncated_diffusion(1.0, level, params), 1.0);
  EXPECT_EQ(truncated_diffusion(-1.0, level, params), 1.0);
}

TEST(TruncatedDiffusion, LipschitzCertificate) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (double p : {0.5, 0.6, 0.75, 0.95}) {
    const ModelParams params{0.0, 1.7, p, 1.0};
    for (std::size_t i : {2u, 10u, 100u}) {
      const TruncationLevel level(i, params);
      const double L = truncated_lipschitz_constant(level, params);
      for (int r = 0; r < 20000; ++r) {
        const double x = u(gen), y = u(gen);
        const double gap = std::abs(truncated_diffusion(x, level, params) - truncated_diffusion(y, level, params));
        EXPECT_LE(gap, L * std::abs(x - y) * (1 + 1e-12) + 1e-15);
      }
    }
  }
}

TEST(TruncationLevel, Validation) {
  const ModelParams params{0.0, 1.0, 0.5, 0.1};
  EXPECT_THROW(TruncationLevel(10, params), Error);
  EXPECT_NO_THROW(TruncationLevel(11, params));
  EXPECT_THROW(TruncationLevel(0, params), Error);
  const std::vector<std::size_t> bad{100, 20};
  EXPECT_THROW(make_levels(bad, params), Error);
}

TEST(SimulateTruncated, ZeroNoiseConstant) {
  const ModelParams params{0.0, 1.0, 0.5, 1.0};
  const SimGrid g(1.0, 100);
  const TruncatedPath p = simulate_truncated(params, TruncationLevel(10, params), g, {std::vector<double>(100, 0.0), {}});
  for (double v : p.values) EXPECT_EQ(v, 1.0);
  EXPECT_FALSE(p.theta_index());
  EXPECT_FALSE(p.tau_estimate());
}

TEST(SimulateTruncated, StopsAtLevel) {
  const ModelParams params{0.0, 1.0, 0.5, 1.0};
  const SimGrid g(1.0, 5);
  std::vector<double> xi{0.0, -3.0, 1.0, 1.0, 1.0};
  const TruncatedPath p = simulate_truncated(params, TruncationLevel(2, params), g, {xi, {}});
  ASSERT_TRUE(p.theta_index());
  EXPECT_EQ(*p.theta_index(), 2u);
  EXPECT_LE(p.values[2], 0.5);
  for (std::size_t k = 2; k < p.values.size(); ++k) EXPECT_EQ(p.values[k], p.values[2]);
  EXPECT_DOUBLE_EQ(*p.tau_estimate(), 0.4);
}

TEST(Prolong, SingleLevelIsSimulateTruncated) {
  const ModelParams params{1.0, 1.0, 0.75, 0.5};
  const SimGrid g(2.0, 2000);
  const TruncationLevel level(4, params);
  for (std::uint32_t j = 0; j < 30; ++j) {
    const NoiseSkeleton noise = make_noise(g, 14, j);
    const TruncatedPath a = simulate_truncated(params, level, g, noise);
    const std::vector<TruncationLevel> one{level};
    const TruncatedPath b = prolong(params, one, g, noise);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.theta, b.theta);
  }
}

TEST(Prolong, NestedLevelsAgreeUpToFirstStop) {
  const ModelParams params{-1.0, 1.0, 0.5, 1.0};
  const SimGrid g(3.0, 3000);
  const std::vector<std::size_t> idx{4, 8};
  const auto levels = make_levels(idx, params);
  std::size_t stopped = 0;
  for (std::uint32_t j = 0; j < 200; ++j) {
    const NoiseSkeleton noise = make_noise(g, 15, j);
    const TruncatedPath coarse = simulate_truncated(params, levels[0], g, noise);
    const TruncatedPath both = prolong(params, levels, g, noise);
    if (!coarse.theta_index()) {
      EXPECT_EQ(coarse.values, both.values);
      continue;
    }
    ++stopped;
    const std::size_t t4 = *coarse.theta_index();
    for (std::size_t k = 0; k <= t4; ++k) EXPECT_EQ(coarse.values[k], both.values[k]);
    ASSERT_TRUE(both.theta[0]);
    EXPECT_EQ(*both.theta[0], t4);
    if (both.theta[1]) {
      EXPECT_GE(*both.theta[1], t4);
    }
  }
  EXPECT_GT(stopped, 50u);
}

TEST(Prolong, AbovePositiveLevelMatchesEm) {
  // Above every floor the truncated and CEV coefficients coincide.
  const ModelParams params{1.0, 1.0, 0.5, 1.0};
  const SimGrid g(1.0, 1000);
  const std::vector<std::size_t> idx{10, 100};
  const auto levels = make_levels(idx, params);
  for (std::uint32_t j = 0; j < 50; ++j) {
    const NoiseSkeleton noise = make_noise(g, 16, j);
    const PathSkeleton em = simulate_skeleton(params, g, noise);
    const TruncatedPath tr = prolong(params, levels, g, noise);
    const std::size_t stop = tr.theta[0] ? *tr.theta[0] : g.steps();
    for (std::size_t k = 0; k <= stop; ++k) EXPECT_EQ(em.values[k], tr.values[k]);
  }
}

TEST(Prolong, TauFractionMatchesEmAbsorption) {
  const ModelParams params{-1.0, 1.0, 0.5, 0.25};
  const SimGrid coarse(3.0, 3000);
  const SimGrid fine(3.0, 30000);
  const std::vector<std::size_t> idx{10, 100, 1000};
  const auto levels = make_levels(idx, params);
  const std::size_t N = 1000;
  const auto oracle = oracle_terminals(params, levels, fine, N, 17, 1);
  std::size_t stopped = 0;
  for (double v : oracle) stopped += v == 0.0;
  const EnsembleResult em = run_ensemble(params, coarse, {N, 17, 1});
  const double p_em = em.absorbed_fraction();
  const double p_or = static_cast<double>(stopped) / N;
  const double se = std::sqrt(2 * p_em * (1 - p_em) / N);
  EXPECT_NEAR(p_or, p_em, 3 * se + 1e-3);
}

TEST(Prolong, NoiseLengthMismatch) {
  const ModelParams params{0.0, 1.0, 0.5, 1.0};
  const std::vector<TruncationLevel> one{TruncationLevel(2, params)};
  EXPECT_THROW(prolong(params, one, SimGrid(1.0, 5), {std::vector<double>(4, 0.0), {}}), Error);
}

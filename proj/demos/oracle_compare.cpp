// Terminal distribution of the scheme against the truncated-coefficient
// oracle, compared with the two-sample Kolmogorov-Smirnov statistic.

#include <cstdio>
#include <vector>

#include "cevem/cevem.hpp"

int main() {
  using namespace cevem;
  const ModelParams params = validate(-1.0, 1.0, 0.5, 0.25);
  const std::size_t N = 2000;
  const std::vector<std::size_t> idx{10, 100, 1000};
  const auto levels = make_levels(idx, params);

  const auto em = em_terminals_clamped(params, SimGrid(3.0, 3000), N, kDefaultSeed, 1);
  const auto oracle = oracle_terminals(params, levels, SimGrid(3.0, 30000), N, kDefaultSeed, 1);

  const double ks = diagnostics::ks_two_sample(em, oracle);
  const double crit = diagnostics::ks_critical_value(0.01, N, N);
  std::printf("KS = %.4f, 1%% critical value %.4f: %s\n", ks, crit, ks < crit ? "consistent" : "different");
}

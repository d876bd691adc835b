// Refines skeletons with Brownian bridges and shows how the uniform distance
// to the continuous approximation shrinks as the grid gets finer.

#include <cstdio>
#include <vector>

#include "cevem/cevem.hpp"

int main() {
  using namespace cevem;
  const ModelParams params = validate(-1.0, 1.0, 0.5, 0.25);
  const std::vector<std::size_t> ns{100, 1000, 10000};

  for (const auto& pt : diagnostics::rho_convergence(params, 3.0, ns, 200, 16, kDefaultSeed)) {
    std::printf("n=%-6zu E rho^2 = %.3e +- %.1e\n", pt.n, pt.mean_rho_sq, pt.std_error);
  }

  // one path in detail
  const SimGrid grid(3.0, 1000);
  const PathSkeleton skeleton = simulate_skeleton(params, grid, make_noise(grid, kDefaultSeed, 0));
  const RefinedPath refined = refine_path(skeleton, params, 16, kDefaultSeed, 0);
  const diagnostics::GapReport gaps = diagnostics::qv_drift_gaps(params, grid, refined);
  std::printf("path 0: rho=%.4g drift_gap=%.4g (<= %.4g) qv_gap=%.4g (<= %.4g)\n", gaps.rho, gaps.drift_gap,
              gaps.drift_bound, gaps.qv_gap, gaps.qv_bound);
}

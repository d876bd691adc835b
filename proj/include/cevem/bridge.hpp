#pragma once

// Continuous approximation of an Euler-Maruyama skeleton. Within step k the
// coefficients are frozen at the left grid value and the driving Brownian
// motion is a bridge pinned to the skeleton's increment sqrt(dt) xi_k:
//   Xt_t = X_{k-1} + mu X_{k-1}^+ (t - t_{k-1}) + sigma (X_{k-1}^+)^p (W_t - W_{t_{k-1}}).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "cevem/em_scheme.hpp"
#include "cevem/error.hpp"
#include "cevem/model.hpp"
#include "cevem/rng.hpp"

namespace cevem {

/// Samples a Brownian path on [0, dt] with W(0) = 0, W(dt) = total_increment
/// at the interior points j dt / m, j = 1..m-1.
///
/// Points are filled by recursive bisection of the index range [0, m] in
/// breadth-first order, each midpoint drawn from its Gaussian conditional
/// given the two already-known endpoints. For m a power of two the draws
/// consumed for m are a prefix of the draws consumed for 2m and land on the
/// same times, so refining m -> 2m keeps every existing value bit-for-bit.
template <class NormalSource>
std::vector<double> bridge_fill(double total_increment, double dt, std::size_t m,
                                NormalSource&& next_normal) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "bridge refinement m must be >= 1");
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "bridge dt must be > 0");
  if (m == 1) return {};

  std::vector<double> w(m + 1, 0.0);
  w[m] = total_increment;
  const double md = static_cast<double>(m);

  std::vector<std::pair<std::size_t, std::size_t>> queue;
  queue.reserve(m);
  queue.emplace_back(0, m);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto [a, b] = queue[head];
    if (b - a < 2) continue;
    const std::size_t mid = a + (b - a) / 2;
    const double left = dt * static_cast<double>(mid - a) / md;
    const double right = dt * static_cast<double>(b - mid) / md;
    const double mean = w[a] + left / (left + right) * (w[b] - w[a]);
    const double var = left * right / (left + right);
    w[mid] = mean + std::sqrt(var) * next_normal();
    queue.emplace_back(a, mid);
    queue.emplace_back(mid, b);
  }
  return {w.begin() + 1, w.end() - 1};
}

/// Dedicated bridge substream per (path, step); independent of the skeleton
/// stream, so changing m never perturbs the coarse noise.
struct BridgeStreams {
  std::uint64_t seed = 0;
  std::uint32_t path = 0;

  rng::Substream operator()(std::size_t step) const {
    return rng::Substream(seed, rng::StreamKind::Bridge, path, static_cast<std::uint32_t>(step));
  }
};

/// Refined samples of the continuous approximation at m points per step.
/// `parent` observes the skeleton it was built from and must outlive this.
struct RefinedPath {
  std::size_t refinement = 1;
  std::vector<double> times;
  std::vector<double> values;
  const PathSkeleton* parent = nullptr;

  std::size_t index(std::size_t step, std::size_t sub) const { return step * refinement + sub; }
};

/// `streams(k)` must return a normal source for step k (1-based).
template <class StreamFactory>
RefinedPath refine_path(const PathSkeleton& parent, const ModelParams& params, std::size_t m,
                        StreamFactory&& streams) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "refinement m must be >= 1");
  const SimGrid& grid = parent.grid;
  const std::size_t n = grid.steps();
  if (parent.noise.xi.size() != n || parent.values.size() != n + 1) {
    throw Error(ErrorCode::MismatchedPaths, "skeleton is not well-formed");
  }
  const double dt = grid.dt();
  const double sqrt_dt = std::sqrt(dt);
  const double md = static_cast<double>(m);

  RefinedPath out;
  out.refinement = m;
  out.parent = &parent;
  out.times.resize(n * m + 1);
  out.values.resize(n * m + 1);
  out.times[0] = 0.0;
  out.values[0] = parent.values[0];

  for (std::size_t k = 1; k <= n; ++k) {
    const double left = parent.values[k - 1];
    const double t_left = grid.time(k - 1);
    for (std::size_t j = 1; j < m; ++j) out.times[out.index(k - 1, j)] = t_left + dt * static_cast<double>(j) / md;
    out.times[out.index(k, 0)] = grid.time(k);
    out.values[out.index(k, 0)] = parent.values[k];

    if (!(left > 0.0)) {
      for (std::size_t j = 1; j < m; ++j) out.values[out.index(k - 1, j)] = left;
      continue;
    }
    auto source = streams(k);
    const std::vector<double> w = bridge_fill(sqrt_dt * parent.noise.xi[k - 1], dt, m, source);
    const double drift = params.mu * left;
    const double vol = params.sigma * pos_pow(left, params.p);
    for (std::size_t j = 1; j < m; ++j) {
      const double s = dt * static_cast<double>(j) / md;
      out.values[out.index(k - 1, j)] = left + drift * s + vol * w[j - 1];
    }
  }
  return out;
}

inline RefinedPath refine_path(const PathSkeleton& parent, const ModelParams& params, std::size_t m,
                               std::uint64_t seed, std::uint32_t path) {
  return refine_path(parent, params, m, BridgeStreams{seed, path});
}

/// Uniform distance between the piecewise-constant skeleton and the refined
/// continuous approximation. Each step's sup runs over the closed interval
/// [t_{k-1}, t_k], i.e. it includes the left limit |X_k - X_{k-1}| at t_k.
inline double sup_distance(const PathSkeleton& parent, const RefinedPath& refined) {
  if (refined.parent != &parent) {
    throw Error(ErrorCode::MismatchedPaths, "refined path was not built from this skeleton");
  }
  const std::size_t m = refined.refinement;
  double rho = 0.0;
  for (std::size_t k = 1; k <= parent.grid.steps(); ++k) {
    const double left = parent.values[k - 1];
    for (std::size_t j = 1; j <= m; ++j) {
      rho = std::max(rho, std::abs(refined.values[refined.index(k - 1, j)] - left));
    }
  }
  return rho;
}

}  // namespace cevem

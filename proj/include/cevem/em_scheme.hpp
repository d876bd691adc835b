#pragma once

// Euler-Maruyama recursion for the CEV diffusion on an equidistant grid:
//   X_k = X_{k-1} + mu dt X_{k-1}^+ + sigma (X_{k-1}^+)^p sqrt(dt) xi_k,
// absorbed at the first grid value <= 0.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cevem/error.hpp"
#include "cevem/model.hpp"
#include "cevem/rng.hpp"

namespace cevem {

struct SeedTag {
  std::uint64_t seed = 0;
  std::uint32_t path = 0;

  friend bool operator==(const SeedTag&, const SeedTag&) = default;
};

/// The i.i.d. N(0,1) draws xi_1..xi_n driving one path.
struct NoiseSkeleton {
  std::vector<double> xi;
  std::optional<SeedTag> seed_tag;
};

/// Draws the skeleton noise of path `path` under `seed`; identical to what the
/// ensemble engine consumes for that path.
inline NoiseSkeleton make_noise(const SimGrid& grid, std::uint64_t seed, std::uint32_t path) {
  rng::Substream stream(seed, rng::StreamKind::Skeleton, path);
  NoiseSkeleton noise;
  noise.xi.resize(grid.steps());
  for (double& v : noise.xi) v = stream.normal();
  noise.seed_tag = SeedTag{seed, path};
  return noise;
}

/// Grid values of one simulated path, frozen after absorption.
struct PathSkeleton {
  SimGrid grid;
  std::vector<double> values;
  std::optional<std::size_t> absorption_index;
  NoiseSkeleton noise;

  double terminal() const { return values.back(); }
};

namespace detail {

// Shared by em_step and advance_path so both produce bit-identical values.
inline double em_update(double x, const ModelParams& params, double dt, double sqrt_dt,
                        double xi) noexcept {
  return x + params.mu * dt * x + params.sigma * pos_pow(x, params.p) * sqrt_dt * xi;
}

}  // namespace detail

/// One step of the recursion. Nonpositive states are returned unchanged.
inline double em_step(double x_prev, const ModelParams& params, double dt, double xi) {
  if (!std::isfinite(x_prev) || !std::isfinite(xi)) {
    throw Error(ErrorCode::NonFiniteState, "non-finite input to em_step");
  }
  if (!(x_prev > 0.0)) return x_prev;
  const double next = detail::em_update(x_prev, params, dt, std::sqrt(dt), xi);
  if (!std::isfinite(next)) {
    throw Error(ErrorCode::NonFiniteState, "state overflowed; dt too coarse for the drift");
  }
  return next;
}

struct StreamedPath {
  double terminal = 0.0;
  std::optional<std::size_t> absorption_index;
};

/// Runs the recursion drawing xi_k from `next_xi()` and calls
/// `visit(k, value)` for k = 1..stop, where stop is the absorption index or
/// the last grid index. No draws are consumed after absorption.
template <class NormalSource, class Visitor>
StreamedPath advance_path(const ModelParams& params, const SimGrid& grid, NormalSource&& next_xi,
                          Visitor&& visit) {
  const double dt = grid.dt();
  const double sqrt_dt = std::sqrt(dt);
  double x = params.x0;
  for (std::size_t k = 1; k <= grid.steps(); ++k) {
    const double xi = next_xi();
    const double next = detail::em_update(x, params, dt, sqrt_dt, xi);
    if (!std::isfinite(next)) {
      throw Error(ErrorCode::NonFiniteState,
                  "state became non-finite at step " + std::to_string(k));
    }
    x = next;
    visit(k, x);
    if (!(x > 0.0)) return {x, k};
  }
  return {x, std::nullopt};
}

template <class NormalSource>
StreamedPath advance_path(const ModelParams& params, const SimGrid& grid, NormalSource&& next_xi) {
  return advance_path(params, grid, next_xi, [](std::size_t, double) {});
}

inline PathSkeleton simulate_skeleton(const ModelParams& params, const SimGrid& grid,
                                      NoiseSkeleton noise) {
  if (noise.xi.size() != grid.steps()) {
    throw Error(ErrorCode::NoiseLengthMismatch,
                "noise has " + std::to_string(noise.xi.size()) + " draws for " +
                    std::to_string(grid.steps()) + " steps");
  }
  PathSkeleton path{grid, {}, std::nullopt, {}};
  path.values.resize(grid.steps() + 1);
  path.values[0] = params.x0;
  std::size_t cursor = 0;
  const StreamedPath run = advance_path(
      params, grid, [&] { return noise.xi[cursor++]; },
      [&](std::size_t k, double v) { path.values[k] = v; });
  if (run.absorption_index) {
    for (std::size_t j = *run.absorption_index + 1; j <= grid.steps(); ++j) {
      path.values[j] = path.values[*run.absorption_index];
    }
  }
  path.absorption_index = run.absorption_index;
  path.noise = std::move(noise);
  return path;
}

/// First grid index with a nonpositive value.
inline std::optional<std::size_t> hitting_index(std::span<const double> values) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(values[k] > 0.0)) return k;
  }
  return std::nullopt;
}

inline std::optional<std::size_t> hitting_index(const PathSkeleton& path) {
  return hitting_index(std::span<const double>(path.values));
}

}  // namespace cevem

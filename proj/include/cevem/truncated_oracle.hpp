#pragma once

// Independent simulation route through the truncated SDEs
//   dX^i = mu X^i dt + sigma (1/i v |X^i|)^p dW,   X^i_0 = x0,
// each stopped when it first drops to the level 1/i and continued by the next
// (finer) level from the stopping state. Coefficients agree with the CEV
// coefficients above the level, so nested levels share their paths up to the
// earlier stopping time.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cevem/em_scheme.hpp"
#include "cevem/error.hpp"
#include "cevem/model.hpp"
#include "cevem/parallel.hpp"
#include "cevem/rng.hpp"

namespace cevem {

class TruncationLevel {
 public:
  TruncationLevel(std::size_t index, const ModelParams& params) : index_(index) {
    if (index < 1 || !(floor() < params.x0)) {
      throw Error(ErrorCode::InvalidTruncationLevel,
                  "level i = " + std::to_string(index) + " needs 1/i < x0");
    }
  }

  std::size_t index() const noexcept { return index_; }
  double floor() const noexcept { return 1.0 / static_cast<double>(index_); }

 private:
  std::size_t index_;
};

inline std::vector<TruncationLevel> make_levels(std::span<const std::size_t> indices,
                                                const ModelParams& params) {
  if (indices.empty()) throw Error(ErrorCode::InvalidTruncationLevel, "no truncation levels");
  std::vector<TruncationLevel> levels;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i > 0 && indices[i] <= indices[i - 1]) {
      throw Error(ErrorCode::InvalidTruncationLevel, "levels must be strictly increasing");
    }
    levels.emplace_back(indices[i], params);
  }
  return levels;
}

/// sigma (max(1/i, |x|))^p. Lipschitz with constant sigma p i^{1-p}.
inline double truncated_diffusion(double x, const TruncationLevel& level,
                                  const ModelParams& params) noexcept {
  const double base = std::max(level.floor(), std::abs(x));
  return params.sigma * (params.p == 0.5 ? std::sqrt(base) : std::pow(base, params.p));
}

inline double truncated_lipschitz_constant(const TruncationLevel& level,
                                           const ModelParams& params) noexcept {
  return params.sigma * params.p * std::pow(level.floor(), params.p - 1.0);
}

struct ProlongOutcome {
  // stopping grid index per level; absent once the path survives to T
  std::vector<std::optional<std::size_t>> theta;
  double terminal = 0.0;

  std::optional<std::size_t> final_theta() const { return theta.empty() ? std::nullopt : theta.back(); }
};

/// Streaming prolongation: xi_k comes from `next_xi()`, `visit(k, value)` sees
/// every computed grid value. Level l runs from the stopping state of level
/// l-1 and stops at the first grid value <= its floor.
template <class NormalSource, class Visitor>
ProlongOutcome prolong_stream(const ModelParams& params, std::span<const TruncationLevel> levels,
                              const SimGrid& grid, NormalSource&& next_xi, Visitor&& visit) {
  const double dt = grid.dt();
  const double sqrt_dt = std::sqrt(dt);
  ProlongOutcome out;
  out.theta.assign(levels.size(), std::nullopt);
  double x = params.x0;
  std::size_t k = 0;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const TruncationLevel& level = levels[l];
    const double floor = level.floor();
    if (l > 0) {
      if (!out.theta[l - 1]) break;
      if (x <= floor) {
        out.theta[l] = k;
        continue;
      }
    }
    while (k < grid.steps()) {
      const double xi = next_xi();
      const double next = x + params.mu * dt * x + truncated_diffusion(x, level, params) * sqrt_dt * xi;
      if (!std::isfinite(next)) {
        throw Error(ErrorCode::NonFiniteState,
                    "truncated state became non-finite at step " + std::to_string(k + 1));
      }
      x = next;
      ++k;
      visit(k, x);
      if (x <= floor) {
        out.theta[l] = k;
        break;
      }
    }
  }
  out.terminal = x;
  return out;
}

struct TruncatedPath {
  SimGrid grid;
  std::vector<double> values;
  std::vector<std::optional<std::size_t>> theta;

  std::optional<std::size_t> theta_index() const { return theta.empty() ? std::nullopt : theta.back(); }
  std::optional<double> tau_estimate() const {
    const auto t = theta_index();
    if (!t) return std::nullopt;
    return grid.time(*t);
  }
};

inline TruncatedPath prolong(const ModelParams& params, std::span<const TruncationLevel> levels,
                             const SimGrid& fine_grid, const NoiseSkeleton& noise) {
  if (noise.xi.size() != fine_grid.steps()) {
    throw Error(ErrorCode::NoiseLengthMismatch, "noise length must equal fine grid steps");
  }
  if (levels.empty()) throw Error(ErrorCode::InvalidTruncationLevel, "no truncation levels");
  for (std::size_t l = 1; l < levels.size(); ++l) {
    if (levels[l].index() <= levels[l - 1].index()) {
      throw Error(ErrorCode::InvalidTruncationLevel, "levels must be strictly increasing");
    }
  }
  TruncatedPath path{fine_grid, std::vector<double>(fine_grid.steps() + 1), {}};
  path.values[0] = params.x0;
  std::size_t cursor = 0;
  std::size_t last = 0;
  const ProlongOutcome run = prolong_stream(
      params, levels, fine_grid, [&] { return noise.xi[cursor++]; },
      [&](std::size_t k, double v) {
        path.values[k] = v;
        last = k;
      });
  for (std::size_t j = last + 1; j <= fine_grid.steps(); ++j) path.values[j] = path.values[last];
  path.theta = run.theta;
  return path;
}

/// Single-level run: frozen at the first grid value <= 1/i.
inline TruncatedPath simulate_truncated(const ModelParams& params, const TruncationLevel& level,
                                        const SimGrid& fine_grid, const NoiseSkeleton& noise) {
  return prolong(params, std::span<const TruncationLevel>(&level, 1), fine_grid, noise);
}

/// Oracle terminal value: 0 when the final level stopped the path, the
/// running value otherwise. Path j uses the oracle substream (seed, j).
inline std::vector<double> oracle_terminals(const ModelParams& params,
                                            std::span<const TruncationLevel> levels,
                                            const SimGrid& fine_grid, std::size_t num_paths,
                                            std::uint64_t seed, std::size_t workers) {
  return parallel_map(num_paths, workers, [&](std::size_t j) {
    rng::Substream stream(seed, rng::StreamKind::Oracle, static_cast<std::uint32_t>(j));
    const ProlongOutcome run =
        prolong_stream(params, levels, fine_grid, stream, [](std::size_t, double) {});
    return run.final_theta() ? 0.0 : run.terminal;
  });
}

/// Euler-Maruyama terminal values with absorbed paths mapped to 0, for
/// comparison against oracle_terminals.
inline std::vector<double> em_terminals_clamped(const ModelParams& params, const SimGrid& grid,
                                                std::size_t num_paths, std::uint64_t seed,
                                                std::size_t workers) {
  return parallel_map(num_paths, workers, [&](std::size_t j) {
    rng::Substream stream(seed, rng::StreamKind::Skeleton, static_cast<std::uint32_t>(j));
    const StreamedPath run = advance_path(params, grid, stream);
    return std::max(0.0, run.terminal);
  });
}

}  // namespace cevem

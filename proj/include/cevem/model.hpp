#pragma once

// CEV model coefficients dX = mu X dt + sigma (X^+)^p dW and the pure
// functions built on them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "cevem/error.hpp"

namespace cevem {

struct ModelParams {
  double mu = 0.0;
  double sigma = 1.0;
  double p = 0.5;
  double x0 = 1.0;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Checks the admissible ranges sigma > 0, p in [1/2, 1), x0 > 0 and returns
/// the tuple unchanged on success.
inline ModelParams validate(const ModelParams& raw) {
  if (!std::isfinite(raw.mu)) {
    throw Error(ErrorCode::NonFiniteParameter, "mu must be finite");
  }
  if (!(raw.sigma > 0.0) || !std::isfinite(raw.sigma)) {
    throw Error(ErrorCode::NonPositiveSigma, "sigma must be finite and > 0");
  }
  if (!(raw.p >= 0.5 && raw.p < 1.0)) {
    throw Error(ErrorCode::ExponentOutOfRange, "p must lie in [0.5, 1)");
  }
  if (!(raw.x0 > 0.0) || !std::isfinite(raw.x0)) {
    throw Error(ErrorCode::NonPositiveInitialValue, "x0 must be finite and > 0");
  }
  return raw;
}

inline ModelParams validate(double mu, double sigma, double p, double x0) {
  return validate(ModelParams{mu, sigma, p, x0});
}

/// Equidistant partition of [0, horizon] into `steps` intervals. The step
/// size is always derived, never stored.
class SimGrid {
 public:
  SimGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
      throw Error(ErrorCode::InvalidGrid, "horizon must be finite and > 0");
    }
    if (steps < 1) {
      throw Error(ErrorCode::InvalidGrid, "steps must be >= 1");
    }
  }

  double horizon() const noexcept { return horizon_; }
  std::size_t steps() const noexcept { return steps_; }
  double dt() const noexcept { return horizon_ / static_cast<double>(steps_); }

  // Exact at both ends: time(0) == 0 and time(steps) == horizon.
  double time(std::size_t k) const noexcept {
    return horizon_ * static_cast<double>(k) / static_cast<double>(steps_);
  }

  friend bool operator==(const SimGrid&, const SimGrid&) = default;

 private:
  double horizon_;
  std::size_t steps_;
};

/// (x^+)^p with x^+ = max(0, x).
inline double pos_pow(double x, double p) noexcept {
  if (!(x > 0.0)) return 0.0;
  if (p == 0.5) return std::sqrt(x);
  return std::pow(x, p);
}

/// Right-hand side of |(x^+)^{2p} - (y^+)^{2p}| <= |x - y| for p = 1/2 and
/// <= (2 + |x| + |y|) |x - y|^p for p in (1/2, 1).
inline double holder_gap_bound(double x, double y, double p) noexcept {
  const double gap = std::abs(x - y);
  if (p == 0.5) return gap;
  return (2.0 + std::abs(x) + std::abs(y)) * std::pow(gap, p);
}

/// |(x^+)^{2p} - (y^+)^{2p}|, the quantity bounded by holder_gap_bound.
inline double holder_gap(double x, double y, double p) noexcept {
  const double two_p = 2.0 * p;
  const double a = x > 0.0 ? std::pow(x, two_p) : 0.0;
  const double b = y > 0.0 ? std::pow(y, two_p) : 0.0;
  return std::abs(a - b);
}

/// Infinite-horizon ruin probability P(tau < inf) = exp(-2 mu x0 / sigma^2),
/// known only for p = 1/2 (exact comparison against 0.5). Clamped to 1 for
/// mu <= 0, where ruin is almost sure.
inline double closed_form_ruin(const ModelParams& params) {
  if (params.p != 0.5) {
    throw Error(ErrorCode::ExponentNotHalf,
                "closed-form ruin probability requires p == 0.5, got p = " +
                    std::to_string(params.p));
  }
  const double value =
      std::exp(-2.0 * params.mu * params.x0 / (params.sigma * params.sigma));
  return std::min(1.0, value);
}

}  // namespace cevem

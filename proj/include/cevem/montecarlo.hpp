#pragma once

// Monte-Carlo ruin probabilities. The terminal CDF F_n(x) = P(X^n_T <= x)
// has an atom at zero; it is localized with the Levy-metric bracket
// [F_n(-eps) - eps, F_n(eps) + eps].

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cevem/em_scheme.hpp"
#include "cevem/error.hpp"
#include "cevem/model.hpp"
#include "cevem/parallel.hpp"
#include "cevem/rng.hpp"

namespace cevem {

inline constexpr std::uint64_t kDefaultSeed = 20101014;

struct McConfig {
  std::size_t num_paths = 1000;
  std::uint64_t master_seed = kDefaultSeed;
  // Scheduling only; never changes results.
  std::size_t workers = 1;
};

class EmpiricalCdf {
 public:
  EmpiricalCdf() = default;
  explicit EmpiricalCdf(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw Error(ErrorCode::EmptySample, "empirical CDF needs samples");
    std::sort(samples_.begin(), samples_.end());
  }

  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }

  /// Fraction of samples <= x.
  double operator()(double x) const noexcept {
    if (samples_.empty()) return 0.0;
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
    return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
  }

  /// Number of samples in the half-open window (lo, hi].
  std::size_t count_in(double lo, double hi) const noexcept {
    const auto a = std::upper_bound(samples_.begin(), samples_.end(), lo);
    const auto b = std::upper_bound(samples_.begin(), samples_.end(), hi);
    return b > a ? static_cast<std::size_t>(b - a) : 0;
  }

 private:
  std::vector<double> samples_;
};

inline double cdf_eval(const EmpiricalCdf& cdf, double x) noexcept { return cdf(x); }

struct RuinBracket {
  double epsilon = 0.0;
  double lower = 0.0;
  double upper = 0.0;

  double lower_clamped() const noexcept { return std::clamp(lower, 0.0, 1.0); }
  double upper_clamped() const noexcept { return std::clamp(upper, 0.0, 1.0); }
  double width() const noexcept { return upper - lower; }
};

inline RuinBracket levy_bracket(const EmpiricalCdf& cdf, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be > 0");
  return {epsilon, cdf(-epsilon) - epsilon, cdf(epsilon) + epsilon};
}

inline double standard_error(double p_hat, std::size_t n_samples) {
  if (!(p_hat >= 0.0 && p_hat <= 1.0) || n_samples < 1) {
    throw Error(ErrorCode::InvalidArgument, "standard_error needs p in [0,1] and n >= 1");
  }
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n_samples));
}

struct EnsembleResult {
  EmpiricalCdf cdf;
  std::size_t absorbed_count = 0;
  std::size_t num_paths = 0;

  double absorbed_fraction() const noexcept {
    return static_cast<double>(absorbed_count) / static_cast<double>(num_paths);
  }
};

inline void check_path_count(std::size_t num_paths) {
  if (num_paths < 1) throw Error(ErrorCode::InvalidArgument, "num_paths must be >= 1");
  if (num_paths > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::InvalidArgument, "num_paths exceeds the 32-bit path counter");
  }
}

/// Terminal values of N independent skeletons; path j is driven by the
/// skeleton substream (master_seed, j). Absorbed paths keep their frozen
/// (nonpositive) terminal value.
inline EnsembleResult run_ensemble(const ModelParams& params, const SimGrid& grid,
                                   const McConfig& mc) {
  check_path_count(mc.num_paths);
  struct Outcome {
    double terminal = 0.0;
    bool absorbed = false;
  };
  const auto outcomes = parallel_map(mc.num_paths, mc.workers, [&](std::size_t j) {
    rng::Substream stream(mc.master_seed, rng::StreamKind::Skeleton, static_cast<std::uint32_t>(j));
    try {
      const StreamedPath run = advance_path(params, grid, stream);
      return Outcome{run.terminal, run.absorption_index.has_value()};
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " (path " + std::to_string(j) + ")");
    }
  });

  std::vector<double> terminals;
  terminals.reserve(outcomes.size());
  std::size_t absorbed = 0;
  for (const Outcome& o : outcomes) {
    terminals.push_back(o.terminal);
    absorbed += o.absorbed ? 1 : 0;
  }
  return {EmpiricalCdf(std::move(terminals)), absorbed, mc.num_paths};
}

inline void check_schedule(std::span<const double> eps_schedule) {
  if (eps_schedule.empty()) throw Error(ErrorCode::InvalidSchedule, "epsilon schedule is empty");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] > 0.0)) {
      throw Error(ErrorCode::InvalidSchedule, "epsilon values must be > 0");
    }
    if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1])) {
      throw Error(ErrorCode::InvalidSchedule, "epsilon schedule must be strictly decreasing");
    }
  }
}

/// Geometric schedule 1e-4, 1e-5, ... ending at the first epsilon whose
/// window (-eps, eps] holds no sample other than exact zeros, i.e. where the
/// bracket has resolved down to F_n(0) -/+ eps. Stops at `floor` regardless.
inline std::vector<double> default_eps_schedule(const EmpiricalCdf& cdf, double start = 1e-4,
                                                double factor = 10.0, double floor = 1e-15) {
  std::vector<double> schedule;
  for (double eps = start; eps >= floor; eps /= factor) {
    schedule.push_back(eps);
    const std::size_t window = cdf.count_in(-eps, eps);
    const std::size_t zeros = cdf.count_in(-std::numeric_limits<double>::min(), 0.0);
    if (window == zeros) break;
  }
  if (schedule.empty()) schedule.push_back(start);
  return schedule;
}

inline std::vector<RuinBracket> brackets_for(const EmpiricalCdf& cdf,
                                             std::span<const double> eps_schedule) {
  check_schedule(eps_schedule);
  std::vector<RuinBracket> out;
  out.reserve(eps_schedule.size());
  for (double eps : eps_schedule) out.push_back(levy_bracket(cdf, eps));
  return out;
}

struct RuinTable {
  std::vector<RuinBracket> brackets;
  std::size_t absorbed_count = 0;
  std::size_t num_paths = 0;
  // F_n(0), the plain atom estimate
  double atom = 0.0;
};

/// One shared ensemble, one bracket per epsilon in schedule order. An empty
/// schedule selects default_eps_schedule.
inline RuinTable ruin_table(const ModelParams& params, const SimGrid& grid, const McConfig& mc,
                            std::span<const double> eps_schedule) {
  if (!eps_schedule.empty()) check_schedule(eps_schedule);
  const EnsembleResult ensemble = run_ensemble(params, grid, mc);
  std::vector<double> schedule(eps_schedule.begin(), eps_schedule.end());
  if (schedule.empty()) schedule = default_eps_schedule(ensemble.cdf);
  return {brackets_for(ensemble.cdf, schedule), ensemble.absorbed_count, ensemble.num_paths,
          ensemble.cdf(0.0)};
}

}  // namespace cevem

#pragma once

// Empirical checks of the moment bounds and convergence estimates behind the
// weak convergence of the scheme. Statistical checks carry their estimate,
// bound, slack and sample size; per-path checks are exact inequalities up to
// floating-point rounding.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cevem/bridge.hpp"
#include "cevem/em_scheme.hpp"
#include "cevem/error.hpp"
#include "cevem/model.hpp"
#include "cevem/parallel.hpp"
#include "cevem/rng.hpp"

namespace cevem::diagnostics {

/// Relative allowance for accumulated rounding in the per-path inequalities.
inline constexpr double kRoundingSlack = 1e-12;

struct MomentReport {
  std::string check;
  std::size_t n = 0;
  int k = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  // multiplicative: passed == (estimate <= bound * slack)
  double slack = 1.0;
  std::size_t samples = 0;
  bool passed = false;
};

struct SampleStats {
  double mean = 0.0;
  double std_error = 0.0;
};

inline SampleStats sample_stats(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCode::EmptySample, "no samples");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

/// E|xi|^k for xi ~ N(0,1).
inline double abs_normal_moment(int k) {
  return std::pow(2.0, 0.5 * k) * std::tgamma(0.5 * (k + 1)) / std::sqrt(std::numbers::pi);
}

/// C_k = 2^{k+2} E|xi|^k in E M_n^k <= C_k n^{1-k/2}.
inline double increment_moment_constant(int k) { return std::pow(2.0, k + 2) * abs_normal_moment(k); }

/// Estimates E M_n^k, M_n = max over the n intervals of [0,1] of the sup of
/// |W_t - W_{t_{i-1}}|, each sup taken over `sub_points` equally spaced
/// points (an under-estimate, so the upper-bound test direction is safe).
inline MomentReport max_increment_moment(std::size_t n, int k, std::size_t reps, std::uint64_t seed,
                                         std::size_t workers = 1, std::size_t sub_points = 64) {
  if (n < 1 || k < 1 || reps < 1 || sub_points < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_increment_moment needs n, k, reps, sub_points >= 1");
  }
  const double sub_sd = std::sqrt(1.0 / static_cast<double>(n * sub_points));
  const auto samples = parallel_map(reps, workers, [&](std::size_t r) {
    rng::Substream stream(seed, rng::StreamKind::Diagnostics, static_cast<std::uint32_t>(r),
                          static_cast<std::uint32_t>(n));
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double w = 0.0;
      for (std::size_t j = 0; j < sub_points; ++j) {
        w += sub_sd * stream.normal();
        m = std::max(m, std::abs(w));
      }
    }
    return std::pow(m, k);
  });
  const SampleStats stats = sample_stats(samples);
  MomentReport report;
  report.check = "max_increment_moment";
  report.n = n;
  report.k = k;
  report.estimate = stats.mean;
  report.std_error = stats.std_error;
  report.bound = increment_moment_constant(k) * std::pow(static_cast<double>(n), 1.0 - 0.5 * k);
  report.slack = 1.0 + 3.0 * stats.std_error / report.bound;
  report.samples = reps;
  report.passed = report.estimate <= report.bound * report.slack;
  return report;
}

/// Checks E max_k |sum_{j<=k} a_{j-1} xi_j|^2 <= 4 sum_j E a_{j-1}^2 for a
/// predictable rule a_{j-1} = alpha(j, S_{j-1}), S the running sum.
template <class AlphaRule>
MomentReport doob_check(AlphaRule&& alpha, std::size_t n, std::size_t reps, std::uint64_t seed,
                        std::size_t workers = 1) {
  if (n < 1 || reps < 1) throw Error(ErrorCode::InvalidArgument, "doob_check needs n, reps >= 1");
  struct Rep {
    double max_sq = 0.0;
    double alpha_sq = 0.0;
  };
  const auto reps_out = parallel_map(reps, workers, [&](std::size_t r) {
    rng::Substream stream(seed, rng::StreamKind::Diagnostics, static_cast<std::uint32_t>(r),
                          0x00D00B00u);
    Rep out;
    double s = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      const double a = alpha(j, s);
      out.alpha_sq += a * a;
      s += a * stream.normal();
      out.max_sq = std::max(out.max_sq, s * s);
    }
    return out;
  });
  std::vector<double> lhs(reps);
  std::vector<double> rhs(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    lhs[r] = reps_out[r].max_sq;
    rhs[r] = reps_out[r].alpha_sq;
  }
  const SampleStats l = sample_stats(lhs);
  const SampleStats a = sample_stats(rhs);
  MomentReport report;
  report.check = "doob_maximal";
  report.n = n;
  report.k = 2;
  report.estimate = l.mean;
  report.std_error = l.std_error;
  report.bound = 4.0 * a.mean;
  report.slack = 1.0 + 3.0 / std::sqrt(static_cast<double>(reps));
  report.samples = reps;
  report.passed = report.estimate <= report.bound * report.slack;
  return report;
}

/// E max_{1<=k<=n} |X_{t_k}|^2 for each n; each report's bound is 1.5 times the
/// smallest estimate in the sweep, so all pass iff max/min <= 1.5.
inline std::vector<MomentReport> second_moment_sweep(const ModelParams& params, double horizon,
                                                     std::span<const std::size_t> n_list,
                                                     std::size_t num_paths, std::uint64_t seed,
                                                     std::size_t workers = 1) {
  std::vector<MomentReport> reports;
  for (std::size_t n : n_list) {
    const SimGrid grid(horizon, n);
    const auto samples = parallel_map(num_paths, workers, [&](std::size_t j) {
      rng::Substream stream(seed, rng::StreamKind::Skeleton, static_cast<std::uint32_t>(j));
      double max_sq = 0.0;
      // the frozen remainder repeats the absorbed value, already seen here
      advance_path(params, grid, stream, [&](std::size_t, double v) { max_sq = std::max(max_sq, v * v); });
      return max_sq;
    });
    const SampleStats stats = sample_stats(samples);
    MomentReport r;
    r.check = "second_moment_sweep";
    r.n = n;
    r.k = 2;
    r.estimate = stats.mean;
    r.std_error = stats.std_error;
    r.samples = num_paths;
    reports.push_back(r);
  }
  if (reports.empty()) return reports;
  const double smallest =
      std::min_element(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
        return a.estimate < b.estimate;
      })->estimate;
  for (auto& r : reports) {
    r.bound = 1.5 * smallest;
    r.slack = 1.0;
    r.passed = r.estimate <= r.bound;
  }
  return reports;
}

struct RhoPoint {
  std::size_t n = 0;
  double mean_rho_sq = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Mean squared uniform distance between each skeleton and its refined
/// continuous approximation (m points per step), per grid size.
inline std::vector<RhoPoint> rho_convergence(const ModelParams& params, double horizon,
                                             std::span<const std::size_t> n_list,
                                             std::size_t num_paths, std::size_t m,
                                             std::uint64_t seed, std::size_t workers = 1) {
  std::vector<RhoPoint> out;
  for (std::size_t n : n_list) {
    const SimGrid grid(horizon, n);
    const auto samples = parallel_map(num_paths, workers, [&](std::size_t j) {
      const auto path_index = static_cast<std::uint32_t>(j);
      const PathSkeleton skeleton = simulate_skeleton(params, grid, make_noise(grid, seed, path_index));
      const RefinedPath refined = refine_path(skeleton, params, m, seed, path_index);
      const double rho = sup_distance(skeleton, refined);
      return rho * rho;
    });
    const SampleStats stats = sample_stats(samples);
    out.push_back({n, stats.mean, stats.std_error, num_paths});
  }
  return out;
}

/// True when each value is below its predecessor, allowing 3 combined
/// standard errors of noise.
inline bool decreasing_with_slack(std::span<const RhoPoint> points) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double se = std::hypot(points[i].std_error, points[i - 1].std_error);
    if (!(points[i].mean_rho_sq < points[i - 1].mean_rho_sq + 3.0 * se)) return false;
  }
  return true;
}

struct GapReport {
  double drift_gap = 0.0;
  double qv_gap = 0.0;
  double rho = 0.0;
  double drift_bound = 0.0;
  double qv_bound = 0.0;

  bool drift_holds() const noexcept { return drift_gap <= drift_bound * (1.0 + kRoundingSlack); }
  bool qv_holds() const noexcept { return qv_gap <= qv_bound * (1.0 + kRoundingSlack); }
};

/// Drift gap |mu| sum_k int |Xt_s - X_{k-1}| ds and quadratic-variation gap
/// sigma^2 sum_k int |(Xt_s^+)^{2p} - (X_{k-1}^+)^{2p}| ds by the trapezoid
/// rule on the refined points, with the bounds T|mu| rho, sigma^2 T rho
/// (p = 1/2) and T sigma^2 (2 + sup|Xt| + sup|X|) rho^p (p > 1/2).
inline GapReport qv_drift_gaps(const ModelParams& params, const SimGrid& grid,
                               const RefinedPath& refined) {
  if (refined.parent == nullptr || !(refined.parent->grid == grid)) {
    throw Error(ErrorCode::MismatchedPaths, "refined path does not belong to this grid");
  }
  const PathSkeleton& parent = *refined.parent;
  const std::size_t m = refined.refinement;
  const double h = grid.dt() / static_cast<double>(m);

  double drift_integral = 0.0;
  double qv_integral = 0.0;
  for (std::size_t k = 1; k <= grid.steps(); ++k) {
    const double left = parent.values[k - 1];
    double drift_step = 0.0;
    double qv_step = 0.0;
    for (std::size_t j = 0; j <= m; ++j) {
      const double v = refined.values[refined.index(k - 1, j)];
      const double w = (j == 0 || j == m) ? 0.5 : 1.0;
      drift_step += w * std::abs(v - left);
      qv_step += w * holder_gap(v, left, params.p);
    }
    drift_integral += h * drift_step;
    qv_integral += h * qv_step;
  }

  GapReport report;
  report.rho = sup_distance(parent, refined);
  report.drift_gap = std::abs(params.mu) * drift_integral;
  report.qv_gap = params.sigma * params.sigma * qv_integral;
  const double horizon = grid.horizon();
  report.drift_bound = horizon * std::abs(params.mu) * report.rho;
  if (params.p == 0.5) {
    report.qv_bound = params.sigma * params.sigma * horizon * report.rho;
  } else {
    double sup_refined = 0.0;
    for (double v : refined.values) sup_refined = std::max(sup_refined, std::abs(v));
    double sup_skeleton = 0.0;
    for (double v : parent.values) sup_skeleton = std::max(sup_skeleton, std::abs(v));
    report.qv_bound = horizon * params.sigma * params.sigma * (2.0 + sup_refined + sup_skeleton) *
                      std::pow(report.rho, params.p);
  }
  return report;
}

struct AuditSummary {
  std::size_t paths = 0;
  std::size_t absorbed = 0;
  std::size_t freeze_violations = 0;
  std::size_t hitting_violations = 0;
  std::size_t coupling_violations = 0;
  std::size_t drift_violations = 0;
  std::size_t qv_violations = 0;

  bool all_hold() const noexcept {
    return freeze_violations == 0 && hitting_violations == 0 && coupling_violations == 0 &&
           drift_violations == 0 && qv_violations == 0;
  }
};

/// Per-path exact assertions over `num_paths` coupled skeleton/refined pairs.
inline AuditSummary audit_paths(const ModelParams& params, const SimGrid& grid, std::size_t m,
                                std::size_t num_paths, std::uint64_t seed, std::size_t workers = 1) {
  struct PathAudit {
    bool absorbed = false;
    bool freeze = true;
    bool hitting = true;
    bool coupling = true;
    bool drift = true;
    bool qv = true;
  };
  const auto audits = parallel_map(num_paths, workers, [&](std::size_t j) {
    const auto path_index = static_cast<std::uint32_t>(j);
    const PathSkeleton skeleton = simulate_skeleton(params, grid, make_noise(grid, seed, path_index));
    const RefinedPath refined = refine_path(skeleton, params, m, seed, path_index);
    PathAudit a;
    a.absorbed = skeleton.absorption_index.has_value();
    a.hitting = hitting_index(skeleton) == skeleton.absorption_index;
    if (skeleton.absorption_index) {
      const double frozen = skeleton.values[*skeleton.absorption_index];
      for (std::size_t k = *skeleton.absorption_index; k < skeleton.values.size(); ++k) {
        if (std::memcmp(&skeleton.values[k], &frozen, sizeof(double)) != 0) a.freeze = false;
      }
    }
    for (std::size_t k = 0; k <= grid.steps(); ++k) {
      if (refined.values[refined.index(k, 0)] != skeleton.values[k]) a.coupling = false;
    }
    const GapReport gaps = qv_drift_gaps(params, grid, refined);
    a.drift = gaps.drift_holds();
    a.qv = gaps.qv_holds();
    return a;
  });
  AuditSummary s;
  s.paths = num_paths;
  for (const PathAudit& a : audits) {
    s.absorbed += a.absorbed;
    s.freeze_violations += !a.freeze;
    s.hitting_violations += !a.hitting;
    s.coupling_violations += !a.coupling;
    s.drift_violations += !a.drift;
    s.qv_violations += !a.qv;
  }
  return s;
}

struct HolderSuiteResult {
  std::size_t cases = 0;
  std::size_t violations = 0;
  // largest observed lhs / rhs over cases with rhs > 0
  double worst_ratio = 0.0;
};

/// Random (x, y, p) triples with x, y in [-magnitude, magnitude] (uniform and
/// log-uniform magnitudes, mixed signs, some exact ties) and p either exactly
/// 1/2 or uniform in (1/2, 1); counts violations of
/// |(x^+)^{2p} - (y^+)^{2p}| <= holder_gap_bound(x, y, p).
inline HolderSuiteResult holder_property_suite(std::size_t cases, std::uint64_t seed,
                                               double magnitude = 1e3) {
  rng::Substream stream(seed, rng::StreamKind::Diagnostics, 0xC0FFEEu, 23u);
  auto draw_real = [&] {
    const double u = stream.uniform();
    const double sign = stream.uniform() < 0.5 ? -1.0 : 1.0;
    if (u < 0.5) return sign * magnitude * stream.uniform();
    // log-uniform over [1e-9, magnitude]
    const double lo = std::log(1e-9);
    const double hi = std::log(magnitude);
    return sign * std::exp(lo + (hi - lo) * stream.uniform());
  };
  HolderSuiteResult out;
  out.cases = cases;
  for (std::size_t c = 0; c < cases; ++c) {
    const double x = draw_real();
    const double y = stream.uniform() < 0.05 ? x : draw_real();
    double p = 0.5;
    if (stream.uniform() >= 0.25) {
      do {
        p = 0.5 + 0.5 * stream.uniform();
      } while (!(p > 0.5 && p < 1.0));
    }
    const double lhs = holder_gap(x, y, p);
    const double rhs = holder_gap_bound(x, y, p);
    if (!(lhs <= rhs)) ++out.violations;
    if (rhs > 0.0) out.worst_ratio = std::max(out.worst_ratio, lhs / rhs);
  }
  return out;
}

/// sup_x |F_a(x) - F_b(x)| over the pooled sample points.
inline double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySample, "KS needs two nonempty samples");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// Asymptotic two-sample KS critical value c(alpha) sqrt((n+m)/(n m)),
/// c(alpha) = sqrt(-ln(alpha/2) / 2).
inline double ks_critical_value(double alpha, std::size_t n, std::size_t m) {
  if (!(alpha > 0.0 && alpha < 1.0) || n < 1 || m < 1) {
    throw Error(ErrorCode::InvalidArgument, "ks_critical_value needs alpha in (0,1), n, m >= 1");
  }
  const double c = std::sqrt(-0.5 * std::log(0.5 * alpha));
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  return c * std::sqrt((nd + md) / (nd * md));
}

}  // namespace cevem::diagnostics

#pragma once

// Subcommand bodies of the cevem driver. Each returns the process exit code:
// 0 ok, 1 check failure, 2 usage or configuration error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cevem/cevem.hpp"

namespace cevem::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Opens cfg.output_path, or hands back std::cout for "" and "-".
class OutputSink {
 public:
  explicit OutputSink(const std::string& path) {
    if (path.empty() || path == "-") return;
    if (const auto parent = std::filesystem::path(path).parent_path(); !parent.empty()) {
      std::filesystem::create_directories(parent);
    }
    file_.open(path, std::ios::binary);
    if (!file_) throw Error(ErrorCode::ConfigError, "cannot open output file '" + path + "'");
  }

  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

inline std::string describe(const ModelParams& p, double horizon) {
  return "mu=" + format_real(p.mu) + " sigma=" + format_real(p.sigma) + " p=" + format_real(p.p) +
         " x0=" + format_real(p.x0) + " T=" + format_real(horizon);
}

inline int cmd_ruin(const RunConfig& cfg) {
  const ModelParams params = validate(cfg.params);
  const RuinTable table = ruin_table(params, cfg.grid(), cfg.mc, cfg.eps_schedule);
  OutputSink sink(cfg.output_path);
  write_ruin_csv(sink.stream(), cfg, table);
  return kExitOk;
}

struct TablesOptions {
  // unset: 10^4 steps per unit horizon for each table
  std::optional<std::size_t> steps;
  std::string directory = "tables";
};

struct TableSummary {
  TablePreset preset;
  RunConfig config;
  RuinTable table;
  double std_error = 0.0;

  double delta_se() const { return (table.atom - preset.published_midpoint()) / std_error; }
};

inline TableSummary run_table(const TablePreset& preset, const RunConfig& base,
                              std::optional<std::size_t> steps) {
  RunConfig cfg = base;
  cfg.command = Command::Tables;
  cfg.params = validate(preset.params);
  cfg.horizon = preset.horizon;
  cfg.steps = steps.value_or(default_steps(preset.horizon));
  cfg.eps_schedule = preset.eps_schedule;
  TableSummary s{preset, cfg, ruin_table(cfg.params, cfg.grid(), cfg.mc, cfg.eps_schedule), 0.0};
  s.std_error = standard_error(preset.published_midpoint(), s.table.num_paths);
  return s;
}

inline int cmd_tables(const RunConfig& base, const TablesOptions& opts, std::ostream& log) {
  std::filesystem::create_directories(opts.directory);
  std::vector<TableSummary> summaries;
  for (const TablePreset& preset : published_tables()) {
    TableSummary s = run_table(preset, base, opts.steps);
    s.config.output_path = (std::filesystem::path(opts.directory) /
                            ("table" + std::to_string(preset.number) + ".csv")).string();
    OutputSink sink(s.config.output_path);
    write_ruin_csv(sink.stream(), s.config, s.table);
    if (!preset.note.empty()) log << "warning: table " << preset.number << ": " << preset.note << '\n';
    summaries.push_back(std::move(s));
  }

  OutputSink sink((std::filesystem::path(opts.directory) / "summary.csv").string());
  std::ostream& out = sink.stream();
  out << "# cevem " << kVersion << " seed=" << base.mc.master_seed << " N=" << base.mc.num_paths << '\n';
  out << "table,p,mu,sigma,x0,T,n_steps,n_paths,atom,std_error,published_lower,published_upper,"
         "published_mid,delta_se,final_lower,final_upper,note\n";
  for (const TableSummary& s : summaries) {
    const RuinBracket& last = s.table.brackets.back();
    out << s.preset.number << ',' << fmt6(s.config.params.p) << ',' << fmt6(s.config.params.mu) << ','
        << fmt6(s.config.params.sigma) << ',' << fmt6(s.config.params.x0) << ',' << fmt6(s.config.horizon)
        << ',' << s.config.steps << ',' << s.table.num_paths << ',' << fmt6(s.table.atom) << ','
        << fmt6(s.std_error) << ',' << fmt6(s.preset.published_lower) << ','
        << fmt6(s.preset.published_upper) << ',' << fmt6(s.preset.published_midpoint()) << ','
        << fmt6(s.delta_se()) << ',' << fmt6(last.lower) << ',' << fmt6(last.upper) << ','
        << (s.preset.note.empty() ? "" : "\"" + s.preset.note + "\"") << '\n';
  }
  return kExitOk;
}

inline const std::vector<std::size_t>& sweep_sizes() {
  static const std::vector<std::size_t> sizes{100, 1000, 10000};
  return sizes;
}

inline std::vector<CheckRow> holder_rows(std::uint64_t seed) {
  const auto suite = diagnostics::holder_property_suite(100000, seed);
  return {{"holder_gap_inequality", "cases=100000 |x|,|y|<=1e3", static_cast<double>(suite.violations),
           0.0, 1.0, suite.cases, suite.violations == 0, true}};
}

inline std::vector<CheckRow> increment_moment_rows(std::size_t reps, std::uint64_t seed, std::size_t workers) {
  std::vector<CheckRow> rows;
  std::vector<double> estimates;
  for (std::size_t n : {10u, 100u, 1000u}) {
    const auto r = diagnostics::max_increment_moment(n, 4, reps, seed, workers);
    rows.push_back({"max_increment_moment", "k=4 n=" + std::to_string(n), r.estimate, r.bound, r.slack,
                    r.samples, r.passed, false});
    estimates.push_back(r.estimate);
  }
  const bool decreasing = estimates[1] < estimates[0] && estimates[2] < estimates[1];
  rows.push_back({"max_increment_moment_decreasing", "k=4 n=10;100;1000", estimates.back(), estimates.front(),
                  1.0, reps, decreasing, false});
  return rows;
}

inline std::vector<CheckRow> doob_rows(std::size_t reps, std::uint64_t seed, std::size_t workers) {
  std::vector<CheckRow> rows;
  const std::size_t n = 100;
  auto add = [&](const std::string& name, const diagnostics::MomentReport& r) {
    rows.push_back({"doob_maximal", name + " n=" + std::to_string(n), r.estimate, r.bound, r.slack,
                    r.samples, r.passed, false});
  };
  add("alpha=0", diagnostics::doob_check([](std::size_t, double) { return 0.0; }, n, reps, seed, workers));
  add("alpha=1", diagnostics::doob_check([](std::size_t, double) { return 1.0; }, n, reps, seed, workers));
  add("alpha=min(1;|S|)", diagnostics::doob_check(
                              [](std::size_t, double s) { return std::min(1.0, std::abs(s)); }, n, reps,
                              seed, workers));
  return rows;
}

inline std::vector<CheckRow> sweep_rows(const RunConfig& cfg, const ModelParams& params) {
  std::vector<CheckRow> rows;
  const auto reports = diagnostics::second_moment_sweep(params, cfg.horizon, sweep_sizes(),
                                                        cfg.mc.num_paths, cfg.mc.master_seed, cfg.mc.workers);
  for (const auto& r : reports) {
    rows.push_back({"second_moment_sweep", describe(params, cfg.horizon) + " n=" + std::to_string(r.n),
                    r.estimate, r.bound, r.slack, r.samples, r.passed, false});
  }
  return rows;
}

inline std::vector<CheckRow> rho_rows(const RunConfig& cfg, const ModelParams& params) {
  std::vector<CheckRow> rows;
  const auto points = diagnostics::rho_convergence(params, cfg.horizon, sweep_sizes(), cfg.mc.num_paths,
                                                   cfg.refinement, cfg.mc.master_seed, cfg.mc.workers);
  for (const auto& pt : points) {
    rows.push_back({"rho_sq_mean", describe(params, cfg.horizon) + " n=" + std::to_string(pt.n) +
                                       " m=" + std::to_string(cfg.refinement),
                    pt.mean_rho_sq, pt.mean_rho_sq + 3.0 * pt.std_error, 1.0, pt.samples, true, false});
  }
  rows.push_back({"rho_sq_decreasing", "3SE slack", points.back().mean_rho_sq, points.front().mean_rho_sq, 1.0,
                  cfg.mc.num_paths, diagnostics::decreasing_with_slack(points), false});
  rows.push_back({"rho_sq_final_over_first", "<= 1/4", points.back().mean_rho_sq / points.front().mean_rho_sq,
                  0.25, 1.0, cfg.mc.num_paths,
                  points.back().mean_rho_sq <= 0.25 * points.front().mean_rho_sq, false});
  return rows;
}

inline std::vector<CheckRow> audit_rows(const RunConfig& cfg, const ModelParams& params, std::size_t steps) {
  const SimGrid grid(cfg.horizon, steps);
  const auto a = diagnostics::audit_paths(params, grid, cfg.refinement, cfg.mc.num_paths, cfg.mc.master_seed,
                                          cfg.mc.workers);
  const std::string where = describe(params, cfg.horizon) + " n=" + std::to_string(steps);
  auto row = [&](const char* name, std::size_t violations) {
    return CheckRow{name, where, static_cast<double>(violations), 0.0, 1.0, a.paths, violations == 0, true};
  };
  return {row("freeze_after_absorption", a.freeze_violations), row("hitting_index", a.hitting_violations),
          row("grid_coupling", a.coupling_violations), row("drift_gap_bound", a.drift_violations),
          row("qv_gap_bound", a.qv_violations)};
}

inline int finish_checks(const RunConfig& cfg, const std::vector<CheckRow>& rows) {
  OutputSink sink(cfg.output_path);
  write_check_csv(sink.stream(), cfg, rows);
  for (const CheckRow& r : rows) {
    if (r.exact && !r.pass) return kExitCheckFailed;
  }
  return kExitOk;
}

inline int cmd_diagnostics(const RunConfig& cfg) {
  const ModelParams params = validate(cfg.params);
  std::vector<CheckRow> rows = holder_rows(cfg.mc.master_seed);
  auto append = [&](std::vector<CheckRow> more) { rows.insert(rows.end(), more.begin(), more.end()); };
  append(increment_moment_rows(cfg.mc.num_paths, cfg.mc.master_seed, cfg.mc.workers));
  append(doob_rows(cfg.mc.num_paths, cfg.mc.master_seed, cfg.mc.workers));
  append(sweep_rows(cfg, params));
  append(rho_rows(cfg, params));
  append(audit_rows(cfg, params, 1000));
  return finish_checks(cfg, rows);
}

inline int cmd_lemma_check(const RunConfig& cfg) {
  std::vector<CheckRow> rows = holder_rows(cfg.mc.master_seed);
  const auto more = increment_moment_rows(cfg.mc.num_paths, cfg.mc.master_seed, cfg.mc.workers);
  rows.insert(rows.end(), more.begin(), more.end());
  return finish_checks(cfg, rows);
}

inline int cmd_convergence(const RunConfig& cfg) {
  const ModelParams params = validate(cfg.params);
  const auto points = diagnostics::rho_convergence(params, cfg.horizon, sweep_sizes(), cfg.mc.num_paths,
                                                   cfg.refinement, cfg.mc.master_seed, cfg.mc.workers);
  OutputSink sink(cfg.output_path);
  std::ostream& out = sink.stream();
  write_provenance(out, cfg);
  out << "n,mean_rho_sq,std_error,ks_terminal_vs_previous_n,n_paths,seed\n";
  std::vector<double> previous;
  for (const auto& pt : points) {
    const ModelParams& mp = params;
    std::vector<double> terminals = em_terminals_clamped(mp, SimGrid(cfg.horizon, pt.n), cfg.mc.num_paths,
                                                         cfg.mc.master_seed, cfg.mc.workers);
    const std::string ks = previous.empty() ? "" : fmt6(diagnostics::ks_two_sample(previous, terminals));
    out << pt.n << ',' << fmt6(pt.mean_rho_sq) << ',' << fmt6(pt.std_error) << ',' << ks << ','
        << pt.samples << ',' << cfg.mc.master_seed << '\n';
    previous = std::move(terminals);
  }
  return diagnostics::decreasing_with_slack(points) ? kExitOk : kExitCheckFailed;
}

struct OracleOptions {
  std::vector<std::size_t> levels{10, 100, 1000};
  std::size_t refinement_factor = 10;
  // overrides mu on the oracle side only (sanity inversion)
  std::optional<double> oracle_mu;
  // compare the scheme against itself with an identical seed
  bool self_check = false;
  double alpha = 0.01;
};

struct OracleResult {
  double ks = 0.0;
  double critical = 0.0;
  bool pass() const { return ks < critical; }
};

inline OracleResult run_oracle_check(const RunConfig& cfg, const OracleOptions& opts) {
  const ModelParams params = validate(cfg.params);
  const SimGrid grid = cfg.grid();
  const std::vector<double> em =
      em_terminals_clamped(params, grid, cfg.mc.num_paths, cfg.mc.master_seed, cfg.mc.workers);
  std::vector<double> other;
  if (opts.self_check) {
    other = em_terminals_clamped(params, grid, cfg.mc.num_paths, cfg.mc.master_seed, cfg.mc.workers);
  } else {
    ModelParams oracle_params = params;
    if (opts.oracle_mu) oracle_params.mu = *opts.oracle_mu;
    oracle_params = validate(oracle_params);
    std::vector<std::size_t> usable;
    for (std::size_t i : opts.levels) {
      if (1.0 / static_cast<double>(i) < params.x0) usable.push_back(i);
    }
    const auto levels = make_levels(usable, oracle_params);
    const SimGrid fine(cfg.horizon, cfg.steps * opts.refinement_factor);
    other = oracle_terminals(oracle_params, levels, fine, cfg.mc.num_paths, cfg.mc.master_seed, cfg.mc.workers);
  }
  return {diagnostics::ks_two_sample(em, other),
          diagnostics::ks_critical_value(opts.alpha, em.size(), other.size())};
}

inline int cmd_oracle_check(const RunConfig& cfg, const OracleOptions& opts) {
  const OracleResult r = run_oracle_check(cfg, opts);
  std::string what = describe(cfg.params, cfg.horizon) + " fine_factor=" + std::to_string(opts.refinement_factor);
  if (opts.self_check) what += " self";
  if (opts.oracle_mu) what += " oracle_mu=" + format_real(*opts.oracle_mu);
  const std::vector<CheckRow> rows{
      {"ks_em_vs_truncated_oracle", what, r.ks, r.critical, 1.0, cfg.mc.num_paths, r.pass(), false}};
  OutputSink sink(cfg.output_path);
  write_check_csv(sink.stream(), cfg, rows);
  return r.pass() ? kExitOk : kExitCheckFailed;
}

}  // namespace cevem::cli

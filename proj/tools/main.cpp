#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using cevem::RunConfig;

struct Options {
  std::string config_file;
  std::map<std::string, std::string> overrides;
  cevem::cli::OracleOptions oracle;
  std::optional<double> oracle_mu;
  std::string tables_dir;
};

void add_common(CLI::App& sub, Options& opts) {
  sub.add_option("-c,--config", opts.config_file, "flat key = value config file");
  for (const char* key : {"mu", "sigma", "p", "x0", "T", "n", "N", "seed", "workers", "m", "eps", "output"}) {
    const std::string flag = std::string("--") + key;
    sub.add_option_function<std::string>(
        flag, [&opts, key](const std::string& v) { opts.overrides[key] = v; },
        std::string("override '") + key + "'");
  }
}

RunConfig build_config(cevem::Command command, const Options& opts, bool& steps_given) {
  RunConfig cfg;
  if (const char* env = std::getenv("CEVEM_SEED"); env != nullptr && *env != '\0') {
    cevem::apply_setting(cfg, "seed", env);
  }
  std::vector<std::string> seen;
  if (!opts.config_file.empty()) {
    std::ifstream in(opts.config_file);
    if (!in) throw cevem::Error(cevem::ErrorCode::ConfigError, "cannot read " + opts.config_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    cfg = cevem::parse_config(buf.str(), cfg, &seen);
  }
  steps_given = std::find(seen.begin(), seen.end(), "n") != seen.end();
  for (const auto& [key, value] : opts.overrides) {
    cevem::apply_setting(cfg, key, value);
    if (key == "n") steps_given = true;
  }
  cfg.command = command;
  if (!steps_given) cfg.steps = cevem::default_steps(cfg.horizon);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Euler-Maruyama simulation of the CEV diffusion with absorption at zero.\n"
      "Closed-form ruin comparisons apply only when p is exactly 0.5."};
  app.require_subcommand(1);
  Options opts;

  auto* ruin = app.add_subcommand("ruin", "Levy-bracketed ruin probability table (CSV)");
  auto* tables = app.add_subcommand("tables", "reproduce the eight published tables + summary");
  auto* convergence = app.add_subcommand("convergence", "uniform-distance convergence of the coupled approximation");
  auto* diagnostics = app.add_subcommand("diagnostics", "moment bounds, convergence, per-path inequalities");
  auto* oracle = app.add_subcommand("oracle-check", "KS test against the truncated-Lipschitz oracle");
  auto* lemma = app.add_subcommand("lemma-check", "Holder-gap inequality and Brownian increment moments");
  for (auto* sub : {ruin, tables, convergence, diagnostics, oracle, lemma}) add_common(*sub, opts);
  tables->add_option("--dir", opts.tables_dir, "output directory (default: tables)");
  oracle->add_option("--oracle-mu", opts.oracle_mu, "use a different mu on the oracle side");
  oracle->add_flag("--self", opts.oracle.self_check, "compare the scheme against itself");
  oracle->add_option("--levels", opts.oracle.levels, "truncation indices i (floors 1/i)");
  oracle->add_option("--fine-factor", opts.oracle.refinement_factor, "oracle grid refinement factor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cevem::cli::kExitUsage;
  }

  try {
    bool steps_given = false;
    if (ruin->parsed()) return cevem::cli::cmd_ruin(build_config(cevem::Command::Ruin, opts, steps_given));
    if (tables->parsed()) {
      const RunConfig cfg = build_config(cevem::Command::Tables, opts, steps_given);
      cevem::cli::TablesOptions t;
      if (steps_given) t.steps = cfg.steps;
      t.directory = !opts.tables_dir.empty() ? opts.tables_dir
                    : !cfg.output_path.empty() ? cfg.output_path
                                               : "tables";
      return cevem::cli::cmd_tables(cfg, t, std::cerr);
    }
    if (convergence->parsed()) {
      return cevem::cli::cmd_convergence(build_config(cevem::Command::Convergence, opts, steps_given));
    }
    if (diagnostics->parsed()) {
      return cevem::cli::cmd_diagnostics(build_config(cevem::Command::Diagnostics, opts, steps_given));
    }
    if (oracle->parsed()) {
      opts.oracle.oracle_mu = opts.oracle_mu;
      return cevem::cli::cmd_oracle_check(build_config(cevem::Command::OracleCheck, opts, steps_given),
                                          opts.oracle);
    }
    if (lemma->parsed()) {
      return cevem::cli::cmd_lemma_check(build_config(cevem::Command::LemmaCheck, opts, steps_given));
    }
  } catch (const cevem::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const auto c = e.code();
    const bool usage = c == cevem::ErrorCode::ConfigError || c == cevem::ErrorCode::NonPositiveSigma ||
                       c == cevem::ErrorCode::ExponentOutOfRange ||
                       c == cevem::ErrorCode::NonPositiveInitialValue ||
                       c == cevem::ErrorCode::NonFiniteParameter || c == cevem::ErrorCode::InvalidGrid ||
                       c == cevem::ErrorCode::InvalidSchedule || c == cevem::ErrorCode::InvalidArgument ||
                       c == cevem::ErrorCode::InvalidTruncationLevel;
    return usage ? cevem::cli::kExitUsage : cevem::cli::kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cevem::cli::kExitCheckFailed;
  }
  return cevem::cli::kExitUsage;
}

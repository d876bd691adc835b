#pragma once

// CSV emission. Numbers use 6 significant digits; provenance goes into
// leading '#' lines so every data row can be reproduced from its file.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "cevem/config.hpp"
#include "cevem/montecarlo.hpp"
#include "cevem/version.hpp"

namespace cevem {

inline std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline void write_provenance(std::ostream& out, const RunConfig& cfg) {
  out << "# cevem " << kVersion << '\n'
      << "# command=" << to_string(cfg.command) << " mu=" << format_real(cfg.params.mu)
      << " sigma=" << format_real(cfg.params.sigma) << " p=" << format_real(cfg.params.p)
      << " x0=" << format_real(cfg.params.x0) << " T=" << format_real(cfg.horizon)
      << " n=" << cfg.steps << " N=" << cfg.mc.num_paths << " seed=" << cfg.mc.master_seed
      << " m=" << cfg.refinement << '\n';
}

inline void write_ruin_csv(std::ostream& out, const RunConfig& cfg, const RuinTable& table) {
  write_provenance(out, cfg);
  out << "# atom_F_n(0)=" << fmt6(table.atom) << " absorbed=" << table.absorbed_count << '\n';
  out << "epsilon,lower_raw,upper_raw,lower_clamped,upper_clamped,n_paths,n_steps,seed\n";
  for (const RuinBracket& b : table.brackets) {
    out << fmt6(b.epsilon) << ',' << fmt6(b.lower) << ',' << fmt6(b.upper) << ','
        << fmt6(b.lower_clamped()) << ',' << fmt6(b.upper_clamped()) << ',' << table.num_paths
        << ',' << cfg.steps << ',' << cfg.mc.master_seed << '\n';
  }
}

struct CheckRow {
  std::string check;
  std::string parameters;
  double estimate = 0.0;
  double bound = 0.0;
  double slack = 1.0;
  std::size_t samples = 0;
  bool pass = false;
  // exact (per-path) checks decide the exit code; statistical ones are reported
  bool exact = false;
};

inline void write_check_csv(std::ostream& out, const RunConfig& cfg, const std::vector<CheckRow>& rows) {
  write_provenance(out, cfg);
  out << "check,parameters,estimate,bound,slack,samples,kind,pass\n";
  for (const CheckRow& r : rows) {
    out << r.check << ',' << r.parameters << ',' << fmt6(r.estimate) << ',' << fmt6(r.bound) << ','
        << fmt6(r.slack) << ',' << r.samples << ',' << (r.exact ? "exact" : "statistical") << ','
        << (r.pass ? "pass" : "FAIL") << '\n';
  }
}

}  // namespace cevem

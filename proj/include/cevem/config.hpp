#pragma once

// Run configuration and its flat key-value file format.
//
//   # comment
//   command = ruin            (ruin|tables|convergence|diagnostics|oracle-check|lemma-check)
//   mu = 1
//   sigma = 1
//   p = 0.5
//   x0 = 0.1
//   T = 9
//   n = 10000                 (time steps)
//   N = 1000                  (Monte-Carlo paths)
//   seed = 20101014
//   workers = 1
//   m = 16                    (bridge refinement)
//   eps = 2e-06, 1e-06, 5e-07 (empty: automatic schedule)
//   output = table2.csv
//
// Keys are case-sensitive; unknown keys are rejected. Reals are written in
// shortest round-trip form, so format_config / parse_config is lossless.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "cevem/error.hpp"
#include "cevem/model.hpp"
#include "cevem/montecarlo.hpp"

namespace cevem {

enum class Command { Ruin, Tables, Convergence, Diagnostics, OracleCheck, LemmaCheck };

inline constexpr std::array<std::pair<Command, std::string_view>, 6> kCommandNames{{
    {Command::Ruin, "ruin"},
    {Command::Tables, "tables"},
    {Command::Convergence, "convergence"},
    {Command::Diagnostics, "diagnostics"},
    {Command::OracleCheck, "oracle-check"},
    {Command::LemmaCheck, "lemma-check"},
}};

inline std::string_view to_string(Command c) {
  for (const auto& [cmd, name] : kCommandNames) {
    if (cmd == c) return name;
  }
  return "ruin";
}

inline Command parse_command(std::string_view name) {
  for (const auto& [cmd, n] : kCommandNames) {
    if (n == name) return cmd;
  }
  throw Error(ErrorCode::ConfigError, "unknown command '" + std::string(name) + "'");
}

struct RunConfig {
  Command command = Command::Ruin;
  ModelParams params{1.0, 1.0, 0.5, 0.1};
  double horizon = 9.0;
  std::size_t steps = 90000;
  McConfig mc;
  std::size_t refinement = 16;
  std::vector<double> eps_schedule;
  std::string output_path;

  SimGrid grid() const { return SimGrid(horizon, steps); }

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.command == b.command && a.params == b.params && a.horizon == b.horizon &&
           a.steps == b.steps && a.mc.num_paths == b.mc.num_paths &&
           a.mc.master_seed == b.mc.master_seed && a.mc.workers == b.mc.workers &&
           a.refinement == b.refinement && a.eps_schedule == b.eps_schedule &&
           a.output_path == b.output_path;
  }
};

/// Shortest decimal form that parses back to the same double.
inline std::string format_real(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_real(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ConfigError, "bad real for '" + std::string(key) + "': '" + std::string(text) + "'");
  }
  return v;
}

inline std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    // accept integral reals such as 1e4
    const double d = parse_real(key, text);
    if (!(d >= 0.0) || d != static_cast<double>(static_cast<std::uint64_t>(d))) {
      throw Error(ErrorCode::ConfigError, "bad integer for '" + std::string(key) + "': '" + std::string(text) + "'");
    }
    return static_cast<std::uint64_t>(d);
  }
  return v;
}

}  // namespace detail

inline std::vector<double> parse_real_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  text = detail::trim(text);
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = detail::trim(text.substr(0, comma));
    if (item.empty()) throw Error(ErrorCode::ConfigError, "empty entry in '" + std::string(key) + "'");
    out.push_back(detail::parse_real(key, item));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

/// Applies one key/value pair; shared by the file parser and CLI overrides.
inline void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  value = detail::trim(value);
  if (key == "command") {
    cfg.command = parse_command(value);
  } else if (key == "mu") {
    cfg.params.mu = detail::parse_real(key, value);
  } else if (key == "sigma") {
    cfg.params.sigma = detail::parse_real(key, value);
  } else if (key == "p") {
    cfg.params.p = detail::parse_real(key, value);
  } else if (key == "x0") {
    cfg.params.x0 = detail::parse_real(key, value);
  } else if (key == "T") {
    cfg.horizon = detail::parse_real(key, value);
  } else if (key == "n") {
    cfg.steps = detail::parse_unsigned(key, value);
  } else if (key == "N") {
    cfg.mc.num_paths = detail::parse_unsigned(key, value);
  } else if (key == "seed") {
    cfg.mc.master_seed = detail::parse_unsigned(key, value);
  } else if (key == "workers") {
    cfg.mc.workers = detail::parse_unsigned(key, value);
  } else if (key == "m") {
    cfg.refinement = detail::parse_unsigned(key, value);
  } else if (key == "eps") {
    cfg.eps_schedule = parse_real_list(key, value);
  } else if (key == "output") {
    cfg.output_path = std::string(value);
  } else {
    throw Error(ErrorCode::ConfigError, "unknown key '" + std::string(key) + "'");
  }
}

/// Parses `text` on top of `cfg`; keys found are appended to `seen` if given.
inline RunConfig parse_config(std::string_view text, RunConfig cfg = {},
                              std::vector<std::string>* seen = nullptr) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = detail::trim(line.substr(0, eq));
    apply_setting(cfg, key, line.substr(eq + 1));
    if (seen != nullptr) seen->emplace_back(key);
  }
  return cfg;
}

inline std::string format_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "command = " << to_string(cfg.command) << '\n'
      << "mu = " << format_real(cfg.params.mu) << '\n'
      << "sigma = " << format_real(cfg.params.sigma) << '\n'
      << "p = " << format_real(cfg.params.p) << '\n'
      << "x0 = " << format_real(cfg.params.x0) << '\n'
      << "T = " << format_real(cfg.horizon) << '\n'
      << "n = " << cfg.steps << '\n'
      << "N = " << cfg.mc.num_paths << '\n'
      << "seed = " << cfg.mc.master_seed << '\n'
      << "workers = " << cfg.mc.workers << '\n'
      << "m = " << cfg.refinement << '\n'
      << "eps = ";
  for (std::size_t i = 0; i < cfg.eps_schedule.size(); ++i) {
    out << (i ? ", " : "") << format_real(cfg.eps_schedule[i]);
  }
  out << '\n' << "output = " << cfg.output_path << '\n';
  return out.str();
}

/// Default step count: 10^4 steps per unit of horizon.
inline std::size_t default_steps(double horizon) {
  const double n = std::round(1e4 * horizon);
  return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

}  // namespace cevem

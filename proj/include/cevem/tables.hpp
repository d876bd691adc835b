#pragma once

// Canned parameter sets for the published ruin-probability tables, with the
// published epsilon schedules and final-row brackets (N = 1000 paths there).

#include <string>
#include <vector>

#include "cevem/model.hpp"

namespace cevem {

struct TablePreset {
  int number = 0;
  ModelParams params;
  double horizon = 0.0;
  std::vector<double> eps_schedule;
  // final-row bracket as published
  double published_lower = 0.0;
  double published_upper = 0.0;
  std::string note;

  double published_midpoint() const { return 0.5 * (published_lower + published_upper); }
};

inline std::vector<TablePreset> published_tables() {
  return {
      {1, {-1.0, 1.0, 0.5, 0.25}, 3.0, {3e-6, 2e-6, 1e-6}, 0.9738, 0.9738, ""},
      {2, {1.0, 1.0, 0.5, 0.1}, 9.0, {2e-6, 1e-6, 5e-7}, 0.8182, 0.8192, ""},
      {3, {1.0, 1.0, 0.5, 0.25}, 9.0, {2e-6, 1e-6, 5e-7}, 0.5970, 0.5970, ""},
      {4, {1.0, 1.0, 0.5, 1.0}, 9.0, {3e-6, 2e-6, 1e-6}, 0.1346, 0.1348, ""},
      {5, {1.0, 1.0, 0.75, 0.1}, 9.0, {3e-8, 5e-9, 2.5e-9}, 0.6180, 0.6206, ""},
      {6, {1.0, 1.0, 0.75, 0.25}, 9.0, {3e-8, 5e-9, 2.5e-9}, 0.3838, 0.3864, ""},
      {7, {1.0, 1.0, 0.75, 1.0}, 9.0, {2e-8, 1e-8, 2.5e-9}, 0.0782, 0.0790, ""},
      {8, {-1.0, 1.0, 0.75, 1.0 / 3.0}, 3.0, {1e-8, 5e-9, 2.5e-9}, 0.8757, 0.8803,
       "published bracket column repeats .0790 from table 7; compared on the lower/upper columns only"},
  };
}

}  // namespace cevem

#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "cevem/config.hpp"
#include "cevem/report.hpp"
#include "cevem/tables.hpp"

using namespace cevem;

TEST(Config, ParsesAllKeys) {
  const RunConfig c = parse_config(
      "# table 7\n"
      "command = ruin\n"
      "mu=1\n sigma = 1 \np = 0.75\nx0 = 1\nT = 9\nn = 1e4\nN = 10000\n"
      "seed = 12\nworkers = 4\nm = 8\neps = 2e-8, 1e-8, 2.5e-9   # trailing\noutput = out/t7.csv\n");
  EXPECT_EQ(c.command, Command::Ruin);
  EXPECT_EQ(c.params, (ModelParams{1.0, 1.0, 0.75, 1.0}));
  EXPECT_EQ(c.horizon, 9.0);
  EXPECT_EQ(c.steps, 10000u);
  EXPECT_EQ(c.mc.num_paths, 10000u);
  EXPECT_EQ(c.mc.master_seed, 12u);
  EXPECT_EQ(c.mc.workers, 4u);
  EXPECT_EQ(c.refinement, 8u);
  EXPECT_EQ(c.eps_schedule, (std::vector<double>{2e-8, 1e-8, 2.5e-9}));
  EXPECT_EQ(c.output_path, "out/t7.csv");
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("mu 1\n"), Error);
  EXPECT_THROW(parse_config("alpha = 1\n"), Error);
  EXPECT_THROW(parse_config("mu = one\n"), Error);
  EXPECT_THROW(parse_config("n = 1.5\n"), Error);
  EXPECT_THROW(parse_config("n = -3\n"), Error);
  EXPECT_THROW(parse_config("eps = 1e-6,,1e-7\n"), Error);
  EXPECT_THROW(parse_config("command = plot\n"), Error);
  try {
    parse_config("\n\nbogus\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Config, ReportsSeenKeys) {
  std::vector<std::string> seen;
  parse_config("T = 3\nn = 10\n# n = 5\n", {}, &seen);
  EXPECT_EQ(seen, (std::vector<std::string>{"T", "n"}));
}

TEST(Config, RoundTrip) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int r = 0; r < 500; ++r) {
    RunConfig c;
    c.command = kCommandNames[r % kCommandNames.size()].first;
    c.params = {u(gen), std::abs(u(gen)) + 1e-3, 0.5 + 0.49 * std::abs(u(gen)) / 5.0, std::abs(u(gen)) + 1e-3};
    c.horizon = std::abs(u(gen)) + 0.1;
    c.steps = 1 + gen() % 100000;
    c.mc.num_paths = 1 + gen() % 100000;
    c.mc.master_seed = gen();
    c.mc.workers = 1 + gen() % 16;
    c.refinement = 1 + gen() % 64;
    c.eps_schedule.clear();
    double e = std::abs(u(gen)) + 1e-3;
    for (int k = 0; k < r % 4; ++k) c.eps_schedule.push_back(e /= 3.0);
    c.output_path = r % 2 ? "" : "dir/file" + std::to_string(r) + ".csv";
    const RunConfig back = parse_config(format_config(c));
    EXPECT_EQ(back, c) << format_config(c);
  }
}

TEST(Config, DefaultSteps) {
  EXPECT_EQ(default_steps(9.0), 90000u);
  EXPECT_EQ(default_steps(3.0), 30000u);
  EXPECT_EQ(default_steps(1e-9), 1u);
}

TEST(Report, RuinCsvCarriesProvenance) {
  RunConfig c;
  c.steps = 100;
  c.mc.num_paths = 3;
  RuinTable t{{{1e-6, 0.5 - 1e-6, 0.5 + 1e-6}}, 1, 3, 1.0 / 3.0};
  std::ostringstream out;
  write_ruin_csv(out, c, t);
  const std::string s = out.str();
  EXPECT_NE(s.find("# cevem 0.1.0"), std::string::npos);
  EXPECT_NE(s.find("seed=20101014"), std::string::npos);
  EXPECT_NE(s.find("n=100 N=3"), std::string::npos);
  EXPECT_NE(s.find("epsilon,lower_raw,upper_raw,lower_clamped,upper_clamped,n_paths,n_steps,seed\n"),
            std::string::npos);
  EXPECT_NE(s.find("1e-06,0.499999,0.500001,0.499999,0.500001,3,100,20101014\n"), std::string::npos);
}

TEST(Report, SixSignificantDigits) {
  EXPECT_EQ(fmt6(0.818730753), "0.818731");
  EXPECT_EQ(fmt6(2.5e-9), "2.5e-09");
  EXPECT_EQ(fmt6(-0.0), "-0");
}

TEST(Tables, PublishedPresets) {
  const auto tables = published_tables();
  ASSERT_EQ(tables.size(), 8u);
  EXPECT_EQ(tables[1].params, (ModelParams{1.0, 1.0, 0.5, 0.1}));
  EXPECT_DOUBLE_EQ(tables[1].published_midpoint(), 0.8187);
  EXPECT_DOUBLE_EQ(tables[3].published_midpoint(), 0.1347);
  EXPECT_DOUBLE_EQ(tables[6].published_midpoint(), 0.0786);
  EXPECT_DOUBLE_EQ(tables[0].published_midpoint(), 0.9738);
  EXPECT_FALSE(tables[7].note.empty());
  for (const auto& t : tables) {
    EXPECT_NO_THROW(validate(t.params));
    EXPECT_NO_THROW(check_schedule(t.eps_schedule));
  }
}

// Copyright 2026 The diracbound Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "diracbound/report.hpp"

using namespace diracbound;

namespace {

std::string config_error(const RunConfig& cfg) {
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

TEST(LambdaRange, Parsing) {
  auto single = LambdaRange::parse("0.5", "model.lambda");
  EXPECT_EQ(single.values(), std::vector<double>{0.5});
  auto r = LambdaRange::parse("0.1:4.1:0.2", "model.lambda");
  auto v = r.values();
  ASSERT_EQ(v.size(), 21u);
  EXPECT_DOUBLE_EQ(v.front(), 0.1);
  EXPECT_NEAR(v.back(), 4.1, 1e-12);
  EXPECT_EQ(r.text(), "0.1:4.1:0.2");
  EXPECT_EQ(LambdaRange::parse("1:1:0.5", "l").values().size(), 1u);
}

TEST(LambdaRange, Errors) {
  auto err = [](const std::string& t) {
    try {
      LambdaRange::parse(t, "model.lambda");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_TRUE(starts_with(err("1:0:0.1"), "model.lambda: empty range"));
  EXPECT_TRUE(starts_with(err("0:1:0"), "model.lambda: range step must be positive"));
  EXPECT_TRUE(starts_with(err("0:1:-1"), "model.lambda: range step must be positive"));
  EXPECT_TRUE(starts_with(err("abc"), "model.lambda: cannot parse"));
  EXPECT_TRUE(starts_with(err("1:2"), "model.lambda: expected"));
  EXPECT_TRUE(starts_with(err("-1"), "model.lambda: lambda must be >= 0"));
}

TEST(RunConfig, ValidationNamesTheField) {
  RunConfig cfg;
  cfg.command = "energy";
  EXPECT_EQ(config_error(cfg), "");
  cfg.m = -1;
  EXPECT_TRUE(starts_with(config_error(cfg), "model.m"));
  cfg = {};
  cfg.command = "energy";
  cfg.potential.alpha = -2;
  EXPECT_TRUE(starts_with(config_error(cfg), "potential: gaussian_pair"));
  cfg = {};
  cfg.command = "energy";
  cfg.potential.family = "lorentzian";
  EXPECT_TRUE(starts_with(config_error(cfg), "potential.family"));
  cfg = {};
  cfg.command = "pade";
  cfg.kind = "nr33";
  EXPECT_TRUE(starts_with(config_error(cfg), "pade.kind"));
  cfg = {};
  cfg.command = "shoot";
  cfg.potential.family = "delta";
  EXPECT_TRUE(starts_with(config_error(cfg), "potential.family"));
  cfg = {};
  cfg.command = "shoot";
  cfg.solver.grid_step = 0;
  EXPECT_TRUE(starts_with(config_error(cfg), "solver:"));
  cfg = {};
  cfg.command = "energy";
  cfg.output = "/nonexistent-dir/x.csv";
  EXPECT_TRUE(starts_with(config_error(cfg), "output.path"));
  cfg = {};
  cfg.command = "bogus";
  EXPECT_TRUE(starts_with(config_error(cfg), "command"));
}

TEST(ApplyConfig, NestedSections) {
  auto j = nlohmann::json::parse(R"({
    "command": "scan",
    "potential": {"family": "gaussian", "alpha": 2.0, "gamma": 0.5},
    "model": {"m": 0.2, "lambda": "0.1:1:0.1"},
    "solver": {"fit_window": [4, 40], "rel_tol": 1e-9},
    "output": {"format": "json"},
    "jobs": 3
  })");
  RunConfig cfg;
  apply_config(j, cfg);
  EXPECT_EQ(cfg.command, "scan");
  EXPECT_EQ(cfg.potential.alpha, 2.0);
  EXPECT_EQ(cfg.m, 0.2);
  EXPECT_EQ(cfg.lambda.values().size(), 10u);
  EXPECT_EQ(cfg.solver.fit_window.x_max, 40.0);
  EXPECT_EQ(cfg.solver.rel_tol, 1e-9);
  EXPECT_EQ(cfg.jobs, 3u);
  EXPECT_EQ(cfg.effective_format(), "json");

  RunConfig other;
  EXPECT_THROW(apply_config(nlohmann::json::parse(R"({"model": {"m": "heavy"}})"), other), ConfigError);
  EXPECT_THROW(apply_config(nlohmann::json::parse(R"({"potential": {"alpha": 1}})"), other), ConfigError);
  EXPECT_THROW(apply_config(nlohmann::json::parse(R"({"solver": {"fit_window": [1]}})"), other), ConfigError);
  try {
    apply_config(nlohmann::json::parse(R"({"model": {"m": "heavy"}})"), other);
  } catch (const ConfigError& e) {
    EXPECT_TRUE(starts_with(e.what(), "model.m")) << e.what();
  }
}

TEST(ApplyConfig, FileWithComments) {
  auto path = std::filesystem::temp_directory_path() / "diracbound_cfg_test.json";
  {
    std::ofstream f(path);
    f << "// region sweep\n{\"command\": \"region\", \"region\": {\"m_steps\": 4}}\n";
  }
  RunConfig cfg;
  apply_config(load_config_file(path), cfg);
  EXPECT_EQ(cfg.m_steps, 4);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config_file(path), ConfigError);
}

TEST(Csv, Rfc4180Quoting) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, NumberFormatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(std::nan("")), "NaN");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Csv, HeaderAndRows) {
  Table t{{"lambda", "status"}, {{0.5, std::string("ok")}, {1.0, std::string("shoot: failed, badly")}}};
  std::ostringstream os;
  write_csv(os, t, {nlohmann::json{{"command", "x"}}, nullptr, "T"});
  EXPECT_EQ(os.str(),
            std::string("# diracbound ") + DIRACBOUND_VERSION +
                "\n# config: {\"command\":\"x\"}\n# timestamp: T\nlambda,status\n0.5,ok\n1,\"shoot: failed, badly\"\n");
}

TEST(Run, DeterministicModuloTimestamp) {
  RunConfig cfg;
  cfg.command = "energy";
  cfg.potential.family = "delta";
  cfg.m = 1.0;
  cfg.lambda = LambdaRange::parse("0:0.5:0.25", "model.lambda");
  std::ostringstream a, b, err;
  EXPECT_EQ(run(cfg, a, err, "T0").exit_code, kExitOk);
  EXPECT_EQ(run(cfg, b, err, "T0").exit_code, kExitOk);
  EXPECT_EQ(a.str(), b.str());
  const std::string body = a.str().substr(a.str().find("lambda,q,E"));
  EXPECT_EQ(body,
            "lambda,q,E,c2,c3,c4_nr,c4_rel\n0,0,1,-2,0,0,2\n0.25,0,0.8828125,-2,0,0,2\n0.5,0,0.625,-2,0,0,2\n");
}

TEST(Run, ExitCodes) {
  std::ostringstream out, err;
  RunConfig bad;
  bad.command = "energy";
  bad.m = 0.0;
  EXPECT_EQ(run(bad, out, err).exit_code, kExitInvalidConfig);
  EXPECT_NE(err.str().find("model.m"), std::string::npos);

  RunConfig partial;
  partial.command = "scan";
  partial.potential.gamma = 1.0;
  partial.m = 0.1;
  partial.lambda = LambdaRange::parse("0:0.5:0.5", "model.lambda");
  std::ostringstream o2, e2;
  auto outcome = run(partial, o2, e2, "T");
  EXPECT_EQ(outcome.exit_code, kExitPartial);
  EXPECT_EQ(outcome.failures, 1u);
  EXPECT_NE(o2.str().find("no bound state"), std::string::npos);
}

TEST(Run, OutputDirectoryFromEnvironment) {
  auto dir = std::filesystem::temp_directory_path() / "diracbound_env_test";
  std::filesystem::create_directories(dir);
  ::setenv(kOutputDirEnv, dir.c_str(), 1);
  RunConfig cfg;
  cfg.command = "region";
  cfg.gamma_steps = 3;
  cfg.output = "region.csv";
  std::ostringstream out, err;
  EXPECT_EQ(run(cfg, out, err, "T").exit_code, kExitOk);
  ::unsetenv(kOutputDirEnv);
  std::ifstream f(dir / "region.csv");
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_NE(ss.str().find("alpha,gamma,m_boundary"), std::string::npos);
  EXPECT_TRUE(out.str().empty());
  std::filesystem::remove_all(dir);
}

TEST(Run, RegionGridAgreesWithBoundary) {
  RunConfig cfg;
  cfg.command = "region";
  cfg.region_alphas = {1.0};
  cfg.gamma_steps = 5;
  auto rep = build_report(cfg);
  ASSERT_TRUE(rep.table.has_value());
  EXPECT_EQ(rep.table->rows.size(), 5u);
  for (const auto& row : rep.table->rows) {
    const double g = std::get<double>(row[1]), mb = std::get<double>(row[2]);
    if (std::isfinite(mb)) {
      EXPECT_TRUE(gaussian_region(1.0, g, 0.99 * mb));
      EXPECT_FALSE(gaussian_region(1.0, g, 1.01 * mb));
    }
  }
}

TEST(Run, FunctionalsDocument) {
  RunConfig cfg;
  cfg.command = "functionals";
  cfg.potential.family = "delta";
  cfg.m = 1.0;
  cfg.fk_q = {0.0, std::sqrt(3.0)};
  auto rep = build_report(cfg);
  EXPECT_EQ(rep.document["f1"].get<double>(), -2.0);
  EXPECT_NEAR(rep.document["fk"][1]["value"].get<double>(), -3.0, 1e-12);
  EXPECT_EQ(cfg.effective_format(), "json");
}

}  // namespace

TEST(LambdaRange, ValuesAreRoundedToTheDecimalGrid) {
  auto v = LambdaRange::parse("0.1:4.1:0.2", "model.lambda").values();
  ASSERT_EQ(v.size(), 21u);
  EXPECT_EQ(v[1], 0.3);
  EXPECT_EQ(v.back(), 4.1);
}

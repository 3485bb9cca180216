#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(HCMLAB_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  CliRun r;
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json report(const CliRun& r) { return nlohmann::json::parse(r.out); }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "hcmlab_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(CliCmCheck, ExitCodes) {
  const CliRun pass = run("cm-check --alpha 0.3 --t 0.65");
  EXPECT_EQ(pass.code, 0);
  const auto j = report(pass);
  EXPECT_EQ(j["status"], "PASS");
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["command"], "cm-check");
  for (const auto& v : j["verdicts"]) EXPECT_TRUE(v.contains("tolerance"));

  const CliRun fail = run("cm-check --alpha 0.3 --t 1.0");
  EXPECT_EQ(fail.code, 1);
  EXPECT_EQ(report(fail)["status"], "FAIL");
  EXPECT_FALSE(report(fail)["verdicts"][0]["witness"].is_null());

  EXPECT_EQ(run("cm-check --alpha 1.2 --t 0.5").code, 64);
  EXPECT_EQ(run("cm-check --alpha 0.3").code, 64);
  EXPECT_EQ(run("cm-check --alpha 0.3 --t 0.65 --bogus").code, 64);
  EXPECT_EQ(run("no-such-command").code, 64);
  EXPECT_EQ(run("cm-check --alpha 0.3 --t 0.65 --method both").code, 0);
  EXPECT_EQ(run("cm-check --alpha 0.3 --t 0.65 --n 40").code, 0);
}

TEST(CliHcmCheck, Examples) {
  EXPECT_EQ(run("hcm-check --alpha 0.2 --t 0.75").code, 0);
  EXPECT_EQ(run("hcm-check --alpha 0.2 --t 0.9").code, 1);
  EXPECT_EQ(run("hcm-check --alpha 0.6 --t 0.3").code, 1);
  EXPECT_EQ(run("hcm-check --alpha 0.2 --t 0.75 --w-min 1.5").code, 64);
}

TEST(CliPickScan, ExamplesAndFigure2) {
  const auto base = scratch("fig2.csv");
  const CliRun r = run("pick-scan --alpha 0.2 --eps 0.1 --emit-figure2 " + base.string());
  EXPECT_EQ(r.code, 0);
  const auto j = report(r);
  ASSERT_EQ(j["artifacts"].size(), 2u);
  for (const auto& path : j["artifacts"]) {
    std::ifstream in(path.get<std::string>());
    ASSERT_TRUE(in) << path;
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "re,h");
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
      const double h = std::stod(line.substr(line.find(',') + 1));
      EXPECT_GE(h, -1e-9);
      ++rows;
    }
    EXPECT_EQ(rows, 2001);
  }
  EXPECT_EQ(run("pick-scan --alpha 0.3 --t 0.8").code, 1);
  EXPECT_EQ(run("pick-scan --alpha 0.49 --eps 0.005").code, 0);
  EXPECT_EQ(run("pick-scan --alpha 0.2 --eps 0.1 --t 0.7").code, 64);
  EXPECT_EQ(run("pick-scan --alpha 0.2").code, 64);
}

TEST(CliCriticalT, BracketsNest) {
  const CliRun coarse = run("critical-t --alpha 0.5 --bisect-tol 0.1");
  ASSERT_EQ(coarse.code, 0);
  const auto a = report(coarse)["results"];
  EXPECT_GE(a["t_lo"].get<double>(), 0.5);
  EXPECT_LT(a["t_hi"].get<double>(), 1.0 + 1e-15);
  const CliRun fine = run("critical-t --alpha 0.5 --bisect-tol 0.05");
  const auto b = report(fine)["results"];
  EXPECT_GE(b["t_lo"].get<double>(), a["t_lo"].get<double>());
  EXPECT_LE(b["t_hi"].get<double>(), a["t_hi"].get<double>());
  const auto c = report(run("critical-t --alpha 0.25 --bisect-tol 0.1"))["results"];
  EXPECT_GE(c["t_lo"].get<double>(), 0.75 - 1e-9);
  EXPECT_EQ(run("critical-t --alpha 0.7").code, 64);
}

TEST(CliMcVerify, ExamplesAndDeterminism) {
  const CliRun t = run("mc-verify --check T-density --alpha 0.3 --n 100000 --seed 42");
  EXPECT_EQ(t.code, 0);
  EXPECT_EQ(run("mc-verify --check zinv-factorization --n-gamma 3").code, 0);
  EXPECT_EQ(run("mc-verify --check bessel-product --alpha 0.166667 --x 1 --y 2").code, 0);
  EXPECT_EQ(run("mc-verify --check sqrt-gamma --t 1 --s 1 --n 20000").code, 0);
  EXPECT_EQ(run("mc-verify --check stable-laplace --alpha 0.5 --n 20000").code, 0);
  EXPECT_EQ(run("mc-verify --check kanter-cm --alpha 0.7").code, 0);
  EXPECT_EQ(run("mc-verify --check nope").code, 64);

  auto strip = [](nlohmann::json j) {
    j.erase("wall_time");
    return j.dump();
  };
  const CliRun again = run("mc-verify --check T-density --alpha 0.3 --n 100000 --seed 42");
  EXPECT_EQ(strip(report(t)), strip(report(again)));
  const CliRun other = run("mc-verify --check T-density --alpha 0.3 --n 100000 --seed 43");
  EXPECT_NE(strip(report(t)), strip(report(other)));

  const auto samples = scratch("t.samples");
  ASSERT_EQ(run("mc-verify --check T-density --alpha 0.3 --n 1000 --emit-samples " +
                samples.string())
                .code,
            0);
  std::ifstream in(samples);
  std::string header;
  std::getline(in, header);
  const auto h = nlohmann::json::parse(header);
  EXPECT_EQ(h["n"], 1000);
  EXPECT_EQ(h["seed"], 42);
}

TEST(CliInvert, CsvAndMethods) {
  const CliRun one = run("invert --alpha 0.5 --t 1 --lambda 1.5707963267948966 --csv -");
  ASSERT_EQ(one.code, 0);
  std::istringstream in(one.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "lambda,g,err");
  const double g = std::stod(row.substr(row.find(',') + 1));
  EXPECT_NEAR(g, 1.0, 1e-9);

  const CliRun grid = run("invert --alpha 0.3 --t 0.65 --lambda-min 0.01 --lambda-max 100 --csv -");
  ASSERT_EQ(grid.code, 0);
  std::istringstream gin(grid.out);
  std::getline(gin, header);
  while (std::getline(gin, row)) {
    const double v = std::stod(row.substr(row.find(',') + 1));
    EXPECT_GE(v, -1e-8) << row;
  }

  const CliRun both = run("invert --alpha 0.2 --t 0.7 --method both --csv -");
  ASSERT_EQ(both.code, 0);
  std::istringstream bin(both.out);
  std::getline(bin, header);
  EXPECT_EQ(header, "lambda,g,err,g2,err2");
  while (std::getline(bin, row)) {
    double l, g1, e1, g2, e2;
    char c;
    std::istringstream fields(row);
    fields >> l >> c >> g1 >> c >> e1 >> c >> g2 >> c >> e2;
    EXPECT_NEAR(g1, g2, 1e-6) << row;
  }

  const CliRun json = run("invert --alpha 0.5 --t 0.5 --lambda 1 2");
  ASSERT_EQ(json.code, 0);
  EXPECT_EQ(report(json)["command"], "invert");
  EXPECT_EQ(run("invert --alpha 0.2 --t 2 --c 0.01 --lambda 1").code, 64);
}

TEST(CliHelp, ListsDefaults) {
  const CliRun r = run("cm-check --help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("[0.05]"), std::string::npos);
  EXPECT_NE(r.out.find("[1e-12]"), std::string::npos);
  EXPECT_NE(run("--help").out.find("mc-verify"), std::string::npos);
}

#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace qdrep::cli {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qdrep");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST(Sweep, ParsesUnitsAndScale) {
  const auto s = parse_sweep("L_total=0 km:2000 km:41");
  EXPECT_EQ(s.variable, "L_total");
  EXPECT_EQ(s.points, 41);
  const auto v = s.values();
  EXPECT_EQ(v.front(), 0.0);
  EXPECT_EQ(v.back(), 2e6);
  EXPECT_DOUBLE_EQ(v[1], 5e4);

  const auto lg = parse_sweep("L_total=1km:1000km:4:log");
  const auto w = lg.values();
  EXPECT_NEAR(w[1], 1e4, 1e-6);
  EXPECT_NEAR(w[2], 1e5, 1e-5);
}

TEST(Sweep, RejectsInvalidSpecs) {
  EXPECT_THROW(parse_sweep("L_total"), UsageError);
  EXPECT_THROW(parse_sweep("bogus=0:1:3"), UsageError);
  EXPECT_THROW(parse_sweep("L_total=0 km:1 km:1"), UsageError);
  EXPECT_THROW(parse_sweep("L_total=5 km:1 km:3"), UsageError);
  EXPECT_THROW(parse_sweep("L_total=0 km:1 km:3:log"), UsageError);
  EXPECT_THROW(parse_sweep("L_total=0:1 km:3"), UsageError);
  EXPECT_THROW(parse_sweep("L_total=0 km:1 km:3:cubic"), UsageError);
}

TEST(Rates, CsvShapeAndReferenceRows) {
  const auto r = run_cli({"rates", "--sweep", "L_total=0 km:1000 km:5"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 6u);
  EXPECT_EQ(l[0], "L_km, rate_direct, rate_B, rate_C, rate_D, rate_2plus2");
  EXPECT_EQ(l[1].substr(0, 30), "0.000000e+00, 1.000000e+10, 5.");
  EXPECT_EQ(l[5].substr(0, 14), "1.000000e+03, ");
  const double rate_b = std::stod(l[5].substr(l[5].find(',', 15) + 2));
  EXPECT_NEAR(rate_b, 0.12, 0.005);
  EXPECT_NE(r.err.find("crossover"), std::string::npos);
}

TEST(Rates, TableCurvesOrdered) {
  const auto t = rates_table(default_parameters(), parse_sweep("L_total=100 km:2000 km:20"));
  for (const auto& row : t.rows) {
    EXPECT_GT(row[2], row[3]);
    EXPECT_GT(row[3], row[4]);
  }
}

TEST(Contour, DefaultGridContainsAnchors) {
  const auto r = run_cli({"contour"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto l = lines(r.out);
  EXPECT_EQ(l[0], "F_p, polarization, F_ent, F_transfer, F_gate, F_readout, F_total");
  int anchors = 0;
  for (const auto& row : l) {
    if (row.rfind("5.000000e+02, 9.500000e-01,", 0) == 0 || row.rfind("2.000000e+02, 9.500000e-01,", 0) == 0 ||
        row.rfind("5.000000e+02, 8.000000e-01,", 0) == 0 || row.rfind("5.000000e+02, 9.990000e-01,", 0) == 0) {
      ++anchors;
    }
  }
  EXPECT_EQ(anchors, 4);
}

TEST(Contour, OutOfRegimeNeedsForce) {
  const auto refused = run_cli({"contour", "--fp", "10,500", "--pol", "0.95"});
  EXPECT_EQ(refused.code, kValidationFailure);
  EXPECT_NE(refused.err.find("--force"), std::string::npos);
  const auto forced = run_cli({"contour", "--fp", "10,500", "--pol", "0.95", "--force"});
  EXPECT_EQ(forced.code, kOk);
  EXPECT_EQ(lines(forced.out).size(), 3u);
  EXPECT_EQ(run_cli({"contour", "--pol", "0.5"}).code, kUsageError);
}

TEST(Output, MetadataCompanion) {
  const auto path = std::filesystem::temp_directory_path() / "qdrep_cli_test.csv";
  const auto r = run_cli({"--out", path.string(), "--param", "F_res=300", "contour", "--fp", "300", "--pol", "0.9"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream meta(path.string() + ".meta.json");
  const auto j = nlohmann::json::parse(meta);
  EXPECT_EQ(j["command"], "contour");
  EXPECT_EQ(j["rows"], 1);
  EXPECT_EQ(j["parameters"]["F_res"], "300");
  EXPECT_EQ(j["provenance"]["F_res"], "--param");
  EXPECT_EQ(j["columns"].size(), 7u);
  std::filesystem::remove(path);
  std::filesystem::remove(path.string() + ".meta.json");
}

TEST(ExitCodes, UsageAndConfigErrors) {
  EXPECT_EQ(run_cli({}).code, kUsageError);
  EXPECT_EQ(run_cli({"frobnicate"}).code, kUsageError);
  EXPECT_EQ(run_cli({"rates", "--sweep", "L_total=1:2"}).code, kUsageError);
  EXPECT_EQ(run_cli({"rates", "--param", "no_such=1"}).code, kConfigError);
  EXPECT_EQ(run_cli({"rates", "--param", "eta_d=2"}).code, kConfigError);
  EXPECT_EQ(run_cli({"--config", "/nonexistent/qdrep.cfg", "rates"}).code, kUsageError);
  EXPECT_EQ(run_cli({"--help"}).code, kOk);
}

TEST(ConfigFile, IsReadAndOverridden) {
  const auto path = std::filesystem::temp_directory_path() / "qdrep_cli_test.cfg";
  {
    std::ofstream f(path);
    f << "F_res = 200\nnuclear_polarization = 0.8 # low\n";
  }
  const auto r = run_cli({"--config", path.string(), "contour", "--fp", "200", "--pol", "0.8"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto row = lines(r.out)[1];
  EXPECT_NEAR(std::stod(row.substr(row.rfind(',') + 2)), 0.526, 0.01);
  {
    std::ofstream f(path);
    f << "F_res = lots\n";
  }
  EXPECT_EQ(run_cli({"--config", path.string(), "contour"}).code, kConfigError);
  std::filesystem::remove(path);
}

TEST(Mc, ReportIsDeterministic) {
  const std::vector<std::string> args{"--seed", "5", "--trials", "3000", "mc", "--p0", "0.1", "--p-swap", "0.5",
                                      "--slot", "1", "--param", "n_nest=1"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("ratio="), std::string::npos);
  const auto c = run_cli({"--seed", "6", "--trials", "3000", "mc", "--p0", "0.1", "--p-swap", "0.5", "--slot", "1",
                          "--param", "n_nest=1"});
  EXPECT_NE(a.out, c.out);
}

TEST(Mc, TrialCsvDump) {
  const auto path = std::filesystem::temp_directory_path() / "qdrep_cli_mc.csv";
  const auto r = run_cli({"--out", path.string(), "--trials", "20", "mc", "--histogram", "4"});
  EXPECT_NE(r.out.find("storage histogram"), std::string::npos);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "trial, total_time_s, swap_failures, max_storage_s");
  int rows = 0;
  for (std::string l; std::getline(in, l);) ++rows;
  EXPECT_EQ(rows, 20);
  EXPECT_EQ(run_cli({"mc", "--p0", "2"}).code, kUsageError);
  std::filesystem::remove(path);
  std::filesystem::remove(path.string() + ".meta.json");
}

TEST(Qsim, ChecksPass) {
  const auto r = run_cli({"qsim"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("Rabi max dev"), std::string::npos);
  EXPECT_NE(r.out.find("config chain l=4"), std::string::npos);
}

TEST(Validate, LowCooperativitySurfacesWarning) {
  const auto r = run_cli({"--trials", "20000", "validate", "--param", "F_res=20"});
  EXPECT_NE(r.out.find("warning: gate:"), std::string::npos);
  EXPECT_NE(r.out.find("[PASS] 10"), std::string::npos);
}

TEST(Validate, DefaultPassesAcrossSeeds) {
  for (const char* seed : {"1", "987654321"}) {
    const auto r = run_cli({"--seed", seed, "--trials", "100000", "validate"});
    EXPECT_EQ(r.code, kOk) << r.out;
    EXPECT_NE(r.out.find("validation passed"), std::string::npos);
  }
}

}  // namespace
}  // namespace qdrep::cli

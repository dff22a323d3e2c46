#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bellchsh/cli.hpp"

namespace bc = bellchsh;
namespace cli = bellchsh::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::ordered_json invoke_json(std::vector<std::string> args) {
  args.insert(args.begin(), {"--format", "json"});
  const auto r = invoke(std::move(args));
  EXPECT_EQ(r.code, 0) << r.err;
  return nlohmann::ordered_json::parse(r.out);
}

}  // namespace

TEST(Angles, Parsing) {
  EXPECT_DOUBLE_EQ(cli::parse_angle("pi/2", "--x"), std::numbers::pi / 2);
  EXPECT_DOUBLE_EQ(cli::parse_angle("-3pi/4", "--x"), -3 * std::numbers::pi / 4);
  EXPECT_DOUBLE_EQ(cli::parse_angle("0.5*pi", "--x"), std::numbers::pi / 2);
  EXPECT_DOUBLE_EQ(cli::parse_angle("0.25", "--x"), 0.25);
  EXPECT_THROW(cli::parse_angle("banana", "--x"), cli::UsageError);
  EXPECT_EQ(cli::parse_angle_list("0,pi/2,pi/4,-pi/4", "--angles", 4).size(), 4u);
  EXPECT_THROW(cli::parse_angle_list("0,1", "--angles", 4), cli::UsageError);
  EXPECT_THROW(cli::parse_int_list("3,2", "--n-list"), cli::UsageError);
  EXPECT_EQ(cli::round_to(-1e-12, 5), 0.0);
  EXPECT_FALSE(std::signbit(cli::round_to(-1e-12, 5)));
}

TEST(Gisin, ReproducesTable) {
  const auto j = invoke_json({"gisin"});
  ASSERT_EQ(j.size(), 7u);
  const std::vector<std::pair<long long, double>> expected{{3, 2.40370},    {4, 2.0},       {10, 2.10555},
                                                           {100, 2.03108},  {1000, 2.00374}, {10000, 2.00039},
                                                           {100000, 2.00004}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(j[i]["params"]["N"].get<double>(), static_cast<double>(expected[i].first));
    EXPECT_NEAR(j[i]["value"].get<double>(), expected[i].second, 1e-9);
    EXPECT_EQ(j[i]["violated"].get<bool>(), expected[i].first != 4);
  }
}

TEST(Squeezed, BoundaryValueIsNotViolation) {
  const auto j = invoke_json({"squeezed", "--lambda", "0.41421356"});
  EXPECT_EQ(j[0]["value"].get<double>(), 2.0);
  EXPECT_FALSE(j[0]["violated"].get<bool>());
  const auto k = invoke_json({"squeezed", "--lambda", "0.5"});
  EXPECT_TRUE(k[0]["violated"].get<bool>());
}

TEST(Mermin, ThreeAndFourParties) {
  const auto three = invoke({"mermin", "--parties", "3"});
  ASSERT_EQ(three.code, 0);
  EXPECT_NE(three.out.find("value: -4.00000"), std::string::npos) << three.out;
  const auto four = invoke_json({"mermin", "--parties", "4"});
  EXPECT_NEAR(std::fabs(four[0]["value"].get<double>()), 5.65685, 1e-9);
  EXPECT_EQ(four[0]["quantum_bound"].get<double>(), 5.65685);
  EXPECT_EQ(invoke({"mermin", "--parties", "5"}).code, 2);
}

TEST(Chsh, StandardPhasesAndOptimize) {
  const auto j = invoke_json({"chsh"});
  EXPECT_NEAR(std::fabs(j[0]["value"].get<double>()), 2.82843, 1e-9);
  const auto o = invoke_json({"chsh", "--polar", "--optimize", "--restarts", "2"});
  EXPECT_NEAR(o[0]["value"].get<double>(), 2.82843, 1e-9);
  EXPECT_EQ(o[0]["settings"].size(), 8u);
  EXPECT_TRUE(o[0]["details"].contains("evaluations"));
}

TEST(Spin, DefaultsAndOptimum) {
  const auto opt = invoke_json({"spin", "--j", "1", "--optimize"});
  EXPECT_NEAR(opt[0]["value"].get<double>(), 2.55228, 1e-9);
  EXPECT_EQ(invoke({"spin", "--j", "0"}).code, 2);
  EXPECT_EQ(invoke({"spin", "--j", "abc"}).code, 2);
}

TEST(Coherent, ClosedFormAgreesWithOracle) {
  const auto j = invoke_json({"coherent", "--oracle"});
  const double closed = j[0]["value"].get<double>();
  const double oracle = j[0]["details"]["oracle"].get<double>();
  EXPECT_NEAR(closed, oracle, 2e-5);
  EXPECT_EQ(j[0]["details"]["cutoff"].get<long long>(), 40);
}

TEST(Output, JsonRoundTripIsByteIdentical) {
  const auto r = invoke({"--format", "json", "gisin", "--n-list", "3,10"});
  ASSERT_EQ(r.code, 0);
  const auto parsed = nlohmann::ordered_json::parse(r.out);
  EXPECT_EQ(parsed.dump(2) + "\n", r.out);
}

TEST(Output, FormatsCarrySameValue) {
  const auto text = invoke({"--precision", "7", "squeezed", "--lambda", "0.3"});
  const auto json = invoke_json({"--precision", "7", "squeezed", "--lambda", "0.3"});
  const auto csv = invoke({"--format", "csv", "--precision", "7", "squeezed", "--lambda", "0.3"});
  std::ostringstream v;
  v << std::fixed << std::setprecision(7) << json[0]["value"].get<double>();
  EXPECT_NE(text.out.find("value: " + v.str()), std::string::npos);
  EXPECT_EQ(csv.out.rfind("scenario,params,settings,value,classical_bound,quantum_bound,violated,details\n", 0), 0u);
  EXPECT_NE(csv.out.find("," + v.str() + ","), std::string::npos) << csv.out;
}

TEST(Output, SeedMakesRunsRepeatable) {
  const std::vector<std::string> args{"--seed", "11", "lhv", "--samples", "200000", "--angles", "0,1,2,3"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto other = args;
  other[1] = "12";
  EXPECT_NE(invoke(other).out, a.out);
  auto threads = args;
  threads.insert(threads.begin(), {"--workers", "3"});
  EXPECT_EQ(invoke(threads).out, a.out);
}

TEST(Output, OutFileUsesExtension) {
  const auto dir = std::filesystem::temp_directory_path() / "bellchsh_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "report.csv").string();
  const auto r = invoke({"--out", path, "mermin", "--parties", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "scenario,params,settings,value,classical_bound,quantum_bound,violated,details");
  std::filesystem::remove_all(dir);
  EXPECT_EQ(invoke({"--out", "/nonexistent-dir/x.json", "chsh"}).code, 2);
}

TEST(Errors, ExitCodesAndMessages) {
  const auto bad_flag = invoke({"chsh", "--bogus"});
  EXPECT_EQ(bad_flag.code, 2);
  EXPECT_NE(bad_flag.err.find("--bogus"), std::string::npos);
  const auto unknown = invoke({"optimize", "--scenario", "nope"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("gisin"), std::string::npos);
  const auto lambda = invoke({"squeezed", "--lambda", "1.5"});
  EXPECT_EQ(lambda.code, 2);
  EXPECT_NE(lambda.err.find("--lambda"), std::string::npos);
  const auto guard = invoke({"coherent", "--oracle", "--eta", "7"});
  EXPECT_EQ(guard.code, 1);
  EXPECT_NE(guard.err.find("cutoff"), std::string::npos);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
  EXPECT_EQ(invoke({"lhv", "--samples", "0"}).code, 2);
  EXPECT_EQ(invoke({"lhv", "--model", "quantum"}).code, 2);
}

TEST(Optimize, EveryScenarioRuns) {
  for (const auto& name : bc::scenario_names()) {
    const auto j = invoke_json({"optimize", "--scenario", name, "--restarts", "2"});
    ASSERT_EQ(j.size(), 1u) << name;
    EXPECT_LE(std::fabs(j[0]["value"].get<double>()), j[0]["quantum_bound"].get<double>() + 1e-9) << name;
  }
  const auto r = invoke_json({"optimize", "--scenario", "r-state", "--r", "0.3"});
  EXPECT_NEAR(r[0]["value"].get<double>(), 2.28298, 1e-9);
}

#include "cli.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace disperse::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("disperse_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    auto p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

TEST_F(CliTest, ConstructIsDeterministic) {
  auto a = dir_ / "a", b = dir_ / "b";
  auto ra = call({"construct", "--dim", "2", "--eps", "0.3", "--seed", "7", "--out", a.string()});
  auto rb = call({"construct", "--dim", "2", "--eps", "0.3", "--seed", "7", "--out", b.string()});
  ASSERT_EQ(ra.code, kOk) << ra.err;
  ASSERT_EQ(rb.code, kOk);
  EXPECT_EQ(slurp(a / "points.csv"), slurp(b / "points.csv"));
  EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
  auto report = json::parse(slurp(a / "report.json"));
  EXPECT_EQ(report["schema"], 1);
  EXPECT_TRUE(report["accepted"].get<bool>());
  EXPECT_LE(report["total"].get<double>(), report["bound"].get<double>());
}

TEST_F(CliTest, RandomOnlySize) {
  auto r = call({"construct", "--dim", "2", "--eps", "0.5", "--method", "random-only", "--out", dir_.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto report = json::parse(slurp(dir_ / "report.json"));
  const double n = report["net_size"].get<double>(), delta = report["net"]["delta"].get<double>();
  EXPECT_EQ(report["M"].get<std::uint64_t>(), static_cast<std::uint64_t>(std::floor(3 * std::log(n) / delta)));
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(call({"construct", "--dim", "2"}).code, kUsage);
  EXPECT_EQ(call({"construct", "--dim", "2", "--eps", "1.5"}).code, kUsage);
  EXPECT_EQ(call({"construct", "--dim", "2", "--eps", "0.5", "--delta", "0.1", "--gamma", "1"}).code, kUsage);
  EXPECT_EQ(call({"nonsense"}).code, kUsage);
  EXPECT_EQ(call({}).code, kUsage);
  EXPECT_EQ(call({"--help"}).code, kOk);
}

TEST_F(CliTest, NetCap) {
  auto r = call({"construct", "--dim", "3", "--eps", "0.3", "--cap-net", "1000", "--out", dir_.string()});
  EXPECT_EQ(r.code, kCapExceeded);
  EXPECT_NE(r.err.find("cap"), std::string::npos);
}

TEST_F(CliTest, DispEmptyFile) {
  auto p = write("empty.csv", "# nothing\n");
  auto r = call({"disp", "--in", p.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["value"], 1.0);
  EXPECT_EQ(j["n"], 0);
}

TEST_F(CliTest, DispParseErrorNamesLine) {
  auto p = write("bad.csv", "0.1,0.2\n0.3\n");
  auto r = call({"disp", p.string()});
  EXPECT_EQ(r.code, kDataError);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  EXPECT_EQ(call({"disp", (dir_ / "missing.csv").string()}).code, kNoInput);
}

TEST_F(CliTest, DispOracleAndTorus) {
  auto p = write("pts.csv", "0.1,0.7\n0.4,0.2\n0.8,0.9\n0.55,0.5\n0.3,0.35\n");
  auto cube = call({"disp", p.string(), "--oracle", "g=200"});
  ASSERT_EQ(cube.code, kOk) << cube.err;
  auto jc = json::parse(cube.out);
  EXPECT_TRUE(jc["exact"].get<bool>());
  EXPECT_LE(jc["oracle"]["value"].get<double>(), jc["value"].get<double>() + 1e-12);
  auto torus = call({"disp", p.string(), "--torus"});
  ASSERT_EQ(torus.code, kOk);
  auto jt = json::parse(torus.out);
  EXPECT_GE(jt["value"].get<double>(), jc["value"].get<double>());
  EXPECT_TRUE(jt["witness"].contains("arcs"));
}

TEST_F(CliTest, DispFallsBackToEstimateOverCap) {
  std::string text;
  for (int i = 0; i < 6; ++i) text += "0.1,0.2,0.3,0.4\n";
  auto p = write("hi.csv", text);
  auto r = call({"disp", p.string(), "--trials", "100"});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto j = json::parse(r.out);
  EXPECT_FALSE(j["exact"].get<bool>());
  EXPECT_EQ(j["method"], "estimate");
}

TEST_F(CliTest, BoundsTable) {
  auto r = call({"bounds", "--eps", "0.5", "--dim", "2", "--n", "100"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "name,value,regime_ok,constant_free,c_used");
  EXPECT_NE(r.out.find("thm_main_cube,177.4114149641503"), std::string::npos);
  EXPECT_NE(r.out.find("thm_main_disp_torus,"), std::string::npos);
  auto fig = call({"bounds", "--figure1"});
  ASSERT_EQ(fig.code, kOk);
  EXPECT_EQ(fig.out.substr(0, fig.out.find('\n')), "eps,d,branch,value");
  EXPECT_EQ(std::count(fig.out.begin(), fig.out.end(), '\n'), 1 + 14 * 120);
}

TEST_F(CliTest, NetAndVerify) {
  auto r = call({"net", "--dim", "2", "--eps", "0.5", "--torus"});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["kind"], "torus");
  EXPECT_GE(j["guaranteed_volume"].get<double>(), j["delta"].get<double>());
  auto v = call({"verify", "--dim", "2", "--eps", "0.5", "--trials", "500"});
  ASSERT_EQ(v.code, kOk) << v.err;
  EXPECT_EQ(json::parse(v.out)["violations"], 0);
}

TEST_F(CliTest, BenchDeterministic) {
  std::vector<std::string> args{"bench", "--eps", "0.5", "--dims", "1,2", "--seed", "3"};
  auto a = call(args), b = call(args);
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 3);
  EXPECT_EQ(a.out.find("false"), std::string::npos);
}

}  // namespace
}  // namespace disperse::cli

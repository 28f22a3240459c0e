#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "avw/cli/commands.hpp"
#include "avw/cli/csv.hpp"
#include "avw/numerics/distributions.hpp"
#include "avw/simharness.hpp"

namespace avw::cli {
namespace {

namespace fs = std::filesystem;

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "avw");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("avw_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    x_ = numerics::sample(numerics::Distribution::normal_iid(4), 20, 1, 0);
    y_ = numerics::sample(numerics::Distribution::normal_iid(4, 0.4), 15, 2, 0);
    write("x.csv", "a,b,c,d\n" + write_csv(x_));
    write("y.csv", write_csv(y_));
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
  }

  fs::path dir_;
  Matrix x_;
  Matrix y_;
};

TEST(Csv, ParseHeaderAndQuotes) {
  const auto t = parse_csv("g,\"v,1\",v2\nA,1,2\nB,3,4\n");
  EXPECT_EQ(t.header, (std::vector<std::string>{"g", "v,1", "v2"}));
  ASSERT_EQ(t.rows.size(), 2u);
  const auto plain = parse_csv("1,2\n3,4\n");
  EXPECT_TRUE(plain.header.empty());
  EXPECT_EQ(numeric_block(plain)(1, 0), 3.0);
  EXPECT_THROW(parse_csv("1,2\n3\n"), std::invalid_argument);
  EXPECT_THROW(parse_csv(""), std::invalid_argument);
  EXPECT_THROW(numeric_block(parse_csv("a,b\n1,x\n")), std::invalid_argument);
}

TEST(Csv, ColumnRanges) {
  const auto r = parse_column_range("2..3");
  EXPECT_EQ(r.first, 2u);
  EXPECT_EQ(r.last, 3u);
  EXPECT_EQ(parse_column_range("4").last, 4u);
  EXPECT_THROW(parse_column_range("3..2"), std::invalid_argument);
  EXPECT_THROW(parse_column_range("0"), std::invalid_argument);
  const Matrix m = numeric_block(parse_csv("1,2,3\n4,5,6\n"), r);
  EXPECT_EQ(m.cols(), 2);
  EXPECT_EQ(m(1, 1), 6.0);
}

TEST(Csv, WriteReadRoundTripIsExact) {
  const Matrix v = numerics::sample(numerics::Distribution::cauchy(3), 50, 8, 0);
  EXPECT_EQ(numeric_block(parse_csv(write_csv(v))), v);
  EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(Csv, SplitByGroup) {
  const auto t = parse_csv("v1,grp,v2\n1,a,2\n3,b,4\n5,a,6\n7,c,8\n");
  EXPECT_THROW(split_by_group(t, "grp", {}), std::invalid_argument);
  const auto s = split_by_group(t, "grp", {"a", "c"});
  EXPECT_EQ(s.x_label, "a");
  EXPECT_EQ(s.x.rows(), 2);
  EXPECT_EQ(s.x.cols(), 2);
  EXPECT_EQ(s.y(0, 1), 8.0);
  EXPECT_THROW(split_by_group(t, "missing", {"a", "b"}), std::invalid_argument);
}

TEST_F(CliTest, TestCommandPrintsJson) {
  const auto r = invoke({"test", "--x", path("x.csv"), "--y", path("y.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["direction"], "xx");
  EXPECT_EQ(j["n"], 20);
  EXPECT_EQ(j["m"], 15);
  EXPECT_EQ(j["p1_source"], "upper_bound_two_thirds");
  EXPECT_EQ(j["card_i"], 20 * 19 / 2 * 18 * 15);
}

TEST_F(CliTest, OutputIsByteIdenticalAcrossRuns) {
  const auto a = invoke({"test", "--x", path("x.csv"), "--y", path("y.csv"), "--p1",
                         "oracle:normal:5", "--metric", "l1", "--direction", "both"});
  const auto b = invoke({"test", "--x", path("x.csv"), "--y", path("y.csv"), "--p1",
                         "oracle:normal:5", "--metric", "l1", "--direction", "both"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 2);
}

TEST_F(CliTest, YyDirectionEqualsSwappedXx) {
  const auto yy = invoke({"test", "--x", path("x.csv"), "--y", path("y.csv"), "--direction", "yy"});
  const auto xx = invoke({"test", "--x", path("y.csv"), "--y", path("x.csv")});
  ASSERT_EQ(yy.code, kExitOk) << yy.err;
  const auto a = nlohmann::json::parse(yy.out);
  const auto b = nlohmann::json::parse(xx.out);
  EXPECT_EQ(a["t"], b["t"]);
  EXPECT_EQ(a["z"], b["z"]);
  EXPECT_EQ(a["p_value"], b["p_value"]);
}

TEST_F(CliTest, GroupedInput) {
  std::string text = "label,f1,f2,f3,f4\n";
  for (Eigen::Index i = 0; i < x_.rows(); ++i) {
    text += "ctrl";
    for (Eigen::Index j = 0; j < 4; ++j) text += "," + format_double(x_(i, j));
    text += "\n";
  }
  for (Eigen::Index i = 0; i < y_.rows(); ++i) {
    text += "case";
    for (Eigen::Index j = 0; j < 4; ++j) text += "," + format_double(y_(i, j));
    text += "\n";
  }
  write("all.csv", text);
  const auto grouped = invoke({"test", "--data", path("all.csv"), "--group-col", "label",
                               "--columns", "1..4"});
  const auto split = invoke({"test", "--x", path("x.csv"), "--y", path("y.csv")});
  ASSERT_EQ(grouped.code, kExitOk) << grouped.err;
  const auto a = nlohmann::json::parse(grouped.out);
  EXPECT_EQ(a["t"], nlohmann::json::parse(split.out)["t"]);
  EXPECT_EQ(a["x_label"], "ctrl");
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(invoke({"test", "--x", path("x.csv")}).code, kExitValidation);
  EXPECT_EQ(invoke({"test", "--x", path("x.csv"), "--y", path("nope.csv")}).code, kExitValidation);
  EXPECT_EQ(invoke({"test", "--x", path("x.csv"), "--y", path("y.csv"), "--p1", "0.5"}).code,
            kExitDegenerateVariance);
  EXPECT_EQ(invoke({"test", "--x", path("x.csv"), "--y", path("y.csv"), "--alpha", "1.5"}).code,
            kExitValidation);
  EXPECT_EQ(invoke({"test", "--x", path("x.csv"), "--y", path("y.csv"), "--metric", "cos"}).code,
            kExitValidation);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitValidation);
  EXPECT_EQ(invoke({}).code, kExitValidation);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST_F(CliTest, EstimateP1) {
  const auto r = invoke({"estimate-p1", "--dist", "uniform", "--dim", "1", "--metric", "l1",
                         "--reps", "50000", "--seed", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 23.0 / 45.0, 4 * j["se"].get<double>());
  EXPECT_EQ(j["reps"], 50000);
  EXPECT_EQ(invoke({"estimate-p1", "--dist", "laplace"}).code, kExitValidation);
  const auto p2 = invoke({"estimate-p1", "--dist", "normal", "--dim", "2", "--reps", "30000", "--p2"});
  EXPECT_EQ(nlohmann::json::parse(p2.out)["quantity"], "p2");
}

TEST_F(CliTest, SimulateWritesOutputs) {
  write("ok.cfg",
        "name: tiny\nnull_dist: {family: normal}\nn: 10\ndim: 2\nreps: 5\n"
        "tests: [\"2/3\", {id: hotelling}]\n");
  const auto r = invoke({"simulate", "--config", path("ok.cfg"), "--out", path("out")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "tiny.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "tiny.json"));
}

TEST_F(CliTest, MalformedConfigWritesNothing) {
  write("bad.cfg", "name: tiny\nnull_dist: {family: normal}\nreps: -3\ntests: [\"2/3\"]\n");
  const auto r = invoke({"simulate", "--config", path("bad.cfg"), "--out", path("out")});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("line"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir_ / "out"));
}

TEST(ShippedConfigs, AllParse) {
  const fs::path configs = fs::path(AVW_SOURCE_DIR) / "configs";
  int count = 0;
  for (const auto& entry : fs::directory_iterator(configs)) {
    if (entry.path().extension() != ".cfg") continue;
    ++count;
    EXPECT_NO_THROW(sim::load_scenarios(entry.path())) << entry.path();
  }
  EXPECT_GT(count, 0);
}

TEST(ShippedConfigs, LocationOrderingHoldsPerDataset) {
  auto specs = sim::load_scenarios(fs::path(AVW_SOURCE_DIR) / "configs" / "fig2_location.cfg");
  ASSERT_EQ(specs.size(), 3u);
  for (auto& spec : specs) {
    spec.reps = 20;
    const auto r = sim::run_scenario(spec);
    for (const auto& [n, m] : spec.size_points()) {
      const auto& oracle = r.find("avw[oracle]", n, 10);
      const auto& mid = r.find("avw[2/3]", n, 10);
      const auto& loose = r.find("avw[1]", n, 10);
      EXPECT_GE(oracle.rate, mid.rate);
      EXPECT_GE(mid.rate, loose.rate);
      for (std::size_t k = 0; k < mid.decisions.size(); ++k) {
        EXPECT_LE(mid.decisions[k], oracle.decisions[k]);
        EXPECT_LE(loose.decisions[k], mid.decisions[k]);
      }
    }
  }
}

}  // namespace
}  // namespace avw::cli

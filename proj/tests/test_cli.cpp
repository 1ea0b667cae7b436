#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"

namespace fs = std::filesystem;
using bergman::cli::run;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bergman_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static Result call(std::vector<std::string> args) {
    args.insert(args.begin(), "bergman");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, InterpolateCentral) {
  const auto cfg = write("c.json", R"({"params": {"p": 2, "alpha": 0}, "points": [0], "J": 0})");
  const auto r = call({"interpolate", "--config", cfg});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["case"], "central");
  EXPECT_EQ(j["expression"], "1");
  EXPECT_EQ(j["contract_ok"], true);
}

TEST_F(Cli, InterpolateClusteredHasPositiveMargins) {
  const auto cfg = write("c.json", R"({"points": [0.9, [0.9, 1e-7]], "J": 1, "estimate_norm": false})");
  const auto r = call({"interpolate", "--config", cfg});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["case"], "clustered");
  ASSERT_EQ(j["gershgorin_margins"].size(), 2u);
  for (const auto& m : j["gershgorin_margins"]) EXPECT_GT(m.get<double>(), 0);
}

TEST_F(Cli, InterpolateCsvAndOutFile) {
  const auto cfg = write("c.json", R"({"points": [0.95, -0.95], "J": 0, "estimate_norm": false})");
  const std::string out = (dir_ / "jets.csv").string();
  const auto r = call({"interpolate", "--config", cfg, "--format", "csv", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "index,log10_magnitude,phase,relative_error");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 2);
}

TEST_F(Cli, PaperStrategyIsNumericalFailure) {
  const auto cfg = write("c.json", R"({"points": [0.9, [0.9, 1e-7]], "J": 1})");
  const auto r = call({"interpolate", "--config", cfg, "--strategy", "paper"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.out)["status"], "numerical-failure");
  EXPECT_NE(r.err.find("row 0"), std::string::npos);
}

TEST_F(Cli, BadInputExitsOne) {
  const auto bad_json = write("a.json", "{\"points\": [0],\n  \"J\": }");
  auto r = call({"interpolate", "--config", bad_json});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("a.json:2:"), std::string::npos) << r.err;

  r = call({"interpolate", "--config", write("b.json", R"({"points": [0], "J": 0, "colour": 1})")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("field 'colour'"), std::string::npos);

  r = call({"interpolate", "--config", write("c.json", R"({"points": [0], "J": 3})")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("field 'J'"), std::string::npos);

  r = call({"interpolate", "--config", write("d.json", R"({"points": [1.5], "J": 0})")});
  EXPECT_EQ(r.code, 1);

  r = call({"check-compact", "--config", write("e.json", R"({"pairs": [{"u": "1", "phi": "z^(", "k": 0}]})")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("pairs[0].phi"), std::string::npos) << r.err;

  r = call({"check-compact", "--config", write("f.json", R"({"pairs": [{"u": "1", "phi": "1.5z", "k": 0}]})")});
  EXPECT_EQ(r.code, 1);

  EXPECT_EQ(call({"interpolate"}).code, 1);
  EXPECT_EQ(call({}).code, 1);
  EXPECT_EQ(call({"interpolate", "--config", (dir_ / "missing.json").string()}).code, 1);
  EXPECT_EQ(call({"interpolate", "--config", bad_json, "--format", "xml"}).code, 1);
}

TEST_F(Cli, OrderBoundedVerdicts) {
  auto r = call({"check-order-bounded", "--config",
                 write("a.json", R"({"source": {"p": 2, "alpha": 0}, "target": {"p": 2, "alpha": 0},
                                     "pairs": [{"u": "1", "phi": "0.5z", "k": 0}]})")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["overall"], "yes");

  r = call({"check-order-bounded", "--config",
            write("b.json", R"({"target": {"p": 2, "alpha": 0}, "pairs": [{"u": "1", "phi": "z", "k": 0}]})")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["overall"], "no");
  EXPECT_NEAR(j["pairs"][0]["growth_exponent"].get<double>(), 1, 0.05);
}

TEST_F(Cli, InconclusiveExitsThree) {
  // Increment ratios settle at 2^-0.0025 (q = 0.98): neither geometric decay nor growth.
  const auto cfg = write("a.json", R"({"target": {"p": 0.98, "alpha": 0}, "pairs": [{"u": "1", "phi": "z", "k": 0}]})");
  const auto r = call({"check-order-bounded", "--config", cfg});
  EXPECT_EQ(r.code, 3) << r.out << r.err;
  EXPECT_EQ(json::parse(r.out)["overall"], "inconclusive");
}

TEST_F(Cli, CompactVerdicts) {
  auto r = call({"check-compact", "--config", write("a.json", R"({"pairs": [{"u": "1", "phi": "0.5z", "k": 0}]})")});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["overall"], "yes");
  EXPECT_EQ(j["pairs"][0]["limit_zero"], "vacuous-true");
  EXPECT_EQ(j["sequence_check"]["consistent"], true);

  r = call({"check-compact", "--config", write("b.json", R"({"pairs": [{"u": "1", "phi": "z", "k": 0}]})")});
  ASSERT_EQ(r.code, 0) << r.err;
  j = json::parse(r.out);
  EXPECT_EQ(j["overall"], "no");
  EXPECT_GT(j["pairs"][0]["ratio_profile"].size(), 10u);
  EXPECT_EQ(j["sequence_check"]["consistent"], true);
}

TEST_F(Cli, SweepDecreasesAndIsDeterministic) {
  const auto cfg = write("s.json", R"({"J": 0, "N": 1, "t": [0.9, 0.99, 0.999], "estimate_norm": false})");
  const auto a = call({"sweep", "--config", cfg, "--seed", "7"});
  const auto b = call({"sweep", "--config", cfg, "--seed", "7"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  std::istringstream in(a.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,norm_estimate_log10,max_abs_f_half_disk_log10,case");
  double prev = 1e300;
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    ASSERT_EQ(cells.size(), 4u) << line;
    const double m = std::stod(cells[2]);
    EXPECT_LT(m, prev) << line;
    prev = m;
    ++rows;
  }
  EXPECT_EQ(rows, 3);
  EXPECT_NE(call({"sweep", "--config", cfg, "--seed", "8"}).out, a.out);
}

TEST_F(Cli, InterpolateIsByteIdentical) {
  const auto cfg = write("c.json", R"({"points": [0.95, [-0.2, 0.5]], "J": 1})");
  const auto a = call({"interpolate", "--config", cfg});
  const auto b = call({"interpolate", "--config", cfg});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, KernelNorms) {
  const auto cfg = write("k.json", R"({"params": {"p": 2, "alpha": 0}, "m": [0], "lambdas": [0, 0.5, [0, 0.9]]})");
  const auto r = call({"kernel-norms", "--config", cfg});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& row : json::parse(r.out)["rows"]) EXPECT_NEAR(row["norm"]["value"].get<double>(), 1, 1e-6);
}

TEST_F(Cli, VerifyPassesAndReproduces) {
  const auto cfg = write("v.json", R"({"trials": 200})");
  const auto a = call({"verify", "--config", cfg, "--seed", "99"});
  const auto b = call({"verify", "--config", cfg, "--seed", "99"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const json j = json::parse(a.out);
  EXPECT_EQ(j["all_pass"], true);
  EXPECT_EQ(j["seed"], 99);
  EXPECT_EQ(call({"verify"}).code, 0);
}

TEST_F(Cli, VerifyInjectedViolationIsPrecondition) {
  const auto cfg = write("v.json", R"({"trials": 100, "inject": ["determinant-floor"]})");
  const auto r = call({"verify", "--config", cfg});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["all_pass"], true);
  bool seen = false;
  for (const auto& p : j["properties"])
    if (p["precondition_errors"].get<int>() > 0) {
      seen = true;
      EXPECT_EQ(p["failures"], 0);
      EXPECT_TRUE(p.contains("precondition_error"));
    }
  EXPECT_TRUE(seen);
}

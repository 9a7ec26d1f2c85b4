#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "apermute/counting.hpp"
#include "apermute/cli.hpp"
#include "json.hpp"

namespace apermute::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args, bool cache = false) {
  if (!cache) args.push_back("--no-cache");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("apermute-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string str() const { return path_.string(); }

 private:
  fs::path path_;
};

TEST(Count, Examples) {
  EXPECT_EQ(invoke({"count", "--set", "1,2", "--n", "4"}).out, "10\n");
  EXPECT_EQ(invoke({"count", "--set", "all", "--n", "5"}).out, "120\n");
  auto empty = invoke({"count", "--set", "2", "--n", "5"});
  EXPECT_EQ(empty.code, kEmptyClass);
  EXPECT_EQ(empty.out, "");
  EXPECT_NE(empty.err.find("empty class"), std::string::npos);
}

TEST(Count, FullTable) {
  EXPECT_EQ(invoke({"count", "--set", "1,2", "--n", "5", "--table"}).out,
            "0 1\n1 1\n2 2\n3 4\n4 10\n5 26\n");
  // The table is printed even when the last entry is zero.
  EXPECT_EQ(invoke({"count", "--set", "2", "--n", "3", "--table"}).code, kOk);
}

TEST(Count, BadInput) {
  EXPECT_EQ(invoke({"count", "--set", "foo", "--n", "5"}).code, kBadInput);
  EXPECT_EQ(invoke({"count", "--set", "0,1", "--n", "5"}).code, kBadInput);
  EXPECT_EQ(invoke({"count", "--n", "5"}).code, kBadInput);
  EXPECT_EQ(invoke({"count", "--set", "all"}).code, kBadInput);
  EXPECT_EQ(invoke({"frobnicate"}).code, kBadInput);
  EXPECT_EQ(invoke({}).code, kBadInput);
}

TEST(Count, UsesCacheDirectory) {
  TempDir dir;
  auto first = invoke({"count", "--set", "2,3", "--n", "30", "--cache-dir", dir.str()}, true);
  ASSERT_EQ(first.code, kOk) << first.err;
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir.str())) {
    files += entry.path().extension() == ".apcount";
  }
  EXPECT_EQ(files, 1u);
  auto second = invoke({"count", "--set", "2,3", "--n", "30", "--cache-dir", dir.str()}, true);
  EXPECT_EQ(second.out, first.out);
  EXPECT_EQ(first.out, invoke({"count", "--set", "2,3", "--n", "30"}).out);
}

TEST(Dist, Examples) {
  auto both = invoke({"dist", "--set", "all", "--n", "4", "--lengths", "1", "--method", "both"});
  ASSERT_EQ(both.code, kOk) << both.err;
  auto doc = nlohmann::json::parse(both.out);
  EXPECT_EQ(doc["lengths"], nlohmann::json::array({1}));
  EXPECT_EQ(doc["mass"][0]["r"], nlohmann::json::array({0}));
  EXPECT_EQ(doc["mass"][0]["num"], "3");
  EXPECT_EQ(doc["mass"][0]["den"], "8");

  auto forced = nlohmann::json::parse(
      invoke({"dist", "--set", "2", "--n", "4", "--lengths", "2"}).out);
  ASSERT_EQ(forced["mass"].size(), 1u);
  EXPECT_EQ(forced["mass"][0]["r"], nlohmann::json::array({2}));
  EXPECT_EQ(forced["mass"][0]["num"], "1");
  EXPECT_EQ(forced["mass"][0]["den"], "1");

  EXPECT_EQ(invoke({"dist", "--set", "1,2", "--n", "6", "--lengths", "1,2", "--method", "both"}).code,
            kOk);
}

TEST(Dist, MethodsAgree) {
  for (const char* method : {"direct", "ie"}) {
    EXPECT_EQ(invoke({"dist", "--set", "2,3", "--n", "11", "--lengths", "2,3", "--method", method}).out,
              invoke({"dist", "--set", "2,3", "--n", "11", "--lengths", "2,3"}).out);
  }
}

TEST(Dist, Csv) {
  EXPECT_EQ(invoke({"dist", "--set", "all", "--n", "3", "--lengths", "1", "--format", "csv"}).out,
            "N_1,num,den,approx\n0,1,3,0.333333333333\n1,1,2,0.5\n3,1,6,0.166666666667\n");
}

TEST(Dist, Errors) {
  EXPECT_EQ(invoke({"dist", "--set", "2", "--n", "5", "--lengths", "2"}).code, kEmptyClass);
  EXPECT_EQ(invoke({"dist", "--set", "all", "--n", "4", "--lengths", "1", "--method", "x"}).code,
            kBadInput);
  EXPECT_EQ(invoke({"dist", "--set", "all", "--n", "4", "--lengths", "0"}).code, kBadInput);
  EXPECT_EQ(invoke({"dist", "--set", "all", "--n", "4"}).code, kBadInput);
}

TEST(Sample, ReproduciblePermutations) {
  std::vector<std::string> args{"sample", "--set", "1,2", "--n", "10", "--samples", "3", "--seed", "7"};
  auto a = invoke(args);
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, invoke(args).out);
  std::istringstream lines(a.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    std::istringstream words(line);
    std::vector<std::uint64_t> images;
    for (std::uint64_t v; words >> v;) images.push_back(v);
    EXPECT_EQ(images.size(), 10u);
    ++count;
  }
  EXPECT_EQ(count, 3);
  args[8] = "8";
  EXPECT_NE(a.out, invoke(args).out);
}

TEST(Sample, Aggregate) {
  auto run = invoke({"sample", "--set", "all", "--n", "4", "--samples", "200000", "--seed", "1",
                     "--aggregate", "1"});
  ASSERT_EQ(run.code, kOk) << run.err;
  auto doc = nlohmann::json::parse(run.out);
  EXPECT_EQ(doc["frequency"][0]["r"], nlohmann::json::array({0}));
  EXPECT_NEAR(doc["frequency"][0]["freq"].get<double>(), 0.375, 0.007);
}

TEST(Sample, Errors) {
  EXPECT_EQ(invoke({"sample", "--set", "2", "--n", "5", "--samples", "1"}).code, kEmptyClass);
  EXPECT_EQ(invoke({"sample", "--set", "all", "--n", "5", "--samples", "0"}).code, kBadInput);
}

TEST(Moments, MethodsAndFormat) {
  auto run = invoke({"moments", "--set", "1,2", "--n", "4", "--length", "2", "--order", "3",
                     "--method", "both"});
  ASSERT_EQ(run.code, kOk) << run.err;
  auto doc = nlohmann::json::parse(run.out);
  EXPECT_EQ(doc["moments"][0]["num"], "6");
  EXPECT_EQ(doc["moments"][0]["den"], "5");
  EXPECT_EQ(doc["moments"][2]["num"], "3");
  EXPECT_EQ(invoke({"moments", "--set", "1,2", "--n", "4", "--length", "2", "--format", "csv"}).out,
            "m,num,den,approx\n1,6,5,1.2\n");
  EXPECT_EQ(invoke({"moments", "--set", "1,2", "--n", "4", "--length", "2", "--method", "x"}).code,
            kBadInput);
}

TEST(Verify, PoissonDecreases) {
  auto run = invoke({"verify", "poisson", "--set", "all", "--lengths", "1,2", "--n-list", "10,20,40"});
  ASSERT_EQ(run.code, kOk) << run.err;
  std::istringstream lines(run.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line[0], '#');
  std::getline(lines, line);
  EXPECT_EQ(line, "n,tv,target,rel_error");
  std::vector<double> tv;
  while (std::getline(lines, line)) {
    const auto first = line.find(','), second = line.find(',', first + 1);
    tv.push_back(std::stod(line.substr(first + 1, second - first - 1)));
  }
  ASSERT_EQ(tv.size(), 3u);
  EXPECT_GT(tv[0], tv[1]);
  EXPECT_GT(tv[1], tv[2]);
}

TEST(Verify, ScalingAndEgfRatioJson) {
  auto scaling = invoke({"verify", "scaling", "--set", "1,2", "--length", "2", "--n-list",
                         "100,400,1600", "--format", "json"});
  ASSERT_EQ(scaling.code, kOk) << scaling.err;
  auto doc = nlohmann::json::parse(scaling.out);
  EXPECT_EQ(doc["rows"].size(), 6u);
  EXPECT_EQ(doc["verdict"]["holds"], true);

  auto egf = invoke({"verify", "egf-ratio", "--set", "1,2", "--n", "2000", "--format", "json"});
  ASSERT_EQ(egf.code, kOk) << egf.err;
  doc = nlohmann::json::parse(egf.out);
  EXPECT_NEAR(doc["rows"].back()["values"][0].get<double>(), 1.0, 0.05);
}

TEST(Verify, InfiniteRuleKeepsOddDegrees) {
  auto run = invoke({"verify", "poisson", "--set", "min:4", "--lengths", "4", "--n-list", "9,13"});
  ASSERT_EQ(run.code, kOk) << run.err;
  EXPECT_EQ(run.err, "");
  EXPECT_NE(run.out.find("\n9,"), std::string::npos);
  EXPECT_NE(run.out.find("\n13,"), std::string::npos);
}

TEST(Verify, Errors) {
  EXPECT_EQ(invoke({"verify", "bogus", "--set", "all", "--n", "10"}).code, kBadInput);
  EXPECT_EQ(invoke({"verify", "scaling", "--set", "all", "--length", "1", "--n", "10"}).code,
            kBadInput);
  EXPECT_EQ(invoke({"verify", "poisson", "--set", "all", "--n-list", "10"}).code, kBadInput);
}

TEST(Determinism, ByteIdenticalOutputs) {
  const std::vector<std::vector<std::string>> commands = {
      {"count", "--set", "not:1", "--n", "40", "--table"},
      {"dist", "--set", "1,3", "--n", "12", "--lengths", "1,3", "--method", "both"},
      {"sample", "--set", "all", "--n", "30", "--samples", "50", "--seed", "99"},
      {"verify", "ratio", "--set", "mult:2", "--n-list", "10,20,40"},
  };
  for (const auto& args : commands) {
    auto a = invoke(args), b = invoke(args);
    EXPECT_EQ(a.code, kOk) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
}

}  // namespace
}  // namespace apermute::cli

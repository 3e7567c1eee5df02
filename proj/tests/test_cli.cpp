#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "trisecant/cli.hpp"

using namespace trisecant;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  std::ostringstream out, err;
  std::istringstream in(input);
  const int code = run_cli(std::move(args), out, err, in);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST(Cli, NoArgumentsPrintsUsage) {
  const auto r = run({});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("usage"), std::string::npos);
}

TEST(Cli, UnknownSubcommandIsInputError) {
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"degree", "--bogus"}).code, 2);
}

TEST(Cli, Degree) {
  const auto r = run({"degree", "--spec", R"({"m":[1,3],"d":[1,1]})"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "4\n");
  EXPECT_EQ(run({"degree", "--spec", R"({"m":[2,2],"d":[1,1]})"}).out, "6\n");
  EXPECT_EQ(run({"degree", "--spec", R"({"m":[1],"d":[0]})"}).code, 2);
  EXPECT_EQ(run({"degree", "--spec", "not json"}).code, 2);
}

TEST(Cli, ConstructThenVerify) {
  const auto c = run({"construct", "--kind", "max_real", "--spec", R"({"m":[1,2],"d":[1,1]})", "--seed", "7"});
  ASSERT_EQ(c.code, 0) << c.err;
  const Json j = Json::parse(c.out);
  EXPECT_EQ(j["version"], TRISECANT_VERSION);
  EXPECT_EQ(j["config"]["seed"], 7);
  const auto v = run({"verify"}, c.out);
  EXPECT_EQ(v.code, 0) << v.err;
  EXPECT_EQ(v.out, "real=3 total=3\n");
}

TEST(Cli, VerifyFailsOnAFalseClaim) {
  const auto c = run({"construct", "--kind", "max_real", "--spec", R"({"m":[1,1],"d":[1,1]})"});
  Json j = Json::parse(c.out);
  j["construction"]["expected_real"] = 0;
  const auto v = run({"verify"}, j.dump());
  EXPECT_EQ(v.code, 1);
  EXPECT_EQ(v.out, "real=2 total=2\n");
}

TEST(Cli, VerifyRejectsGarbage) {
  EXPECT_EQ(run({"verify"}, "{").code, 2);
  EXPECT_EQ(run({"verify"}, "{}").code, 2);
}

TEST(Cli, ConstructionKinds) {
  EXPECT_EQ(run({"construct", "--kind", "min_even", "--spec", R"({"m":[2],"d":[2]})"}).code, 0);
  EXPECT_EQ(run({"construct", "--kind", "min_odd", "--spec", R"({"m":[1,3],"d":[1,1]})"}).code, 0);
  EXPECT_EQ(run({"construct", "--kind", "segre1n", "--spec", R"({"m":[1,2],"d":[1,1]})"}).code, 0);
  EXPECT_EQ(run({"construct", "--kind", "segre1n", "--spec", R"({"m":[1,3],"d":[1,1]})"}).code, 2);
  EXPECT_EQ(run({"construct", "--kind", "min_even", "--spec", R"({"m":[1],"d":[1]})"}).code, 2);
  EXPECT_EQ(run({"construct", "--kind", "what", "--spec", R"({"m":[1],"d":[1]})"}).code, 2);
}

TEST(Cli, ByteIdenticalAcrossRunsAndWorkers) {
  const std::vector<std::string> base{"trichotomy", "--spec", R"({"m":[1,2],"d":[1,1]})", "--n", "2", "--trials", "6", "--seed", "3"};
  auto a = base, b = base;
  a.insert(a.end(), {"--workers", "1"});
  b.insert(b.end(), {"--workers", "3"});
  const auto ra = run(a), rb = run(b), rc = run(a);
  ASSERT_EQ(ra.code, 0) << ra.err;
  EXPECT_EQ(ra.out, rb.out);
  EXPECT_EQ(ra.out, rc.out);
}

TEST(Cli, SeedFromEnvironment) {
  const std::vector<std::string> args{"intersect", "--spec", R"({"m":[1,1],"d":[1,1]})"};
  ::setenv("TRISECANT_SEED", "99", 1);
  const auto env = run(args);
  ::unsetenv("TRISECANT_SEED");
  auto explicit_args = args;
  explicit_args.insert(explicit_args.end(), {"--seed", "99"});
  EXPECT_EQ(env.out, run(explicit_args).out);
  EXPECT_EQ(Json::parse(env.out)["config"]["seed"], 99);
}

TEST(Cli, IntersectReportsDegreeManyPoints) {
  const auto r = run({"intersect", "--spec", R"({"m":[2],"d":[2]})", "--seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["result"]["count"], 4);
  EXPECT_EQ(j["result"]["points"].size(), 4u);
  const auto s = run({"intersect", "--spec", R"({"m":[1,2],"d":[1,1]})", "--span", "2"});
  EXPECT_GE(Json::parse(s.out)["result"]["real_count"].get<int>(), 2);
}

TEST(Cli, DualscanWritesFilesWithHeaders) {
  const auto csv = temp_file("trisecant_cli_test.csv");
  const auto ppm = temp_file("trisecant_cli_test.ppm");
  auto r = run({"dualscan", "--curve", "builtin:edge", "--res", "8", "--out", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("histogram"), std::string::npos);
  std::ifstream f(csv);
  const auto g = read_grid_csv(f);
  EXPECT_EQ(g.resolution, 8u);
  std::ifstream again(csv);
  std::string first;
  std::getline(again, first);
  EXPECT_NE(first.find(TRISECANT_VERSION), std::string::npos);

  r = run({"dualscan", "--curve", "builtin:fermat4", "--res", "6", "--out", ppm.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream p(ppm, std::ios::binary);
  std::string magic;
  std::getline(p, magic);
  EXPECT_EQ(magic, "P6");
  std::filesystem::remove(csv);
  std::filesystem::remove(ppm);
}

TEST(Cli, DualscanToStdoutIsCsv) {
  const auto r = run({"dualscan", "--res", "2", "--range", "-1", "1", "-1", "1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("# {", 0), 0u);
  EXPECT_NE(r.out.find("u,v,count\n"), std::string::npos);
}

TEST(Cli, WalkAndLinescan) {
  auto r = run({"walk", "--from", "0,1,1/50", "--to", "1,-1,1/30", "--steps", "32"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(Json::parse(r.out)["result"]["all_resolved_delta_two"].get<bool>());
  EXPECT_EQ(run({"walk", "--curve", "builtin:fermat4", "--from", "1,0,-1", "--to", "0,1"}).code, 2);
  r = run({"linescan", "--form", "builtin:even3", "--trials", "40"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(Json::parse(r.out)["summary"]["nmax_minimal"].get<bool>());
  EXPECT_EQ(run({"linescan", "--form", "builtin:nothing"}).code, 2);
}

TEST(Cli, CurveFromFile) {
  const auto path = temp_file("trisecant_cli_curve.json");
  {
    std::ofstream f(path);
    f << to_json(fermat_quartic().form).dump();
  }
  const auto r = run({"walk", "--curve", path.string(), "--from", "1/3,1/7", "--to", "5/2,-3/2"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::filesystem::remove(path);
  EXPECT_EQ(run({"walk", "--curve", "/nonexistent.json", "--from", "0,0", "--to", "1,1"}).code, 2);
}

TEST(Cli, TypicalRankRejectsOtherEll) {
  EXPECT_EQ(run({"typicalrank", "--spec", R"({"m":[1,2],"d":[1,1]})", "--ell", "4", "--trials", "1"}).code, 2);
}

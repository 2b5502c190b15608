#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kBin = CWFLAB_BIN;
const std::string kFixtures = CWFLAB_FIXTURES;

fs::path scratch() {
  auto d = fs::temp_directory_path() / "cwflab_cli";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Exit status of `cwf-lab args`, stdout captured in `out`.
int run(const std::string& args, std::string* out = nullptr) {
  auto o = scratch() / "stdout.txt";
  auto cmd = kBin + " " + args + " > " + o.string() + " 2> " + (scratch() / "stderr.txt").string();
  int rc = std::system(cmd.c_str());
  if (out) *out = slurp(o);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string fixture(const std::string& rel) { return kFixtures + "/" + rel; }

}  // namespace

TEST(Cli, ValidateExitCodes) {
  std::string out;
  EXPECT_EQ(run("validate " + fixture("c2.json"), &out), 0);
  EXPECT_EQ(run("validate " + fixture("mutations/broken_composition.json"), &out), 1);
  EXPECT_NE(out.find("right-identity"), std::string::npos) << out;
  EXPECT_EQ(run("validate " + fixture("mutations/unknown_reference.json")), 2);
  EXPECT_NE(slurp(scratch() / "stderr.txt").find("gamma3"), std::string::npos);
  EXPECT_EQ(run("validate /nonexistent.json"), 2);
}

TEST(Cli, LawsOnBundledPass) {
  std::string out;
  EXPECT_EQ(run("laws " + fixture("c2.json") + " --suite fincat --suite presheaf", &out), 0);
  EXPECT_NE(out.find("checks passed"), std::string::npos) << out;
  EXPECT_EQ(out.find("FAIL"), std::string::npos) << out;
}

TEST(Cli, BrokenManifestFailsRunVerbs) {
  EXPECT_EQ(run("laws " + fixture("mutations/broken_composition.json")), 2);
  EXPECT_EQ(run("report " + fixture("mutations/unknown_reference.json")), 2);
}

TEST(Cli, ReportJsonIsDeterministic) {
  auto a = scratch() / "a.json";
  auto b = scratch() / "b.json";
  auto args = " --suite fincat --suite terms --format json --seed 3 --out ";
  ASSERT_EQ(run("report " + fixture("c2.json") + args + a.string()), 0);
  ASSERT_EQ(run("report " + fixture("c2.json") + args + b.string()), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  auto j = nlohmann::json::parse(slurp(a));
  EXPECT_EQ(j["summary"]["fail"], 0);
  EXPECT_EQ(j["suites"].size(), 2u);
}

TEST(Cli, PiPrintsElementsOfA2) {
  std::string out;
  ASSERT_EQ(run("pi " + fixture("c2.json") + " --dom a2", &out), 0);
  auto j = nlohmann::json::parse(out);
  EXPECT_EQ(j["dom"], "a2");
  ASSERT_TRUE(j["elements"].is_array()) << out;
  ASSERT_FALSE(j["elements"].empty());
  for (const auto& e : j["elements"]) {
    EXPECT_TRUE(e.contains("anchor"));
    EXPECT_TRUE(e.contains("table"));
  }
  EXPECT_EQ(run("pi " + fixture("c2.json") + " --dom nope"), 2);
}

TEST(Cli, InternalizeAndModality) {
  auto base = scratch() / "d1.json";
  std::ofstream(base) << R"({"builtin": "d1"})";
  EXPECT_EQ(run("internalize " + base.string()), 0);
  auto ctx = scratch() / "ctx.json";
  std::ofstream(ctx) << R"({"base": {"builtin": "walking_arrow"}, "carrier": {"a": ["0", "1"], "b": ["x"]},
                            "action": [{"mor": "f", "arg": "x", "result": "0"}]})";
  EXPECT_EQ(run("modality " + ctx.string() + " --terminal b"), 0);
  EXPECT_EQ(run("modality " + ctx.string() + " --terminal a"), 2);
}

TEST(Cli, FixturesEmitMatchesBundledFiles) {
  std::string out;
  ASSERT_EQ(run("fixtures emit", &out), 0);
  EXPECT_EQ(nlohmann::json::parse(out), nlohmann::json::parse(slurp(fixture("c2.json"))));
  ASSERT_EQ(run("fixtures emit --set broken-composition", &out), 0);
  EXPECT_EQ(nlohmann::json::parse(out), nlohmann::json::parse(slurp(fixture("mutations/broken_composition.json"))));
  ASSERT_EQ(run("fixtures emit --manifest " + fixture("c2.json") + " --category c2 --cap 8", &out), 0);
  EXPECT_FALSE(nlohmann::json::parse(out).empty());
}

TEST(Cli, UsageErrorsAreNonZero) {
  EXPECT_NE(run(""), 0);
  EXPECT_NE(run("frobnicate"), 0);
  EXPECT_NE(run("report " + fixture("c2.json") + " --format yaml"), 0);
}

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

/// Runs the CLI with stderr discarded and returns its exit status and stdout.
Outcome cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" + std::string(FLATF_CLI) + "' " + args + " 2>/dev/null";
  Outcome o;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return o;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) o.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string data(const std::string& name) { return std::string(FLATF_TEST_DATA) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("flatf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) + "_" +
            std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, ComputeThenVerify) {
  const std::string out = path("a2.out.json");
  EXPECT_EQ(cli("compute " + data("a2.json") + " --out " + out).code, 0);
  ASSERT_TRUE(fs::exists(out));
  const json doc = json::parse(std::ifstream(out));
  EXPECT_EQ(doc.at("dimension"), 2);
  EXPECT_EQ(doc.at("a_table").at("(1,1,1)").at(0), "-1/1");

  const Outcome v = cli("verify " + out + " --checks fqm11,flatf,unit");
  EXPECT_EQ(v.code, 0);
  EXPECT_TRUE(json::parse(v.out).at("passed").get<bool>());
}

TEST_F(CliTest, ComputeToStdoutHonoursMaxLevel) {
  const Outcome o = cli("compute " + data("a2.json") + " --max-level 3");
  ASSERT_EQ(o.code, 0);
  const json doc = json::parse(o.out);
  EXPECT_EQ(doc.at("max_level"), 3);
  EXPECT_FALSE(doc.at("a_table").contains("(1,1,1,1)"));
}

TEST_F(CliTest, TamperedResultFailsVerification) {
  const std::string out = path("a2.out.json");
  ASSERT_EQ(cli("compute " + data("a2.json") + " --out " + out).code, 0);
  json doc = json::parse(std::ifstream(out));
  doc["a_table"]["(1,1,1)"][0] = "-2/1";
  std::ofstream(out) << doc.dump();
  const Outcome v = cli("verify " + out);
  EXPECT_EQ(v.code, 1);
  const json rep = json::parse(v.out);
  EXPECT_FALSE(rep.at("passed").get<bool>());
  EXPECT_FALSE(rep.at("reports").at(0).at("counterexamples").empty());
}

TEST_F(CliTest, UsageAndInputErrors) {
  const std::string out = path("a2.out.json");
  ASSERT_EQ(cli("compute " + data("a2.json") + " --out " + out).code, 0);
  EXPECT_EQ(cli("verify " + out + " --checks fqm11,bogus").code, 2);
  EXPECT_EQ(cli("compute " + path("missing.json")).code, 2);
  EXPECT_EQ(cli("axioms " + data("a2.json") + " --trials 0").code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
  EXPECT_EQ(cli("").code, 2);

  std::ofstream(path("bad.json")) << R"({"variables": ["x"], "potential": "x^3", "charges": [1, 2], "max_level": 2})";
  EXPECT_EQ(cli("compute " + path("bad.json")).code, 2);
}

TEST_F(CliTest, HashMismatchIsInputError) {
  const std::string out = path("a2.out.json");
  ASSERT_EQ(cli("compute " + data("a2.json") + " --out " + out).code, 0);
  json doc = json::parse(std::ifstream(out));
  doc["problem_hash"] = std::string(64, '0');
  std::ofstream(out) << doc.dump();
  EXPECT_EQ(cli("verify " + out).code, 2);
}

TEST_F(CliTest, AxiomsAreReproducible) {
  const Outcome a = cli("axioms " + data("dwork.json") + " --trials 20 --seed 7");
  const Outcome b = cli("axioms " + data("dwork.json") + " --trials 20 --seed 7");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(json::parse(a.out).at("passed").get<bool>());
}

TEST_F(CliTest, BasisOfDwork) {
  const Outcome o = cli("basis " + data("dwork.json"));
  ASSERT_EQ(o.code, 0);
  const json j = json::parse(o.out);
  EXPECT_EQ(j.at("basis"), json::parse(R"(["1", "y*z0*z1*z2"])"));
  EXPECT_TRUE(j.at("complete").get<bool>());
}

TEST_F(CliTest, CacheDirectoryIsPopulatedAndReused) {
  const std::string cache = path("cache");
  const std::string first = path("first.json"), second = path("second.json");
  ASSERT_EQ(cli("compute " + data("fermat.json") + " --max-level 3 --cache-dir " + cache + " --out " + first).code, 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(cache)) files += e.path().string().ends_with(".gb.json");
  EXPECT_EQ(files, 1u);
  ASSERT_EQ(cli("compute " + data("fermat.json") + " --max-level 3 --out " + second, "FLATF_CACHE_DIR=" + cache).code,
            0);
  EXPECT_EQ(json::parse(std::ifstream(first)), json::parse(std::ifstream(second)));
}

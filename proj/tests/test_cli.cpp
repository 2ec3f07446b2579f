#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Invocation {
  int code = -1;
  std::string out;
};

Invocation zlab(const std::string& args) {
  const char* bin = std::getenv("ZLAB_BIN");
  if (bin == nullptr) throw std::runtime_error("ZLAB_BIN is not set");
  const std::string cmd = std::string("\"") + bin + "\" " + args + " 2>/dev/null";
  Invocation r;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "zlab_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

json read_json(const fs::path& p) {
  std::ifstream f(p);
  return json::parse(f);
}

}  // namespace

TEST(Cli, FreeDistWorkedExample) {
  const Invocation r = zlab("free dist --model int-line --a 'word=1|side=X|local=0.5' --b 'word=g:1|side=Y|local=0.2'");
  ASSERT_EQ(r.code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["command"], "free dist");
  EXPECT_TRUE(j["meta"].contains("timestamp"));
}

TEST(Cli, CounterexampleWritesReport) {
  const fs::path out = scratch("ce.json");
  fs::remove(out);
  const Invocation r = zlab("product counterexample --range 100 --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.out;
  const json j = read_json(out);
  EXPECT_TRUE(j["result"]["pass"].get<bool>());
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(zlab("free dist --bogus 1").code, 2);
  EXPECT_EQ(zlab("").code, 2);
  EXPECT_EQ(zlab("free dist --a 'word=g:0|side=X|local=0.5' --b 'word=1|side=X|local=0.5'").code, 2);
  EXPECT_EQ(zlab("free net --eps 0.5 --depth 99").code, 2);
}

TEST(Cli, ConfigMergesAndFlagsWin) {
  const fs::path cfg = scratch("cfg.json");
  std::ofstream(cfg) << R"({"eps": 0.5, "samples": 200, "seed": 3})";
  const Invocation fromcfg = zlab("free net --config " + cfg.string());
  ASSERT_EQ(fromcfg.code, 0) << fromcfg.out;
  const json a = json::parse(fromcfg.out);
  EXPECT_EQ(a["result"]["seed"], 3);
  const Invocation flag = zlab("free net --config " + cfg.string() + " --eps 0.25");
  ASSERT_EQ(flag.code, 0) << flag.out;
  const json b = json::parse(flag.out);
  EXPECT_EQ(b["result"]["config"]["eps"], "0.25");
  EXPECT_EQ(b["result"]["config"]["samples"], "200");
  std::ofstream(cfg) << R"({"nonsense": 1})";
  EXPECT_EQ(zlab("free net --config " + cfg.string()).code, 2);
}

TEST(Cli, ReportsAreDeterministicAcrossJobs) {
  const Invocation a = zlab("verify metric --triples 2000 --seed 9 --jobs 1");
  const Invocation b = zlab("verify metric --triples 2000 --seed 9 --jobs 0");
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  json ja = json::parse(a.out), jb = json::parse(b.out);
  ja.erase("meta");
  jb.erase("meta");
  ja["result"]["config"].erase("jobs");
  jb["result"]["config"].erase("jobs");
  EXPECT_EQ(ja.dump(), jb.dump());
}

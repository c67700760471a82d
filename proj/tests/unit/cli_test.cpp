#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace fs = std::filesystem;
using cbsfs::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "cbsfs");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream s(text);
  for (std::string l; std::getline(s, l);) v.push_back(l);
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({}).code, cbsfs::cli::exit_usage);
  EXPECT_EQ(invoke({"--bogus", "sfs"}).code, cbsfs::cli::exit_usage);
  EXPECT_EQ(invoke({"verify", "--suite", "no-such-suite"}).code, cbsfs::cli::exit_usage);
  EXPECT_EQ(invoke({"--theta", "-1", "sfs"}).code, cbsfs::cli::exit_usage);
  EXPECT_EQ(invoke({"sfs", "--n", "4"}).code, cbsfs::cli::exit_ok);
  EXPECT_EQ(invoke({"verify", "--suite", "clonal-asymptotics"}).code, cbsfs::cli::exit_ok);
}

TEST(Cli, FailingSuiteExitsWithOne) {
  // The g2 bound does not hold (see sfs-expansion), so this suite is red.
  const auto r = invoke({"verify", "--suite", "sfs-expansion"});
  EXPECT_EQ(r.code, cbsfs::cli::exit_check_failed);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, HeaderRecordsConfiguration) {
  const auto r = invoke({"--beta", "2", "--seed", "9", "--workers", "3", "sfs", "--n", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("# beta=2\n"), std::string::npos);
  EXPECT_NE(r.out.find("# seed=9\n"), std::string::npos);
  EXPECT_EQ(r.out.find("workers"), std::string::npos);
}

TEST(Cli, G1FirstRowIsZero) {
  const auto r = invoke({"g1", "--z", "0.5,3", "--points", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  std::size_t i = 0;
  while (i < ls.size() && ls[i].starts_with("#")) ++i;
  ASSERT_LT(i + 1, ls.size());
  EXPECT_EQ(ls[i], "u,g1@z=0.5,g1@z=3");
  EXPECT_EQ(ls[i + 1], "0,0,0");
  EXPECT_EQ(ls.size(), i + 12);
}

TEST(Cli, ConfigFile) {
  const fs::path cfg = fs::temp_directory_path() / "cbsfs_cli_test.cfg";
  {
    std::ofstream f(cfg);
    f << "theta=2\nseed=17\n";
  }
  const auto a = invoke({"--config", cfg.string(), "sfs", "--n", "4"});
  const auto b = invoke({"--theta", "2", "--seed", "17", "sfs", "--n", "4"});
  fs::remove(cfg);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, SimulationIsDeterministicAcrossWorkers) {
  for (const std::vector<std::string> cmd :
       {std::vector<std::string>{"sfs", "--mode", "simulate", "--counts", "--route", "tree"},
        std::vector<std::string>{"clonal", "--mode", "simulate", "--n-max", "3"}}) {
    std::string first;
    for (const char* w : {"1", "2", "5"}) {
      std::vector<std::string> args{"--seed", "31", "--reps", "400", "--n", "6", "--workers", w};
      args.insert(args.end(), cmd.begin(), cmd.end());
      const auto r = invoke(args);
      ASSERT_EQ(r.code, 0) << r.err;
      if (first.empty()) first = r.out;
      EXPECT_EQ(r.out, first);
    }
  }
}

TEST(Cli, SampleWritesNewickAndReplayFiles) {
  const fs::path dir = fs::temp_directory_path() / "cbsfs_cli_sample";
  fs::create_directories(dir);
  const auto stem = (dir / "run").string();
  const auto r = invoke({"--n", "5", "--reps", "3", "--out", stem, "sample", "--root-mode", "population"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto nwk = lines(slurp(stem + ".nwk"));
  const auto jsonl = lines(slurp(stem + ".jsonl"));
  fs::remove_all(dir);
  std::size_t trees = 0;
  for (const auto& l : nwk) trees += !l.starts_with("#") && l.ends_with(";");
  EXPECT_EQ(trees, 3u);
  ASSERT_EQ(jsonl.size(), 4u);
  EXPECT_NE(jsonl[0].find("\"header\""), std::string::npos);
  EXPECT_NE(jsonl[1].find("\"population_mrca\""), std::string::npos);
}

TEST(Cli, JsonFormat) {
  const auto r = invoke({"--format", "json", "clonal", "--n-max", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.front(), '{');
  EXPECT_NE(r.out.find("\"schema_version\": 1"), std::string::npos);
}

// Exit codes and report shape of the kwg executable.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "json.hpp"

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run kwg(const std::string& args) {
  const std::string cmd = std::string(KWG_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

}  // namespace

TEST(Cli, ReportEnvelope) {
  const auto r = kwg("jones U");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], "kwg-report/1");
  EXPECT_EQ(j["command"], "jones");
  EXPECT_FALSE(j.contains("wall_time_s"));
  EXPECT_TRUE(kwg("--timing jones U").out.find("wall_time_s") != std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(kwg("").status, 2);
  EXPECT_EQ(kwg("cs --n notanumber").status, 2);
  EXPECT_EQ(kwg("jones \"X[1,2,3]\"").status, 2);
  EXPECT_EQ(kwg("kw --t 0.5 --involution-check").status, 2);
  EXPECT_EQ(kwg("cs --fixture /nonexistent/kwg-fixture").status, 3);
  EXPECT_EQ(kwg("plotdata --from /nonexistent/report.json").status, 3);
  EXPECT_EQ(kwg("nahm --shoot 1 --max-iterations 0").status, 2);
  EXPECT_EQ(kwg("nahm --shoot 1 --max-iterations 1 --tolerance 1e-14").status, 5);
}

TEST(Cli, NahmPoleResidualAtTOne) {
  const auto r = kwg("kw --fixture nahm-pole --t 1");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_LE(j["metrics"]["residual_norms"]["total"].get<double>(), 1e-10);
}

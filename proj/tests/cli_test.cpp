#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

// Runs the CLI from the data directory so file paths in its output stay short.
CliRun run_cli(const std::string& args) {
  std::string cmd = std::string("cd '") + ROTOR_DATA_DIR + "' && '" + ROTOR_CLI + "' " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string golden(const std::string& name) {
  std::ifstream in(std::string(ROTOR_GOLDEN_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Cli, DestinationMatchesGolden) {
  CliRun r = run_cli("--json destination fig5.rotor");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("destination_fig5.json"));
}

TEST(Cli, IntegerGameMatchesGolden) {
  CliRun r = run_cli("--json solve1 --integer fig13.rotor");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("solve1_integer_fig13.json"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("validate fig2.rotor").code, 0);
  EXPECT_EQ(run_cli("").code, 1);
  EXPECT_EQ(run_cli("simulate --cap notanumber fig2.rotor").code, 1);
  EXPECT_EQ(run_cli("validate does_not_exist.rotor").code, 2);
  EXPECT_EQ(run_cli("solve2 fig12.rotor").code, 3);
  EXPECT_EQ(run_cli("solve1 --binary fig9.rotor").code, 2);
}

TEST(Cli, SimulateReportsTheExit) {
  CliRun r = run_cli("--json simulate --start u2 fig2.rotor");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"s2\""), std::string::npos);
}

TEST(Cli, PathGraphAndBench) {
  CliRun p = run_cli("pathgraph --config RRLL");
  EXPECT_EQ(p.code, 0);
  CliRun b = run_cli("bench --n 3..5");
  EXPECT_EQ(b.code, 0);
  EXPECT_EQ(b.out.rfind("family,n,arcs,steps,sim_ms,solve_ms,match\n", 0), 0u);
  EXPECT_NE(b.out.find(",29,"), std::string::npos);  // 2^5 - 3 steps at n = 3
  EXPECT_EQ(b.out.find(",no"), std::string::npos);
}

TEST(Cli, BatchVerify) {
  CliRun r = run_cli("verify --batch 20 --n 7");
  EXPECT_EQ(r.code, 0) << r.out;
}

}  // namespace

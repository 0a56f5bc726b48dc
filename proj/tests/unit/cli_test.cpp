#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "support.hpp"
#include "text.hpp"

namespace votkit {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int status = -1;
  std::string output;  // stdout and stderr interleaved
};

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

CliResult cli(const fs::path& dir, const std::string& args) {
  const std::string cmd = "cd " + quote(dir.string()) + " && " + quote(VOTKIT_CLI) + " " + args + " 2>&1";
  CliResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.output.append(buf, n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path workspace(const std::string& body = "") {
  const auto dir = test::scratch_dir();
  write_file_atomic(dir / "workspace.ini", "seed = 11\n[runner]\nn_rep = 3\n[tracker.static]\nbuiltin = static\n"
                                           "[tracker.oracle]\nbuiltin = noisy_oracle\n" + body);
  return dir;
}

TEST(Cli, HelpOnEverySubcommand) {
  const auto dir = workspace();
  for (const char* sub : {"", "dataset", "dataset synth", "dataset attributes", "dataset cluster", "dataset gamma",
                          "evaluate", "analyze", "analyze measures", "analyze rank", "analyze difficulty",
                          "analyze burnin", "analyze rank-variance", "analyze estimators", "simulate",
                          "simulate estimators", "plot", "plot ar"}) {
    const auto r = cli(dir, std::string(sub) + " --help");
    EXPECT_EQ(r.status, 0) << sub << "\n" << r.output;
    EXPECT_NE(r.output.find("Usage"), std::string::npos) << sub;
  }
}

TEST(Cli, UsageErrorsExitTwo) {
  const auto dir = workspace();
  EXPECT_EQ(cli(dir, "").status, 2);
  EXPECT_EQ(cli(dir, "frobnicate").status, 2);
  EXPECT_EQ(cli(dir, "analyze").status, 2);
  EXPECT_EQ(cli(dir, "evaluate --workers 0").status, 2);
  EXPECT_EQ(cli(dir, "analyze rank --mode nonsense").status, 2);
}

TEST(Cli, RuntimeErrorsExitOne) {
  const auto dir = workspace();
  auto r = cli(dir, "-w missing.ini evaluate");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.output.find("missing.ini"), std::string::npos) << r.output;

  write_file_atomic(dir / "broken.ini", "seed = 1\n[runner]\nn_rep = zero\n");
  r = cli(dir, "-w broken.ini evaluate");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.output.find("broken.ini:3: key 'n_rep'"), std::string::npos) << r.output;

  r = cli(dir, "analyze measures");  // no dataset yet
  EXPECT_EQ(r.status, 1) << r.output;
}

TEST(Cli, EvaluateWritesRepetitionsIdempotently) {
  const auto dir = workspace();
  ASSERT_EQ(cli(dir, "dataset synth --count 1 --length 30").status, 0);
  auto r = cli(dir, "evaluate --tracker static --experiment baseline");
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_EQ(std::count(r.output.begin(), r.output.end(), '\n'), 1) << r.output;
  const auto seq_dir = dir / "results/static/baseline/synth001";
  std::size_t txt = 0;
  for (const auto& e : fs::directory_iterator(seq_dir)) txt += e.path().extension() == ".txt";
  EXPECT_EQ(txt, 3u);
  const auto first = read_file(seq_dir / "synth001_002.txt");
  ASSERT_EQ(cli(dir, "evaluate --tracker static").status, 0);
  EXPECT_EQ(read_file(seq_dir / "synth001_002.txt"), first);
  EXPECT_EQ(cli(dir, "evaluate --tracker nobody").status, 1);
}

TEST(Cli, SynthFromScript) {
  const auto dir = workspace();
  write_file_atomic(dir / "t.script", "name = translate\nlength = 25\ncanvas = 80x60\nstart = 10,10,12,10\nvelocity = 1,0.5\n");
  auto r = cli(dir, "dataset synth --script t.script");
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_EQ(read_file(dir / "dataset/list.txt"), "translate\n");
  EXPECT_TRUE(fs::exists(dir / "dataset/translate/frames/00000025.ppm"));
  EXPECT_EQ(cli(dir, "dataset synth --script nope.script").status, 1);
}

TEST(Cli, AnalyzeRankAndPlot) {
  const auto dir = workspace();
  ASSERT_EQ(cli(dir, "dataset synth --count 2 --length 30").status, 0);
  ASSERT_EQ(cli(dir, "evaluate -j 2").status, 0);
  auto r = cli(dir, "analyze rank --mode attribute_normalized");
  ASSERT_EQ(r.status, 0) << r.output;
  const auto csv = read_file(dir / "reports/baseline/ranks_attribute_normalized.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "tracker,scope,accuracy_rank,robustness_rank,combined");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(cli(dir, "analyze measures").status, 0);
  EXPECT_EQ(cli(dir, "analyze difficulty").status, 0);
  EXPECT_EQ(cli(dir, "analyze burnin --horizon 5").status, 0);
  EXPECT_EQ(cli(dir, "plot ar").status, 0);
  EXPECT_EQ(cli(dir, "analyze rank-variance --subset-size 2 --subsets 3").status, 0);
}

TEST(Cli, SimulateEstimatorsJson) {
  const auto dir = workspace();
  const auto r = cli(dir, "simulate estimators --kind NOR --trials 2000 --print -o -");
  ASSERT_EQ(r.status, 0) << r.output;
  const auto json = nlohmann::json::parse(r.output.substr(0, r.output.rfind("}\n") + 1));
  EXPECT_TRUE(json.contains("NOR"));
  EXPECT_FALSE(json.contains("WIR"));
  EXPECT_NEAR(json["NOR"]["closed_form"]["mean"].get<double>(), 0.4725, 1e-12);
  EXPECT_TRUE(json["NOR"]["empirical"].contains("variance"));
  EXPECT_FALSE(fs::exists(dir / "reports/simulate_estimators.json"));
  const auto again = cli(dir, "simulate estimators --kind NOR --trials 2000 --print -o -");
  EXPECT_EQ(again.output, r.output);
}

}  // namespace
}  // namespace votkit

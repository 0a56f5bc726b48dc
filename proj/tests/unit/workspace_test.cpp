#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <memory>

#include "error.hpp"
#include "support.hpp"
#include "text.hpp"
#include "workspace.hpp"

namespace votkit {
namespace {

namespace fs = std::filesystem;

std::string config_error(const std::string& text) {
  try {
    parse_workspace(text, "/ws/workspace.ini");
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "accepted:\n" << text;
  return {};
}

TEST(Workspace, DefaultsAndResolution) {
  const auto ws = parse_workspace("", "/ws/workspace.ini");
  EXPECT_EQ(ws.dataset_root, fs::path("/ws/dataset"));
  EXPECT_EQ(ws.results_root, fs::path("/ws/results"));
  EXPECT_EQ(ws.reports_root, fs::path("/ws/reports"));
  EXPECT_EQ(ws.experiments.count("baseline"), 1u);
  EXPECT_EQ(ws.S, 100.0);
  EXPECT_TRUE(ws.trackers.empty());
}

TEST(Workspace, FullGrammar) {
  const auto ws = parse_workspace(R"(# comment
dataset = data
seed = 42
S = 50

[runner]
n_rep = 3
n_burnin = 5

[ranking]
alpha = 0.1
correction = max
tests = false

[experiment.perturbed]
perturbation = 0.1   # trailing comment
n_skip = 2

[experiment.noreset]
reinit = false

[tracker.ncc]
command = python3 -m ncc --scale "1 2"
workdir = trackers
timeout = 20

[tracker.oracle]
builtin = noisy_oracle
amplitude = 0.02
)",
                                    "/ws/workspace.ini");
  EXPECT_EQ(ws.dataset_root, fs::path("/ws/data"));
  EXPECT_EQ(ws.seed, 42u);
  EXPECT_EQ(ws.S, 50.0);
  EXPECT_EQ(ws.runner.n_rep, 3);
  EXPECT_EQ(ws.experiment("baseline").n_burnin, 5);
  const auto& p = ws.experiment("perturbed");
  EXPECT_EQ(p.n_rep, 3);
  EXPECT_EQ(p.n_skip, 2);
  ASSERT_TRUE(p.perturbation.has_value());
  EXPECT_EQ(p.perturbation->position_amplitude, 0.1);
  EXPECT_FALSE(ws.experiment("noreset").reinit);
  EXPECT_EQ(ws.ranking.correction, Correction::Max);
  EXPECT_FALSE(ws.ranking.with_tests);
  EXPECT_EQ(ws.ranking.equivalence.signed_rank.alpha, 0.1);
  const auto& ncc = ws.tracker("ncc");
  EXPECT_EQ(ncc.command, (std::vector<std::string>{"python3", "-m", "ncc", "--scale", "1 2"}));
  EXPECT_EQ(ncc.workdir, fs::path("/ws/trackers"));
  EXPECT_EQ(ncc.timeout_s, 20.0);
  EXPECT_EQ(ws.tracker("oracle").builtin, "noisy_oracle");
  EXPECT_THROW(ws.tracker("missing"), Error);
  EXPECT_THROW(ws.experiment("missing"), Error);
}

TEST(Workspace, ErrorsNameFileLineAndKey) {
  EXPECT_NE(config_error("seed = 1\nbogus = 2\n").find("/ws/workspace.ini:2: key 'bogus'"), std::string::npos);
  EXPECT_NE(config_error("[runner]\nn_rep = 0\n").find(":2: key 'n_rep': must be >= 1"), std::string::npos);
  EXPECT_NE(config_error("[runner]\nn_skip = abc\n").find(":2: key 'n_skip'"), std::string::npos);
  EXPECT_NE(config_error("[tracker.t]\nbuiltin = magic\n").find(":2: key 'builtin'"), std::string::npos);
  EXPECT_NE(config_error("[tracker.t]\ntimeout = 5\n").find(":1: tracker 't' needs exactly one"), std::string::npos);
  EXPECT_NE(config_error("[tracker.t]\nbuiltin = static\ncommand = x\n").find(":1:"), std::string::npos);
  EXPECT_NE(config_error("\n\n[nonsense]\n").find(":3: unknown section"), std::string::npos);
  EXPECT_NE(config_error("[runner]\n[runner]\n").find(":2: section [runner] already defined on line 1"),
            std::string::npos);
  EXPECT_NE(config_error("seed = 1\nseed = 2\n").find(":2: key 'seed': duplicate key"), std::string::npos);
  EXPECT_NE(config_error("just words\n").find(":1: expected 'key = value'"), std::string::npos);
  EXPECT_NE(config_error("seed =\n").find(":1: key 'seed': missing value"), std::string::npos);
  EXPECT_NE(config_error("[tracker.bad name]\n").find(":1: invalid name"), std::string::npos);
  EXPECT_NE(config_error("[experiment.x]\nfailure_threshold = 2\n").find("experiment 'x'"), std::string::npos);
  EXPECT_NE(config_error("[ranking]\nalpha = 1.5\n").find(":2: key 'alpha': must lie in (0,1)"), std::string::npos);
  EXPECT_NE(config_error("[runner]\nreinit = maybe\n").find(":2: key 'reinit'"), std::string::npos);
}

TEST(Workspace, LoadMissingFile) {
  try {
    load_workspace("/nonexistent/workspace.ini");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
}

Workspace pipeline_workspace(const fs::path& dir) {
  write_file_atomic(dir / "workspace.ini", R"(seed = 7
[runner]
n_rep = 2
[experiment.noreset]
reinit = false
[tracker.good]
builtin = noisy_oracle
amplitude = 0.02
[tracker.bad]
builtin = drifter
vx = 1.5
)");
  return load_workspace(dir / "workspace.ini");
}

TEST(Pipeline, SynthEvaluateAnalyze) {
  const auto dir = test::scratch_dir();
  const auto ws = pipeline_workspace(dir);
  SynthOptions so;
  so.count = 3;
  so.length = 40;
  cmd_dataset_synth(ws, so);
  EXPECT_EQ(read_file(dir / "dataset" / "list.txt"), "synth001\nsynth002\nsynth003\n");

  EXPECT_NE(cmd_evaluate(ws, {}).find("12/12 runs ok"), std::string::npos);
  for (const char* t : {"good", "bad"})
    for (int rep = 1; rep <= 2; ++rep) {
      char name[32];
      std::snprintf(name, sizeof name, "synth002_%03d.txt", rep);
      EXPECT_TRUE(fs::exists(dir / "results" / t / "baseline" / "synth002" / name)) << t << " " << name;
    }

  // Rerunning is idempotent: trajectories are byte-identical.
  const auto before = read_file(dir / "results/bad/baseline/synth001/synth001_001.txt");
  cmd_evaluate(ws, {});
  EXPECT_EQ(read_file(dir / "results/bad/baseline/synth001/synth001_001.txt"), before);

  cmd_analyze_measures(ws, {});
  const auto measures = read_file(dir / "reports/baseline/measures.csv");
  EXPECT_NE(measures.find("good,pooled,"), std::string::npos);
  EXPECT_NE(measures.find("bad,pooled,"), std::string::npos);

  RankCommand rc;
  rc.mode = AggregateMode::SequencePooled;
  rc.with_tests = false;
  const auto ranks = cmd_analyze_rank(ws, rc);
  EXPECT_NE(ranks.find("good=1.00 bad=2.00"), std::string::npos) << ranks;
  EXPECT_TRUE(fs::exists(dir / "reports/baseline/ranks_sequence_pooled.csv"));

  cmd_analyze_difficulty(ws, {});
  EXPECT_EQ(read_file(dir / "reports/baseline/difficulty.csv").rfind("sequence,area,max,max_frame,level\n", 0), 0u);
  BurninCommand bc;
  bc.horizon = 10;
  cmd_analyze_burnin(ws, bc);
  EXPECT_TRUE(fs::exists(dir / "reports/baseline/burnin_bad.csv"));
  PlotCommand pc;
  cmd_plot_ar(ws, pc);

  EvaluateCommand noreset;
  noreset.experiment = "noreset";
  noreset.trackers = {"bad"};
  cmd_evaluate(ws, noreset);
  EstimatorsCommand ec;
  ec.tracker = "bad";
  ec.subset_size = 2;
  ec.samples = 20;
  EXPECT_NE(cmd_analyze_estimators(ws, ec).find("NOR mean="), std::string::npos);

  AnalyzeCommand missing;
  missing.trackers = {"good"};
  missing.experiment = "noreset";
  try {
    cmd_analyze_measures(ws, missing);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
  }
}

TEST(Pipeline, SynthFromScripts) {
  const auto dir = test::scratch_dir();
  const auto ws = pipeline_workspace(dir);
  write_file_atomic(dir / "a.script", "name = alpha\nlength = 30\ncanvas = 80x60\nstart = 10,10,12,10\n"
                                      "velocity = 1,0\ngamma = 0.07\nevent = occlude 5 9 0.8  # partial\n");
  write_file_atomic(dir / "b.script", "name = beta\nlength = 20\ncanvas = 80x60\nstart = 30,20,10,10\n");
  SynthOptions so;
  so.scripts = {dir / "a.script", dir / "b.script"};
  EXPECT_NE(cmd_dataset_synth(ws, so).find("2 scripted sequences"), std::string::npos);
  EXPECT_EQ(read_file(dir / "dataset/list.txt"), "alpha\nbeta\n");
  const auto ds = load_dataset(dir / "dataset");
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds[0].size(), 30u);
  EXPECT_EQ(ds[1].size(), 20u);
  EXPECT_NEAR(ds[0].gamma, 0.07, 1e-12);
  EXPECT_TRUE(ds[0].has(Attribute::Occlusion, 6));
  EXPECT_FALSE(ds[0].has(Attribute::Occlusion, 12));
  EXPECT_TRUE(regions_close(ds[0].groundtruth[3], Region::axis_aligned(13, 10, 12, 10), 1e-9));

  so.scripts = {dir / "a.script", dir / "a.script"};
  EXPECT_THROW(cmd_dataset_synth(ws, so), Error);
  so.scripts = {dir / "missing.script"};
  EXPECT_THROW(cmd_dataset_synth(ws, so), Error);
}

TEST(Pipeline, SimulateWritesJson) {
  const auto dir = test::scratch_dir();
  const auto ws = pipeline_workspace(dir);
  SimulateCommand sc;
  sc.trials = 200;
  std::string json;
  cmd_simulate_estimators(ws, sc, &json);
  for (const char* key : {"\"NOR\"", "\"WIR\"", "\"GLA\"", "\"PFA\"", "\"closed_form\"", "\"agrees_3se\""})
    EXPECT_NE(json.find(key), std::string::npos) << key;
  EXPECT_EQ(read_file(dir / "reports/simulate_estimators.json"), json);
  sc.kind = "XYZ";
  EXPECT_THROW(cmd_simulate_estimators(ws, sc), Error);
}

TEST(Pipeline, ClusterAndAttributes) {
  const auto dir = test::scratch_dir();
  const auto ws = pipeline_workspace(dir);
  SynthOptions so;
  so.count = 4;
  so.length = 24;
  cmd_dataset_synth(ws, so);
  cmd_dataset_attributes(ws, {});
  EXPECT_EQ(std::count_if(std::istreambuf_iterator<char>(*std::make_unique<std::ifstream>(dir / "reports/attributes.csv")),
                          std::istreambuf_iterator<char>(), [](char c) { return c == '\n'; }),
            5);
  ClusterCommand cc;
  cc.clusters = 2;
  EXPECT_NE(cmd_dataset_cluster(ws, cc).find("clusters"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "reports/clusters.csv"));
}

}  // namespace
}  // namespace votkit

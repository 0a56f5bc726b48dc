#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "votkit/votkit.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct WorkspaceCloser {
  void operator()(votkit_workspace* ws) const { votkit_workspace_close(ws); }
};
using WorkspacePtr = std::unique_ptr<votkit_workspace, WorkspaceCloser>;

int report(votkit_status status) {
  if (status == VOTKIT_OK) return kExitOk;
  std::fprintf(stderr, "votkit: %s: %s\n", votkit_status_name(status), votkit_last_error());
  return status == VOTKIT_E_USAGE ? kExitUsage : kExitRuntime;
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tracker evaluation toolkit: datasets, experiments, measures, rankings and estimator studies."};
  app.require_subcommand(1);
  app.fallthrough();

  std::string workspace_file = "workspace.ini";
  std::uint64_t seed = 0;
  app.add_option("-w,--workspace", workspace_file, "Workspace file")->envname("VOTKIT_WORKSPACE")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (defaults to the workspace seed)");
  app.set_version_flag("--version", std::string(votkit_version()));

  // The action to run once parsing succeeded; each returns a status from the library.
  std::function<votkit_status(votkit_workspace*)> action;
  auto with_seed = [&](votkit_seed& s) {
    s.present = seed_opt->count() > 0 ? 1 : 0;
    s.value = seed;
  };

  // dataset ...
  auto* dataset = app.add_subcommand("dataset", "Dataset construction tools");
  dataset->require_subcommand(1);

  votkit_synth_options synth;
  votkit_synth_options_init(&synth);
  auto* synth_cmd = dataset->add_subcommand("synth", "Render synthetic sequences into the dataset root");
  synth_cmd->add_option("--count", synth.count, "Number of sequences")->capture_default_str()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--length", synth.length, "Frames per sequence")->capture_default_str()->check(CLI::Range(2, 100000));
  synth_cmd->add_option("--gamma", synth.gamma, "Practical-difference threshold stored with each sequence")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  std::vector<std::string> synth_scripts;
  std::vector<const char*> synth_script_ptrs;
  synth_cmd->add_option("--script", synth_scripts, "Render one sequence per script file instead of random ones (repeatable)");
  synth_cmd->callback([&] {
    action = [&](votkit_workspace* ws) {
      synth_script_ptrs = c_strings(synth_scripts);
      synth.scripts = synth_script_ptrs.data();
      synth.n_scripts = synth_script_ptrs.size();
      with_seed(synth.seed);
      return votkit_dataset_synth(ws, &synth);
    };
  });

  votkit_dataset_options ds_opts;
  votkit_dataset_options_init(&ds_opts);
  std::string gamma_sequence, gamma_annotations;
  auto* attr_cmd = dataset->add_subcommand("attributes", "Compute the ten global attributes of every sequence");
  attr_cmd->callback([&] {
    action = [&](votkit_workspace* ws) {
      with_seed(ds_opts.seed);
      return votkit_dataset_attributes(ws, &ds_opts);
    };
  });
  auto* cluster_cmd = dataset->add_subcommand("cluster", "Cluster sequences by attributes with affinity propagation");
  cluster_cmd->add_option("--clusters", ds_opts.clusters, "Target number of clusters")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cluster_cmd->callback([&] {
    action = [&](votkit_workspace* ws) {
      with_seed(ds_opts.seed);
      return votkit_dataset_cluster(ws, &ds_opts);
    };
  });
  auto* gamma_cmd = dataset->add_subcommand("gamma", "Estimate practical-difference thresholds from repeated annotations");
  gamma_cmd->add_option("--sequence", gamma_sequence, "Sequence to update (default: all with annotations.txt)");
  gamma_cmd->add_option("--annotations", gamma_annotations, "Annotation file: lines of '<frame> <region>'");
  gamma_cmd->callback([&] {
    action = [&](votkit_workspace* ws) {
      ds_opts.sequence = gamma_sequence.empty() ? nullptr : gamma_sequence.c_str();
      ds_opts.annotations = gamma_annotations.empty() ? nullptr : gamma_annotations.c_str();
      return votkit_dataset_gamma(ws, &ds_opts);
    };
  });

  // evaluate
  votkit_evaluate_options eval;
  votkit_evaluate_options_init(&eval);
  std::vector<std::string> eval_trackers;
  std::string eval_experiment = "baseline";
  std::vector<const char*> eval_tracker_ptrs;
  auto* eval_cmd = app.add_subcommand("evaluate", "Run trackers over the dataset and store trajectories");
  eval_cmd->add_option("-t,--tracker", eval_trackers, "Tracker name (repeatable; default: all registered)");
  eval_cmd->add_option("-e,--experiment", eval_experiment, "Experiment name")->capture_default_str();
  eval_cmd->add_option("-j,--workers", eval.workers, "Concurrent jobs")->capture_default_str()->check(CLI::Range(1, 1024));
  eval_cmd->callback([&] {
    action = [&](votkit_workspace* ws) {
      eval_tracker_ptrs = c_strings(eval_trackers);
      eval.trackers = eval_tracker_ptrs.data();
      eval.n_trackers = eval_tracker_ptrs.size();
      eval.experiment = eval_experiment.c_str();
      with_seed(eval.seed);
      return votkit_evaluate(ws, &eval);
    };
  });

  // analyze ... and plot ar share one option set.
  votkit_analyze_options an;
  votkit_analyze_options_init(&an);
  std::string an_experiment = "baseline", an_mode;
  std::vector<std::string> an_trackers;
  std::vector<const char*> an_tracker_ptrs;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-e,--experiment", an_experiment, "Experiment name")->capture_default_str();
    cmd->add_option("-t,--tracker", an_trackers, "Tracker name (repeatable; default: all with results)");
  };
  auto add_mode = [&](CLI::App* cmd, const char* fallback) {
    cmd->add_option("--mode", an_mode, std::string("Aggregation: sequence_pooled | attribute_normalized | "
                                                   "sequence_normalized (default ") + fallback + ")")
        ->check(CLI::IsMember({"sequence_pooled", "attribute_normalized", "sequence_normalized"}));
  };
  auto analysis_action = [&](votkit_analysis what) {
    return [&, what] {
      action = [&, what](votkit_workspace* ws) {
        an.experiment = an_experiment.c_str();
        an_tracker_ptrs = c_strings(an_trackers);
        an.trackers = an_tracker_ptrs.data();
        an.n_trackers = an_tracker_ptrs.size();
        an.mode = an_mode.empty() ? nullptr : an_mode.c_str();
        with_seed(an.seed);
        return votkit_analyze(ws, what, &an);
      };
    };
  };

  auto* analyze = app.add_subcommand("analyze", "Measures, rankings and studies over stored results");
  analyze->require_subcommand(1);
  auto* measures_cmd = analyze->add_subcommand("measures", "Accuracy, robustness and reliability per scope");
  add_common(measures_cmd);
  measures_cmd->callback(analysis_action(VOTKIT_ANALYZE_MEASURES));

  auto* rank_cmd = analyze->add_subcommand("rank", "Rank trackers with equivalence-corrected ranks");
  add_common(rank_cmd);
  add_mode(rank_cmd, "attribute_normalized");
  auto* tests_flag = rank_cmd->add_flag("--tests,!--no-tests", "Apply statistical and practical equivalence tests");
  rank_cmd->callback([&, tests_flag, cb = analysis_action(VOTKIT_ANALYZE_RANK)] {
    an.tests = tests_flag->count() ? (tests_flag->as<bool>() ? 1 : 0) : -1;
    cb();
  });

  auto* diff_cmd = analyze->add_subcommand("difficulty", "Per-sequence difficulty curves and levels");
  add_common(diff_cmd);
  diff_cmd->callback(analysis_action(VOTKIT_ANALYZE_DIFFICULTY));

  auto* burnin_cmd = analyze->add_subcommand("burnin", "Mean overlap as a function of frames since initialization");
  add_common(burnin_cmd);
  burnin_cmd->add_option("--horizon", an.horizon, "Frames after each initialization")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  burnin_cmd->callback(analysis_action(VOTKIT_ANALYZE_BURNIN));

  auto* rv_cmd = analyze->add_subcommand("rank-variance", "Rank variance over random sequence subsets, with and without tests");
  add_common(rv_cmd);
  add_mode(rv_cmd, "sequence_pooled");
  rv_cmd->add_option("--subset-size", an.subset_size, "Sequences per subset")->capture_default_str()->check(CLI::PositiveNumber);
  rv_cmd->add_option("--subsets", an.subsets, "Number of subsets")->capture_default_str()->check(CLI::PositiveNumber);
  rv_cmd->callback(analysis_action(VOTKIT_ANALYZE_RANK_VARIANCE));

  votkit_estimators_options est;
  votkit_estimators_options_init(&est);
  std::string est_tracker, est_nor = "noreset", est_wir = "baseline", est_sampling = "subset";
  auto* est_cmd = analyze->add_subcommand("estimators", "Compare no-reset and reset-based overlap estimates over subsets");
  est_cmd->add_option("-t,--tracker", est_tracker, "Tracker name")->required();
  est_cmd->add_option("--nor-experiment", est_nor, "Experiment run without resets")->capture_default_str();
  est_cmd->add_option("--wir-experiment", est_wir, "Experiment run with resets")->capture_default_str();
  est_cmd->add_option("--subset-size", est.subset_size, "Sequences per draw")->capture_default_str()->check(CLI::PositiveNumber);
  est_cmd->add_option("--samples", est.samples, "Number of draws")->capture_default_str()->check(CLI::PositiveNumber);
  est_cmd->add_option("--sampling", est_sampling, "bootstrap (with replacement) | subset (without)")
      ->capture_default_str()
      ->check(CLI::IsMember({"bootstrap", "subset"}));
  est_cmd->callback([&] {
    action = [&](votkit_workspace* ws) {
      est.tracker = est_tracker.c_str();
      est.nor_experiment = est_nor.c_str();
      est.wir_experiment = est_wir.c_str();
      est.sampling = est_sampling.c_str();
      with_seed(est.seed);
      return votkit_analyze_estimators(ws, &est);
    };
  });

  // simulate estimators
  votkit_simulate_options sim;
  votkit_simulate_options_init(&sim);
  std::string sim_kind = "all", sim_output;
  bool sim_print = false;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo checks of estimator theory");
  simulate->require_subcommand(1);
  auto* sim_cmd = simulate->add_subcommand("estimators", "Closed-form and simulated estimator moments as JSON");
  sim_cmd->add_option("--kind", sim_kind, "NOR | WIR | GLA | PFA | all")
      ->capture_default_str()
      ->check(CLI::IsMember({"NOR", "WIR", "GLA", "PFA", "all"}));
  sim_cmd->add_option("--trials", sim.trials, "Monte Carlo trials")->capture_default_str()->check(CLI::Range(2, 100000000));
  sim_cmd->add_option("--mu", sim.reinit.mu, "Mean per-frame overlap before failure")->capture_default_str();
  sim_cmd->add_option("--sigma", sim.reinit.sigma, "Per-frame overlap standard deviation")->capture_default_str();
  sim_cmd->add_option("--sequences", sim.reinit.N, "Sequences per dataset")->capture_default_str();
  sim_cmd->add_option("--length", sim.reinit.Ns, "Frames per sequence")->capture_default_str();
  sim_cmd->add_option("--p-fail", sim.reinit.p, "Failure probability at the critical point")->capture_default_str();
  sim_cmd->add_option("--delta", sim.reinit.delta, "Frames lost after a reset")->capture_default_str();
  sim_cmd->add_option("--mu-a", sim.annotation.mu_a, "Mean overlap on attribute frames")->capture_default_str();
  sim_cmd->add_option("--mu-b", sim.annotation.mu_b, "Mean overlap on other frames")->capture_default_str();
  sim_cmd->add_option("--sigma-a", sim.annotation.sigma, "Overlap standard deviation")->capture_default_str();
  sim_cmd->add_option("--annotation-sequences", sim.annotation.N, "Sequences")->capture_default_str();
  sim_cmd->add_option("--na", sim.annotation.NA, "Attribute frames per sequence")->capture_default_str();
  sim_cmd->add_option("--eta", sim.annotation.eta, "Other-attribute frames as a multiple of NA")->capture_default_str();
  sim_cmd->add_option("--beta", sim.annotation.beta, "Mislabelled frames as a fraction of NA")->capture_default_str();
  sim_cmd->add_option("-o,--output", sim_output, "Output JSON file ('-' for none; default reports/simulate_estimators.json)");
  sim_cmd->add_flag("--print", sim_print, "Also print the JSON document to stdout");
  sim_cmd->callback([&] {
    action = [&](votkit_workspace* ws) {
      sim.kind = sim_kind.c_str();
      sim.output = sim_output.empty() ? nullptr : sim_output.c_str();
      with_seed(sim.seed);
      const auto st = votkit_simulate_estimators(ws, &sim);
      if (st == VOTKIT_OK && sim_print) std::fputs(votkit_workspace_document(ws), stdout);
      return st;
    };
  });

  // plot ar
  auto* plot = app.add_subcommand("plot", "Figures");
  plot->require_subcommand(1);
  auto* ar_cmd = plot->add_subcommand("ar", "Accuracy-robustness plot (SVG) in rank or raw space");
  add_common(ar_cmd);
  add_mode(ar_cmd, "attribute_normalized");
  bool raw = false;
  ar_cmd->add_flag("--raw", raw, "Raw accuracy vs reliability instead of ranks");
  ar_cmd->callback([&, cb = analysis_action(VOTKIT_PLOT_AR)] {
    an.raw = raw ? 1 : 0;
    cb();
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (!action) {
    std::fprintf(stderr, "votkit: usage: no command selected\n");
    return kExitUsage;
  }

  votkit_workspace* raw_ws = nullptr;
  if (const auto st = votkit_workspace_open(workspace_file.c_str(), &raw_ws); st != VOTKIT_OK) return report(st);
  WorkspacePtr ws(raw_ws);
  const auto st = action(ws.get());
  if (st != VOTKIT_OK) return report(st);
  std::printf("%s\n", votkit_workspace_summary(ws.get()));
  return kExitOk;
}

#include "workspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>

#include <json.hpp>

#include "attributes.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "process.hpp"
#include "seeding.hpp"
#include "text.hpp"

namespace votkit {

namespace fs = std::filesystem;

namespace {

struct Setting {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

class ConfigContext {
 public:
  explicit ConfigContext(const fs::path& file) : file_(file.string()) {}

  [[noreturn]] void fail(const Setting& s, const std::string& what) const {
    raise(ErrorKind::Config, file_ + ":" + std::to_string(s.line) + ": key '" + s.key + "': " + what);
  }
  [[noreturn]] void fail_line(std::size_t line, const std::string& what) const {
    raise(ErrorKind::Config, file_ + ":" + std::to_string(line) + ": " + what);
  }

  double number(const Setting& s) const {
    try {
      return parse_double(s.value, "value");
    } catch (const Error& e) {
      fail(s, e.what());
    }
  }
  std::int64_t integer(const Setting& s, std::int64_t min_value) const {
    std::int64_t v;
    try {
      v = parse_int(s.value, "value");
    } catch (const Error& e) {
      fail(s, e.what());
    }
    if (v < min_value) fail(s, "must be >= " + std::to_string(min_value));
    return v;
  }
  std::uint64_t seed(const Setting& s) const {
    const auto v = integer(s, 0);
    return static_cast<std::uint64_t>(v);
  }
  bool boolean(const Setting& s) const {
    if (s.value == "true" || s.value == "yes" || s.value == "1") return true;
    if (s.value == "false" || s.value == "no" || s.value == "0") return false;
    fail(s, "expected true or false, got '" + s.value + "'");
  }
  const std::string& file() const { return file_; }

 private:
  std::string file_;
};

void apply_runner_setting(RunnerConfig& cfg, const Setting& s, const ConfigContext& ctx) {
  auto perturbation = [&]() -> PerturbationSpec& {
    if (!cfg.perturbation) cfg.perturbation = PerturbationSpec{0.0, 0.0, 0.0, 0};
    return *cfg.perturbation;
  };
  if (s.key == "n_skip") cfg.n_skip = static_cast<int>(ctx.integer(s, 0));
  else if (s.key == "n_burnin") cfg.n_burnin = static_cast<int>(ctx.integer(s, 0));
  else if (s.key == "n_rep") cfg.n_rep = static_cast<int>(ctx.integer(s, 1));
  else if (s.key == "workers") cfg.workers = static_cast<int>(ctx.integer(s, 1));
  else if (s.key == "failure_threshold") cfg.failure_threshold = ctx.number(s);
  else if (s.key == "reinit") cfg.reinit = ctx.boolean(s);
  else if (s.key == "perturbation") {
    if (s.value == "none") {
      cfg.perturbation.reset();
      return;
    }
    const double a = ctx.number(s);
    if (a < 0) ctx.fail(s, "must be >= 0");
    perturbation().position_amplitude = a;
    perturbation().size_amplitude = a;
  } else if (s.key == "perturbation_position" || s.key == "perturbation_size" || s.key == "perturbation_rotation") {
    const double a = ctx.number(s);
    if (a < 0) ctx.fail(s, "must be >= 0");
    auto& p = perturbation();
    (s.key == "perturbation_position" ? p.position_amplitude
     : s.key == "perturbation_size"   ? p.size_amplitude
                                      : p.rotation_amplitude) = a;
  } else {
    ctx.fail(s, "unknown runner key");
  }
}

void apply_ranking_setting(RankOptions& r, const Setting& s, const ConfigContext& ctx) {
  if (s.key == "alpha") {
    const double a = ctx.number(s);
    if (!(a > 0 && a < 1)) ctx.fail(s, "must lie in (0,1)");
    r.equivalence.signed_rank.alpha = a;
    r.equivalence.rank_sum.alpha = a;
  } else if (s.key == "tests") {
    r.with_tests = ctx.boolean(s);
  } else if (s.key == "practical") {
    r.equivalence.practical = ctx.boolean(s);
  } else if (s.key == "correction") {
    if (s.value == "mean") r.correction = Correction::Mean;
    else if (s.value == "min") r.correction = Correction::Min;
    else if (s.value == "max") r.correction = Correction::Max;
    else ctx.fail(s, "expected mean, min or max");
  } else if (s.key == "zeros") {
    if (s.value == "wilcoxon") r.equivalence.signed_rank.zeros = ZeroHandling::Wilcoxon;
    else if (s.value == "pratt") r.equivalence.signed_rank.zeros = ZeroHandling::Pratt;
    else ctx.fail(s, "expected wilcoxon or pratt");
  } else if (s.key == "exact_cutoff_signed_rank") {
    r.equivalence.signed_rank.exact_cutoff = static_cast<std::size_t>(ctx.integer(s, 0));
  } else if (s.key == "exact_cutoff_rank_sum") {
    r.equivalence.rank_sum.exact_cutoff = static_cast<std::size_t>(ctx.integer(s, 0));
  } else {
    ctx.fail(s, "unknown ranking key");
  }
}

void apply_tracker_setting(TrackerSpec& t, const Setting& s, const ConfigContext& ctx, const fs::path& base) {
  if (s.key == "builtin") {
    if (s.value != "static" && s.value != "noisy_oracle" && s.value != "drifter")
      ctx.fail(s, "unknown built-in tracker '" + s.value + "'");
    t.builtin = s.value;
  } else if (s.key == "command") {
    try {
      t.command = split_command(s.value);
    } catch (const Error& e) {
      ctx.fail(s, e.what());
    }
    if (t.command.empty()) ctx.fail(s, "empty command");
  } else if (s.key == "workdir") {
    t.workdir = base / s.value;
  } else if (s.key == "timeout") {
    t.timeout_s = ctx.number(s);
    if (!(t.timeout_s > 0)) ctx.fail(s, "must be > 0");
  } else if (s.key == "amplitude") {
    t.amplitude = ctx.number(s);
    if (t.amplitude < 0) ctx.fail(s, "must be >= 0");
  } else if (s.key == "rotation") {
    t.rotation = ctx.number(s);
    if (t.rotation < 0) ctx.fail(s, "must be >= 0");
  } else if (s.key == "vx") {
    t.vx = ctx.number(s);
  } else if (s.key == "vy") {
    t.vy = ctx.number(s);
  } else {
    ctx.fail(s, "unknown tracker key");
  }
}

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  }) && name != "." && name != "..";
}

fs::path ensure_dir(const fs::path& dir) {
  fs::create_directories(dir);
  return dir;
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::vector<SequenceRecord> dataset_of(const Workspace& ws) {
  auto ds = load_dataset(ws.dataset_root);
  if (ds.empty()) raise(ErrorKind::InsufficientData, ws.dataset_root.string() + ": dataset has no sequences");
  return ds;
}

std::uint64_t seed_or(const std::optional<std::uint64_t>& s, const Workspace& ws) { return s.value_or(ws.seed); }

fs::path report_dir(const Workspace& ws, const std::string& experiment) {
  return ensure_dir(ws.reports_root / experiment);
}

std::vector<AttributeVector> attribute_vectors(const std::vector<SequenceRecord>& ds, std::uint64_t seed,
                                               std::vector<std::string>& names) {
  std::vector<AttributeVector> out;
  for (const auto& seq : ds) {
    AttributeOptions opt;
    opt.seed = job_seed(seed, "attributes", seq.name, 0);
    out.push_back(compute_attributes(seq, opt));
    names.push_back(seq.name);
  }
  return out;
}

std::string tracker_list(const std::vector<TrackerRuns>& runs) {
  std::string s;
  for (const auto& r : runs) s += (s.empty() ? "" : ",") + r.tracker;
  return s;
}

}  // namespace

const TrackerSpec& Workspace::tracker(const std::string& name) const {
  for (const auto& t : trackers)
    if (t.name == name) return t;
  raise(ErrorKind::Config, file.string() + ": no tracker named '" + name + "'");
}

const RunnerConfig& Workspace::experiment(const std::string& name) const {
  const auto it = experiments.find(name);
  if (it == experiments.end()) raise(ErrorKind::Config, file.string() + ": no experiment named '" + name + "'");
  return it->second;
}

Workspace parse_workspace(const std::string& text, const fs::path& file) {
  const ConfigContext ctx(file);
  const fs::path base = file.has_parent_path() ? file.parent_path() : fs::path(".");
  Workspace ws;
  ws.file = file;
  ws.dataset_root = base / "dataset";
  ws.results_root = base / "results";
  ws.reports_root = base / "reports";

  enum class Section { Top, Runner, Ranking, Experiment, Tracker };
  Section section = Section::Top;
  std::string section_name;
  std::vector<std::pair<std::string, std::vector<Setting>>> experiment_settings;
  std::map<std::string, std::size_t> section_lines;
  std::set<std::string> seen_keys;

  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string raw = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') ctx.fail_line(lineno, "malformed section header '" + line + "'");
      const std::string header = trim(line.substr(1, line.size() - 2));
      if (section_lines.count(header))
        ctx.fail_line(lineno, "section [" + header + "] already defined on line " + std::to_string(section_lines[header]));
      section_lines[header] = lineno;
      seen_keys.clear();
      if (header == "runner") section = Section::Runner;
      else if (header == "ranking") section = Section::Ranking;
      else if (header.rfind("experiment.", 0) == 0 || header.rfind("tracker.", 0) == 0) {
        const bool is_tracker = header.rfind("tracker.", 0) == 0;
        section = is_tracker ? Section::Tracker : Section::Experiment;
        section_name = header.substr(is_tracker ? 8 : 11);
        if (!valid_name(section_name)) ctx.fail_line(lineno, "invalid name '" + section_name + "'");
        if (is_tracker) {
          ws.trackers.emplace_back();
          ws.trackers.back().name = section_name;
        } else {
          experiment_settings.emplace_back(section_name, std::vector<Setting>{});
        }
      } else {
        ctx.fail_line(lineno, "unknown section [" + header + "]");
      }
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) ctx.fail_line(lineno, "expected 'key = value', got '" + line + "'");
    Setting s{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno};
    if (s.key.empty()) ctx.fail_line(lineno, "missing key before '='");
    if (s.value.empty()) ctx.fail(s, "missing value");
    if (!seen_keys.insert(s.key).second) ctx.fail(s, "duplicate key");

    switch (section) {
      case Section::Top:
        if (s.key == "dataset") ws.dataset_root = base / s.value;
        else if (s.key == "results") ws.results_root = base / s.value;
        else if (s.key == "reports") ws.reports_root = base / s.value;
        else if (s.key == "seed") ws.seed = ctx.seed(s);
        else if (s.key == "S") {
          ws.S = ctx.number(s);
          if (!(ws.S > 0)) ctx.fail(s, "must be > 0");
        } else if (s.key == "alpha") apply_ranking_setting(ws.ranking, s, ctx);
        else ctx.fail(s, "unknown workspace key");
        break;
      case Section::Runner: apply_runner_setting(ws.runner, s, ctx); break;
      case Section::Ranking: apply_ranking_setting(ws.ranking, s, ctx); break;
      case Section::Experiment: experiment_settings.back().second.push_back(s); break;
      case Section::Tracker: apply_tracker_setting(ws.trackers.back(), s, ctx, base); break;
    }
    if (end == text.size()) break;
  }

  // Experiments start from the [runner] defaults wherever that table appears.
  for (const auto& [name, settings] : experiment_settings) {
    RunnerConfig cfg = ws.runner;
    for (const auto& s : settings) apply_runner_setting(cfg, s, ctx);
    ws.experiments[name] = cfg;
  }
  if (!ws.experiments.count("baseline")) ws.experiments["baseline"] = ws.runner;
  for (auto& [name, cfg] : ws.experiments) {
    try {
      cfg.validate();
    } catch (const Error& e) {
      ctx.fail_line(section_lines.count("experiment." + name) ? section_lines["experiment." + name] : 0,
                    "experiment '" + name + "': " + e.what());
    }
  }
  for (const auto& t : ws.trackers) {
    const std::size_t line = section_lines["tracker." + t.name];
    if (t.is_builtin() == !t.command.empty())
      ctx.fail_line(line, "tracker '" + t.name + "' needs exactly one of 'builtin' or 'command'");
  }
  return ws;
}

Workspace load_workspace(const fs::path& file) {
  if (!fs::is_regular_file(file)) raise(ErrorKind::Config, file.string() + ": workspace file not found");
  return parse_workspace(read_file(file), file);
}

std::vector<TrackerRuns> load_experiment_runs(const Workspace& ws, const std::vector<SequenceRecord>& dataset,
                                              const AnalyzeCommand& options) {
  const RunnerConfig& cfg = ws.experiment(options.experiment);
  const ResultsLocation where{ws.results_root, options.experiment};
  std::vector<std::string> names = options.trackers;
  const bool explicit_names = !names.empty();
  if (!explicit_names)
    for (const auto& t : ws.trackers) names.push_back(t.name);
  std::vector<TrackerRuns> out;
  for (const auto& name : names) {
    if (explicit_names) ws.tracker(name);
    auto runs = load_runs(where, name, dataset, cfg.n_rep, cfg.n_burnin);
    const bool any = std::any_of(runs.per_sequence.begin(), runs.per_sequence.end(),
                                 [](const auto& reps) { return !reps.empty(); });
    if (!any) {
      if (explicit_names)
        raise(ErrorKind::InsufficientData, "no results for tracker '" + name + "' in experiment '" +
                                               options.experiment + "'");
      continue;
    }
    out.push_back(std::move(runs));
  }
  if (out.empty())
    raise(ErrorKind::InsufficientData, "no tracker has results in experiment '" + options.experiment + "'");
  return out;
}

std::string cmd_dataset_synth(const Workspace& ws, const SynthOptions& options) {
  if (options.count < 1) raise(ErrorKind::Parameter, "count must be >= 1");
  if (options.length < 2) raise(ErrorKind::Parameter, "length must be >= 2");
  if (!(options.gamma >= 0 && options.gamma <= 1)) raise(ErrorKind::Parameter, "gamma must lie in [0,1]");
  const std::uint64_t seed = seed_or(options.seed, ws);
  ensure_dir(ws.dataset_root);
  std::string list;
  if (!options.scripts.empty()) {
    std::set<std::string> names;
    std::vector<SynthScript> scripts;
    for (const auto& file : options.scripts) {
      scripts.push_back(read_synth_script(file));
      if (!names.insert(scripts.back().name).second)
        raise(ErrorKind::Parameter, file.string() + ": duplicate sequence name '" + scripts.back().name + "'");
    }
    for (const auto& script : scripts) {
      synthesize(script, ws.dataset_root / script.name);
      list += script.name + "\n";
    }
    write_file_atomic(ws.dataset_root / "list.txt", list);
    return "synthesized " + std::to_string(scripts.size()) + " scripted sequences in " + ws.dataset_root.string();
  }
  for (int i = 0; i < options.count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "synth%03d", i + 1);
    auto script = random_script(name, options.length, job_seed(seed, "synth", name, 0));
    script.gamma = options.gamma;
    synthesize(script, ws.dataset_root / name);
    list += std::string(name) + "\n";
  }
  write_file_atomic(ws.dataset_root / "list.txt", list);
  return "synthesized " + std::to_string(options.count) + " sequences of " + std::to_string(options.length) +
         " frames in " + ws.dataset_root.string();
}

std::string cmd_dataset_attributes(const Workspace& ws, const AttributesCommand& options) {
  const auto ds = dataset_of(ws);
  std::vector<std::string> names;
  const auto vectors = attribute_vectors(ds, seed_or(options.seed, ws), names);
  const auto out = ensure_dir(ws.reports_root) / "attributes.csv";
  write_file_atomic(out, attributes_csv(names, vectors, nullptr));
  return "computed attributes of " + std::to_string(ds.size()) + " sequences -> " + out.string();
}

std::string cmd_dataset_cluster(const Workspace& ws, const ClusterCommand& options) {
  const auto ds = dataset_of(ws);
  std::vector<std::string> names;
  const auto vectors = attribute_vectors(ds, seed_or(options.seed, ws), names);
  const auto clusters = select_dataset(vectors, options.clusters);
  const auto out = ensure_dir(ws.reports_root) / "clusters.csv";
  write_file_atomic(out, attributes_csv(names, vectors, &clusters));
  std::string ex;
  for (auto e : clusters.exemplars) ex += (ex.empty() ? "" : ",") + names[e];
  return std::to_string(clusters.exemplars.size()) + " clusters (requested " + std::to_string(options.clusters) +
         "), exemplars " + ex + " -> " + out.string();
}

std::string cmd_dataset_gamma(const Workspace& ws, const GammaCommand& options) {
  std::vector<std::pair<fs::path, fs::path>> jobs;  // (sequence dir, annotations)
  if (!options.sequence.empty()) {
    if (options.annotations.empty()) raise(ErrorKind::Usage, "--annotations is required with --sequence");
    const fs::path dir = ws.dataset_root / options.sequence;
    if (!fs::is_directory(dir)) raise(ErrorKind::Io, dir.string() + ": no such sequence");
    jobs.emplace_back(dir, options.annotations);
  } else {
    for (const auto& seq : dataset_of(ws)) {
      const fs::path dir = ws.dataset_root / seq.name;
      if (fs::exists(dir / "annotations.txt")) jobs.emplace_back(dir, dir / "annotations.txt");
    }
    if (jobs.empty()) raise(ErrorKind::InsufficientData, "no sequence has an annotations.txt");
  }
  std::string summary;
  for (const auto& [dir, ann] : jobs) {
    const double g = estimate_gamma(read_annotations(ann));
    write_file_atomic(dir / "gamma.txt", format_gamma(g) + "\n");
    summary += (summary.empty() ? "" : ", ") + dir.filename().string() + "=" + format_gamma(g);
  }
  return "gamma: " + summary;
}

std::string cmd_evaluate(const Workspace& ws, const EvaluateCommand& options) {
  const auto ds = dataset_of(ws);
  RunnerConfig cfg = ws.experiment(options.experiment);
  cfg.workers = options.workers;
  cfg.master_seed = seed_or(options.seed, ws);
  std::vector<std::string> names = options.trackers;
  if (names.empty())
    for (const auto& t : ws.trackers) names.push_back(t.name);
  if (names.empty()) raise(ErrorKind::Config, ws.file.string() + ": no trackers registered");
  const ResultsLocation where{ws.results_root, options.experiment};
  std::size_t ok = 0, total = 0, failures = 0;
  for (const auto& name : names) {
    const auto results = run_experiment(ws.tracker(name), ds, cfg, where);
    for (const auto& r : results) {
      ++total;
      if (r.status == RunStatus::Ok) ++ok, failures += r.trajectory.failures();
    }
  }
  std::string s = "evaluated " + std::to_string(names.size()) + " tracker(s) on " + std::to_string(ds.size()) +
                  " sequences: " + std::to_string(ok) + "/" + std::to_string(total) + " runs ok, " +
                  std::to_string(failures) + " failures -> " + (ws.results_root / options.experiment).string();
  if (ok != total) raise(ErrorKind::Crash, s + " (see .meta files for failed runs)");
  return s;
}

std::string cmd_analyze_measures(const Workspace& ws, const AnalyzeCommand& options) {
  const auto ds = dataset_of(ws);
  const auto runs = load_experiment_runs(ws, ds, options);
  const auto rows = measure_table(ds, runs, ws.S);
  const auto out = report_dir(ws, options.experiment) / "measures.csv";
  write_file_atomic(out, measures_csv(rows));
  return std::to_string(rows.size()) + " measure rows for " + tracker_list(runs) + " -> " + out.string();
}

std::string cmd_analyze_rank(const Workspace& ws, const RankCommand& options) {
  const auto ds = dataset_of(ws);
  const auto runs = load_experiment_runs(ws, ds, options.analyze);
  RankOptions ro = ws.ranking;
  if (options.with_tests) ro.with_tests = *options.with_tests;
  const auto table = rank_dataset(ds, runs, options.mode, ro);
  const std::string mode(aggregate_mode_name(options.mode));
  const auto out = report_dir(ws, options.analyze.experiment) / ("ranks_" + mode + ".csv");
  write_file_atomic(out, ranks_csv(table, mode));
  std::string s = "ranks (" + mode + "):";
  for (std::size_t i = 0; i < table.trackers.size(); ++i)
    s += " " + table.trackers[i] + "=" + fmt("%.2f", table.combined[i]);
  return s + " -> " + out.string();
}

std::string cmd_analyze_difficulty(const Workspace& ws, const AnalyzeCommand& options) {
  const auto ds = dataset_of(ws);
  const auto runs = load_experiment_runs(ws, ds, options);
  const auto reports = difficulty(ds, runs);
  const auto dir = report_dir(ws, options.experiment);
  write_file_atomic(dir / "difficulty.csv", difficulty_csv(reports));
  const auto curves = ensure_dir(dir / "difficulty");
  std::size_t hard = 0;
  for (const auto& r : reports) {
    write_file_atomic(curves / (r.sequence + ".csv"), difficulty_curve_csv(r));
    if (r.level == DifficultyLevel::Hard) ++hard;
  }
  return "difficulty of " + std::to_string(reports.size()) + " sequences (" + std::to_string(hard) + " hard) -> " +
         (dir / "difficulty.csv").string();
}

std::string cmd_analyze_burnin(const Workspace& ws, const BurninCommand& options) {
  const auto ds = dataset_of(ws);
  const auto runs = load_experiment_runs(ws, ds, options.analyze);
  const auto dir = report_dir(ws, options.analyze.experiment);
  std::string s = "burn-in curves:";
  for (const auto& r : runs) {
    const auto c = burnin_curve(ds, r, options.horizon);
    std::string csv = "offset,mean_overlap,derivative,windows\n";
    for (std::size_t k = 0; k < c.curve.size(); ++k) {
      csv += std::to_string(k + 1) + "," + (std::isnan(c.curve[k]) ? std::string("nan") : fmt("%.6f", c.curve[k])) + ",";
      csv += k < c.derivative.size() && !std::isnan(c.derivative[k]) ? fmt("%.6f", c.derivative[k]) : std::string("");
      csv += "," + std::to_string(c.counts[k]) + "\n";
    }
    write_file_atomic(dir / ("burnin_" + r.tracker + ".csv"), csv);
    s += " " + r.tracker + "(" + std::to_string(c.windows) + " segments)";
  }
  return s + " -> " + dir.string();
}

std::string cmd_analyze_rank_variance(const Workspace& ws, const RankVarianceCommand& options) {
  const auto ds = dataset_of(ws);
  const auto runs = load_experiment_runs(ws, ds, options.analyze);
  RankVarianceOptions ro;
  ro.subset_size = options.subset_size;
  ro.n_subsets = options.subsets;
  ro.mode = options.mode;
  ro.seed = seed_or(options.seed, ws);
  ro.ranking = ws.ranking;
  ro.ranking.with_tests = true;
  const auto with = rank_variance_study(ds, runs, ro);
  ro.ranking.with_tests = false;
  const auto without = rank_variance_study(ds, runs, ro);
  std::string csv = "tracker,accuracy_var_tests,robustness_var_tests,accuracy_var_no_tests,robustness_var_no_tests\n";
  for (std::size_t i = 0; i < runs.size(); ++i)
    csv += csv_escape(runs[i].tracker) + "," + fmt("%.6f", with.accuracy_per_tracker[i]) + "," +
           fmt("%.6f", with.robustness_per_tracker[i]) + "," + fmt("%.6f", without.accuracy_per_tracker[i]) + "," +
           fmt("%.6f", without.robustness_per_tracker[i]) + "\n";
  csv += "mean," + fmt("%.6f", with.accuracy) + "," + fmt("%.6f", with.robustness) + "," + fmt("%.6f", without.accuracy) +
         "," + fmt("%.6f", without.robustness) + "\n";
  const auto out = report_dir(ws, options.analyze.experiment) / "rank_variance.csv";
  write_file_atomic(out, csv);
  return "mean rank variance with tests A=" + fmt("%.4f", with.accuracy) + " R=" + fmt("%.4f", with.robustness) +
         ", without A=" + fmt("%.4f", without.accuracy) + " R=" + fmt("%.4f", without.robustness) + " -> " + out.string();
}

std::string cmd_analyze_estimators(const Workspace& ws, const EstimatorsCommand& options) {
  if (options.tracker.empty()) raise(ErrorKind::Usage, "--tracker is required");
  const auto ds = dataset_of(ws);
  AnalyzeCommand nor{options.nor_experiment, {options.tracker}};
  AnalyzeCommand wir{options.wir_experiment, {options.tracker}};
  const auto nor_runs = load_experiment_runs(ws, ds, nor);
  const auto wir_runs = load_experiment_runs(ws, ds, wir);
  const auto cmp = compare_estimators(ds, nor_runs.front(), wir_runs.front(), options.subset_size, options.samples,
                                      options.sampling, seed_or(options.seed, ws));
  nlohmann::ordered_json j;
  j["tracker"] = cmp.tracker;
  j["sampling"] = options.sampling == SamplingMode::Bootstrap ? "bootstrap" : "subset";
  j["subset_size"] = cmp.subset_size;
  j["samples"] = cmp.samples;
  j["NOR"] = {{"mean", cmp.nor.mean}, {"variance", cmp.nor.variance}};
  j["WIR"] = {{"mean", cmp.wir.mean}, {"variance", cmp.wir.variance}};
  const auto out = ensure_dir(ws.reports_root) / ("estimators_" + options.tracker + ".json");
  write_file_atomic(out, j.dump(2) + "\n");
  return "NOR mean=" + fmt("%.4f", cmp.nor.mean) + " var=" + fmt("%.4g", cmp.nor.variance) +
         "; WIR mean=" + fmt("%.4f", cmp.wir.mean) + " var=" + fmt("%.4g", cmp.wir.variance) + " -> " + out.string();
}

std::string cmd_simulate_estimators(const Workspace& ws, const SimulateCommand& options, std::string* json) {
  static const std::set<std::string> kinds{"NOR", "WIR", "GLA", "PFA", "all"};
  if (!kinds.count(options.kind)) raise(ErrorKind::Usage, "unknown estimator kind '" + options.kind + "'");
  if (options.trials < 2) raise(ErrorKind::Parameter, "trials must be >= 2");
  const std::uint64_t seed = seed_or(options.seed, ws);
  const bool all = options.kind == "all";
  const bool want_reinit = all || options.kind == "NOR" || options.kind == "WIR";
  const bool want_annotation = all || options.kind == "GLA" || options.kind == "PFA";

  auto entry = [](const Moments& closed, const EmpiricalMoments& emp) {
    nlohmann::ordered_json e;
    e["closed_form"] = {{"mean", closed.mean}, {"variance", closed.variance}};
    e["empirical"] = {{"mean", emp.moments.mean},
                      {"variance", emp.moments.variance},
                      {"mean_se", emp.mean_se},
                      {"variance_se", emp.variance_se}};
    e["agrees_3se"] = emp.agrees(closed, 3.0);
    return e;
  };

  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["trials"] = options.trials;
  std::string summary;
  bool all_agree = true;
  if (want_reinit) {
    const auto& p = options.reinit;
    p.validate();
    const auto sim = simulate_reinit(p, options.trials, sub_seed(seed, 1));
    j["reinit_params"] = {{"mu", p.mu}, {"sigma", p.sigma}, {"N", p.N}, {"Ns", p.Ns}, {"p", p.p}, {"delta", p.delta}};
    for (auto [kind, name, emp] : {std::tuple{ReinitEstimator::NOR, "NOR", &sim.nor},
                                   std::tuple{ReinitEstimator::WIR, "WIR", &sim.wir}}) {
      if (!all && options.kind != name) continue;
      const auto closed = reinit_moments(kind, p);
      j[name] = entry(closed, *emp);
      all_agree = all_agree && emp->agrees(closed);
      summary += std::string(summary.empty() ? "" : "; ") + name + " mean=" + fmt("%.4f", closed.mean) +
                 " (mc " + fmt("%.4f", emp->moments.mean) + ")";
    }
  }
  if (want_annotation) {
    const auto& p = options.annotation;
    p.validate();
    const auto sim = simulate_annotation(p, options.trials, sub_seed(seed, 2));
    j["annotation_params"] = {{"mu_a", p.mu_a}, {"mu_b", p.mu_b}, {"sigma", p.sigma}, {"N", p.N},
                              {"NA", p.NA},     {"eta", p.eta},   {"beta", p.beta}};
    for (auto [kind, name, emp] : {std::tuple{AnnotationEstimator::GLA, "GLA", &sim.gla},
                                   std::tuple{AnnotationEstimator::PFA, "PFA", &sim.pfa}}) {
      if (!all && options.kind != name) continue;
      const auto closed = annotation_moments(kind, p);
      j[name] = entry(closed, *emp);
      all_agree = all_agree && emp->agrees(closed);
      summary += std::string(summary.empty() ? "" : "; ") + name + " mean=" + fmt("%.4f", closed.mean) +
                 " (mc " + fmt("%.4f", emp->moments.mean) + ")";
    }
  }
  const std::string doc = j.dump(2) + "\n";
  const fs::path out = options.output ? *options.output : ensure_dir(ws.reports_root) / "simulate_estimators.json";
  if (out != "-") {
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_file_atomic(out, doc);
  }
  if (json) *json = doc;
  return summary + (all_agree ? "; Monte Carlo agrees within 3 SE" : "; Monte Carlo DISAGREES beyond 3 SE") +
         (out != "-" ? " -> " + out.string() : std::string());
}

std::string cmd_plot_ar(const Workspace& ws, const PlotCommand& options) {
  const auto ds = dataset_of(ws);
  const auto runs = load_experiment_runs(ws, ds, options.analyze);
  const auto table = rank_dataset(ds, runs, options.mode, ws.ranking);
  std::vector<ScopeMeasures> measures;
  for (const auto& r : runs) measures.push_back(summarize(scope_series(ds, r, Scope::pooled()), ws.S));
  const auto points = ar_plot_data(table, measures);
  const auto dir = report_dir(ws, options.analyze.experiment);
  const std::string stem = std::string(options.raw ? "ar_raw_" : "ar_rank_") + std::string(aggregate_mode_name(options.mode));
  write_file_atomic(dir / (stem + ".svg"), ar_svg(points, options.raw));
  write_file_atomic(dir / (stem + ".csv"), ar_points_csv(points));
  return "AR plot of " + std::to_string(points.size()) + " trackers -> " + (dir / (stem + ".svg")).string();
}

}  // namespace votkit

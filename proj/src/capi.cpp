#include "votkit/votkit.h"

#include <filesystem>
#include <new>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "stats.hpp"
#include "workspace.hpp"

struct votkit_region {
  votkit::Region region;
};

struct votkit_workspace {
  votkit::Workspace ws;
  std::string summary;
  std::string document;
};

namespace {

thread_local std::string g_last_error;

template <class F>
votkit_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return VOTKIT_OK;
  } catch (const votkit::Error& e) {
    g_last_error = e.what();
    return static_cast<votkit_status>(static_cast<int>(e.kind()));
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return VOTKIT_E_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return VOTKIT_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return VOTKIT_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return VOTKIT_E_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) votkit::raise(votkit::ErrorKind::InvalidArgument, what);
}

std::optional<std::uint64_t> seed_of(const votkit_seed& s) {
  if (!s.present) return std::nullopt;
  return s.value;
}

std::vector<std::string> names_of(const char* const* names, size_t n) {
  require(names != nullptr || n == 0, "tracker list is NULL");
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) {
    require(names[i] != nullptr, "tracker name is NULL");
    out.emplace_back(names[i]);
  }
  return out;
}

votkit::AggregateMode mode_of(const char* mode, votkit::AggregateMode fallback) {
  if (mode == nullptr) return fallback;
  const auto m = votkit::aggregate_mode_from_name(mode);
  if (!m) votkit::raise(votkit::ErrorKind::Usage, std::string("unknown aggregation mode '") + mode + "'");
  return *m;
}

votkit::ReinitParams to_core(const votkit_reinit_params& p) {
  return {p.mu, p.sigma, p.N, p.Ns, p.p, p.delta};
}

votkit::AnnotationParams to_core(const votkit_annotation_params& p) {
  return {p.mu_a, p.mu_b, p.sigma, p.N, p.NA, p.eta, p.beta};
}

votkit_test_result to_c(const votkit::TestResult& r) {
  return {r.statistic, r.p_value, r.significant ? 1 : 0, r.method == votkit::TestMethod::Exact ? 1 : 0, r.n};
}

template <class F>
votkit_status run_command(votkit_workspace* ws, const void* options, F&& f) {
  return guard([&] {
    require(ws != nullptr, "workspace handle is NULL");
    require(options != nullptr, "options are NULL");
    ws->document.clear();
    ws->summary = f();
  });
}

}  // namespace

extern "C" {

const char* votkit_last_error(void) { return g_last_error.c_str(); }

const char* votkit_status_name(votkit_status status) {
  if (status == VOTKIT_OK) return "ok";
  if (status == VOTKIT_E_BUFFER_TOO_SMALL) return "buffer_too_small";
  if (status >= VOTKIT_E_INVALID_ARGUMENT && status <= VOTKIT_E_INTERNAL)
    return votkit::error_kind_name(static_cast<votkit::ErrorKind>(status));
  return "unknown";
}

const char* votkit_version(void) { return "1.0.0"; }

votkit_status votkit_region_parse(const char* text, votkit_region** out) {
  return guard([&] {
    require(text != nullptr && out != nullptr, "NULL argument");
    *out = nullptr;
    *out = new votkit_region{votkit::parse_region(text)};
  });
}

void votkit_region_free(votkit_region* region) { delete region; }

votkit_status votkit_region_format(const votkit_region* region, char* buffer, size_t capacity, size_t* needed) {
  bool too_small = false;
  const auto st = guard([&] {
    require(region != nullptr, "region is NULL");
    require(buffer != nullptr || capacity == 0, "buffer is NULL");
    const std::string s = votkit::format_region(region->region);
    if (needed) *needed = s.size() + 1;
    if (capacity < s.size() + 1) {
      too_small = true;
      return;
    }
    s.copy(buffer, s.size());
    buffer[s.size()] = '\0';
  });
  if (!too_small) return st;
  g_last_error = "buffer too small";
  return VOTKIT_E_BUFFER_TOO_SMALL;
}

votkit_status votkit_region_overlap(const votkit_region* a, const votkit_region* b, double* out) {
  return guard([&] {
    require(a != nullptr && b != nullptr && out != nullptr, "NULL argument");
    *out = votkit::overlap(a->region, b->region);
  });
}

int votkit_region_is_absent(const votkit_region* region) { return region && region->region.is_absent() ? 1 : 0; }

votkit_status votkit_signed_rank(const double* differences, size_t n, double alpha, votkit_test_result* out) {
  return guard([&] {
    require((differences != nullptr || n == 0) && out != nullptr, "NULL argument");
    votkit::SignedRankOptions opt;
    opt.alpha = alpha;
    *out = to_c(votkit::signed_rank({differences, n}, opt));
  });
}

votkit_status votkit_rank_sum(const double* a, size_t na, const double* b, size_t nb, double alpha,
                              votkit_test_result* out) {
  return guard([&] {
    require((a != nullptr || na == 0) && (b != nullptr || nb == 0) && out != nullptr, "NULL argument");
    votkit::RankSumOptions opt;
    opt.alpha = alpha;
    *out = to_c(votkit::rank_sum({a, na}, {b, nb}, opt));
  });
}

votkit_status votkit_practical_difference(const double* phi_i, const double* phi_j, const double* gamma, size_t n,
                                          int* different) {
  return guard([&] {
    require(((phi_i && phi_j && gamma) || n == 0) && different != nullptr, "NULL argument");
    *different = votkit::practical_difference({phi_i, n}, {phi_j, n}, {gamma, n}) ? 1 : 0;
  });
}

votkit_status votkit_gamma_sample_count(uint64_t frames, uint64_t boxes_per_frame, uint64_t* out) {
  return guard([&] {
    require(out != nullptr, "NULL argument");
    *out = votkit::gamma_sample_count(frames, boxes_per_frame);
  });
}

void votkit_reinit_params_init(votkit_reinit_params* params) {
  if (!params) return;
  const votkit::ReinitParams d;
  *params = {d.mu, d.sigma, d.N, d.Ns, d.p, d.delta};
}

void votkit_annotation_params_init(votkit_annotation_params* params) {
  if (!params) return;
  const votkit::AnnotationParams d;
  *params = {d.mu_a, d.mu_b, d.sigma, d.N, d.NA, d.eta, d.beta};
}

votkit_status votkit_estimator_moments(votkit_estimator kind, const votkit_reinit_params* reinit,
                                       const votkit_annotation_params* annotation, votkit_moments* out) {
  return guard([&] {
    require(out != nullptr, "NULL argument");
    votkit::Moments m;
    switch (kind) {
      case VOTKIT_ESTIMATOR_NOR:
      case VOTKIT_ESTIMATOR_WIR:
        require(reinit != nullptr, "reinit parameters are NULL");
        m = votkit::reinit_moments(kind == VOTKIT_ESTIMATOR_NOR ? votkit::ReinitEstimator::NOR
                                                                : votkit::ReinitEstimator::WIR,
                                   to_core(*reinit));
        break;
      case VOTKIT_ESTIMATOR_GLA:
      case VOTKIT_ESTIMATOR_PFA:
        require(annotation != nullptr, "annotation parameters are NULL");
        m = votkit::annotation_moments(kind == VOTKIT_ESTIMATOR_GLA ? votkit::AnnotationEstimator::GLA
                                                                    : votkit::AnnotationEstimator::PFA,
                                       to_core(*annotation));
        break;
      default: votkit::raise(votkit::ErrorKind::InvalidArgument, "unknown estimator");
    }
    *out = {m.mean, m.variance};
  });
}

votkit_status votkit_workspace_open(const char* path, votkit_workspace** out) {
  return guard([&] {
    require(path != nullptr && out != nullptr, "NULL argument");
    *out = nullptr;
    auto ws = votkit::load_workspace(path);
    *out = new votkit_workspace{std::move(ws), {}, {}};
  });
}

void votkit_workspace_close(votkit_workspace* ws) { delete ws; }

const char* votkit_workspace_summary(const votkit_workspace* ws) { return ws ? ws->summary.c_str() : ""; }

const char* votkit_workspace_document(const votkit_workspace* ws) { return ws ? ws->document.c_str() : ""; }

void votkit_synth_options_init(votkit_synth_options* o) {
  if (!o) return;
  const votkit::SynthOptions d;
  *o = {d.count, d.length, d.gamma, {0, 0}, nullptr, 0};
}

void votkit_dataset_options_init(votkit_dataset_options* o) {
  if (!o) return;
  *o = {votkit::ClusterCommand{}.clusters, nullptr, nullptr, {0, 0}};
}

void votkit_evaluate_options_init(votkit_evaluate_options* o) {
  if (!o) return;
  *o = {nullptr, 0, "baseline", 1, {0, 0}};
}

void votkit_analyze_options_init(votkit_analyze_options* o) {
  if (!o) return;
  const votkit::RankVarianceCommand rv;
  *o = {"baseline", nullptr, 0, nullptr, -1, votkit::BurninCommand{}.horizon, rv.subset_size, rv.subsets, 0, {0, 0}};
}

void votkit_estimators_options_init(votkit_estimators_options* o) {
  if (!o) return;
  const votkit::EstimatorsCommand d;
  *o = {nullptr, "noreset", "baseline", d.subset_size, d.samples, "subset", {0, 0}};
}

void votkit_simulate_options_init(votkit_simulate_options* o) {
  if (!o) return;
  o->kind = "all";
  o->trials = votkit::SimulateCommand{}.trials;
  votkit_reinit_params_init(&o->reinit);
  votkit_annotation_params_init(&o->annotation);
  o->output = nullptr;
  o->seed = {0, 0};
}

votkit_status votkit_dataset_synth(votkit_workspace* ws, const votkit_synth_options* o) {
  return run_command(ws, o, [&] {
    votkit::SynthOptions s;
    s.count = o->count;
    s.length = o->length;
    s.gamma = o->gamma;
    s.seed = seed_of(o->seed);
    for (std::size_t i = 0; i < o->n_scripts; ++i) {
      if (!o->scripts || !o->scripts[i]) votkit::raise(votkit::ErrorKind::InvalidArgument, "null script path");
      s.scripts.emplace_back(o->scripts[i]);
    }
    return votkit::cmd_dataset_synth(ws->ws, s);
  });
}

votkit_status votkit_dataset_attributes(votkit_workspace* ws, const votkit_dataset_options* o) {
  return run_command(ws, o, [&] { return votkit::cmd_dataset_attributes(ws->ws, {seed_of(o->seed)}); });
}

votkit_status votkit_dataset_cluster(votkit_workspace* ws, const votkit_dataset_options* o) {
  return run_command(ws, o, [&] { return votkit::cmd_dataset_cluster(ws->ws, {o->clusters, seed_of(o->seed)}); });
}

votkit_status votkit_dataset_gamma(votkit_workspace* ws, const votkit_dataset_options* o) {
  return run_command(ws, o, [&] {
    votkit::GammaCommand g;
    if (o->sequence) g.sequence = o->sequence;
    if (o->annotations) g.annotations = o->annotations;
    return votkit::cmd_dataset_gamma(ws->ws, g);
  });
}

votkit_status votkit_evaluate(votkit_workspace* ws, const votkit_evaluate_options* o) {
  return run_command(ws, o, [&] {
    votkit::EvaluateCommand e;
    e.trackers = names_of(o->trackers, o->n_trackers);
    if (o->experiment) e.experiment = o->experiment;
    e.workers = o->workers;
    e.seed = seed_of(o->seed);
    return votkit::cmd_evaluate(ws->ws, e);
  });
}

votkit_status votkit_analyze(votkit_workspace* ws, votkit_analysis what, const votkit_analyze_options* o) {
  return run_command(ws, o, [&]() -> std::string {
    votkit::AnalyzeCommand a;
    if (o->experiment) a.experiment = o->experiment;
    a.trackers = names_of(o->trackers, o->n_trackers);
    switch (what) {
      case VOTKIT_ANALYZE_MEASURES: return votkit::cmd_analyze_measures(ws->ws, a);
      case VOTKIT_ANALYZE_RANK: {
        votkit::RankCommand r{a, mode_of(o->mode, votkit::AggregateMode::AttributeNormalized), std::nullopt};
        if (o->tests >= 0) r.with_tests = o->tests != 0;
        return votkit::cmd_analyze_rank(ws->ws, r);
      }
      case VOTKIT_ANALYZE_DIFFICULTY: return votkit::cmd_analyze_difficulty(ws->ws, a);
      case VOTKIT_ANALYZE_BURNIN: return votkit::cmd_analyze_burnin(ws->ws, {a, o->horizon});
      case VOTKIT_ANALYZE_RANK_VARIANCE: {
        votkit::RankVarianceCommand r{a, o->subset_size, o->subsets,
                                      mode_of(o->mode, votkit::AggregateMode::SequencePooled), seed_of(o->seed)};
        return votkit::cmd_analyze_rank_variance(ws->ws, r);
      }
      case VOTKIT_PLOT_AR:
        return votkit::cmd_plot_ar(ws->ws, {a, mode_of(o->mode, votkit::AggregateMode::AttributeNormalized), o->raw != 0});
    }
    votkit::raise(votkit::ErrorKind::InvalidArgument, "unknown analysis");
  });
}

votkit_status votkit_analyze_estimators(votkit_workspace* ws, const votkit_estimators_options* o) {
  return run_command(ws, o, [&] {
    votkit::EstimatorsCommand e;
    if (o->tracker) e.tracker = o->tracker;
    if (o->nor_experiment) e.nor_experiment = o->nor_experiment;
    if (o->wir_experiment) e.wir_experiment = o->wir_experiment;
    e.subset_size = o->subset_size;
    e.samples = o->samples;
    const std::string sampling = o->sampling ? o->sampling : "subset";
    if (sampling == "bootstrap") e.sampling = votkit::SamplingMode::Bootstrap;
    else if (sampling == "subset") e.sampling = votkit::SamplingMode::Subset;
    else votkit::raise(votkit::ErrorKind::Usage, "unknown sampling mode '" + sampling + "'");
    e.seed = seed_of(o->seed);
    return votkit::cmd_analyze_estimators(ws->ws, e);
  });
}

votkit_status votkit_simulate_estimators(votkit_workspace* ws, const votkit_simulate_options* o) {
  return run_command(ws, o, [&] {
    votkit::SimulateCommand s;
    if (o->kind) s.kind = o->kind;
    s.trials = o->trials;
    s.reinit = to_core(o->reinit);
    s.annotation = to_core(o->annotation);
    s.seed = seed_of(o->seed);
    if (o->output) s.output = std::filesystem::path(o->output);
    std::string doc;
    auto summary = votkit::cmd_simulate_estimators(ws->ws, s, &doc);
    ws->document = std::move(doc);
    return summary;
  });
}

}  // extern "C"

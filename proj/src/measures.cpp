#include "measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "error.hpp"
#include "text.hpp"

namespace votkit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool in_scope(const Scope& scope, const SequenceRecord& seq, std::size_t seq_index, std::size_t t) {
  switch (scope.kind) {
    case Scope::Kind::Pooled: return true;
    case Scope::Kind::Attribute: return seq.has(scope.attribute, t);
    case Scope::Kind::Sequence: return seq_index == scope.sequence;
  }
  return false;
}

std::string format_optional(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

std::string format_fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string Scope::label(const std::vector<SequenceRecord>& dataset) const {
  switch (kind) {
    case Kind::Pooled: return "pooled";
    case Kind::Attribute: return std::string(attribute_name(attribute));
    case Kind::Sequence: return sequence < dataset.size() ? dataset[sequence].name : "sequence" + std::to_string(sequence);
  }
  return "";
}

std::vector<double> per_frame_accuracy(const SequenceRecord& seq, const std::vector<Trajectory>& reps) {
  const std::size_t n = seq.size();
  std::vector<double> sum(n, 0.0);
  std::vector<std::size_t> count(n, 0);
  for (const auto& traj : reps) {
    if (traj.size() != n)
      raise(ErrorKind::Shape, seq.name + ": trajectory has " + std::to_string(traj.size()) + " frames, expected " +
                                  std::to_string(n));
    const auto ov = frame_overlaps(traj, seq.groundtruth);
    for (std::size_t t = 0; t < n; ++t) {
      if (std::isnan(ov[t])) continue;
      sum[t] += ov[t];
      ++count[t];
    }
  }
  std::vector<double> phi(n, kNaN);
  for (std::size_t t = 0; t < n; ++t)
    if (count[t] > 0) phi[t] = sum[t] / static_cast<double>(count[t]);
  return phi;
}

double accuracy(std::span<const double> phi) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : phi) {
    if (std::isnan(v)) continue;
    sum += v;
    ++n;
  }
  if (n == 0) raise(ErrorKind::UndefinedMeasure, "no valid frame in scope");
  return sum / static_cast<double>(n);
}

double robustness(std::span<const double> failures) {
  if (failures.empty()) return 0.0;
  double sum = 0.0;
  for (double f : failures) sum += f;
  return sum / static_cast<double>(failures.size());
}

double reliability(double rho_r, double frames, double S) {
  if (!(frames > 0.0)) raise(ErrorKind::InvalidArgument, "reliability needs a positive frame count");
  if (rho_r < 0.0 || S < 0.0) raise(ErrorKind::InvalidArgument, "reliability needs rho_r >= 0 and S >= 0");
  return std::exp(-S * rho_r / frames);
}

ScopeSeries scope_series(const std::vector<SequenceRecord>& dataset, const TrackerRuns& runs, const Scope& scope) {
  if (runs.per_sequence.size() != dataset.size())
    raise(ErrorKind::Shape, runs.tracker + ": results cover " + std::to_string(runs.per_sequence.size()) +
                                " sequences, dataset has " + std::to_string(dataset.size()));
  ScopeSeries series;
  std::size_t max_reps = 0;
  for (const auto& reps : runs.per_sequence) max_reps = std::max(max_reps, reps.size());
  series.failures.assign(max_reps, 0.0);

  for (std::size_t s = 0; s < dataset.size(); ++s) {
    const auto& seq = dataset[s];
    const auto& reps = runs.per_sequence[s];
    if (scope.kind == Scope::Kind::Sequence && s != scope.sequence) continue;
    const auto phi = per_frame_accuracy(seq, reps);
    std::vector<double> fails(reps.size(), 0.0);
    for (std::size_t t = 0; t < seq.size(); ++t) {
      if (!in_scope(scope, seq, s, t)) continue;
      series.phi.push_back(phi[t]);
      series.gamma.push_back(seq.gamma);
      ++series.frames;
      for (std::size_t k = 0; k < reps.size(); ++k)
        if (reps[k].entries[t].code == FrameCode::Fail) fails[k] += 1.0;
    }
    // A sequence with fewer completed repetitions contributes its mean count to the missing ones.
    const double mean = reps.empty() ? 0.0 : robustness(fails);
    for (std::size_t k = 0; k < max_reps; ++k) series.failures[k] += k < reps.size() ? fails[k] : mean;
  }
  return series;
}

ScopeMeasures summarize(const ScopeSeries& series, double S) {
  ScopeMeasures m;
  m.frames = series.frames;
  for (double v : series.phi)
    if (!std::isnan(v)) ++m.n_valid;
  if (m.n_valid > 0) m.accuracy = accuracy(series.phi);
  m.robustness = robustness(series.failures);
  if (m.frames > 0) {
    m.robustness_per100 = 100.0 * m.robustness / static_cast<double>(m.frames);
    m.reliability = reliability(m.robustness, static_cast<double>(m.frames), S);
  }
  return m;
}

std::vector<Scope> scopes_of(Scope::Kind kind, const std::vector<SequenceRecord>& dataset) {
  std::vector<Scope> out;
  switch (kind) {
    case Scope::Kind::Pooled: out.push_back(Scope::pooled()); break;
    case Scope::Kind::Attribute:
      for (auto a : kAllAttributes) out.push_back(Scope::of_attribute(a));
      break;
    case Scope::Kind::Sequence:
      for (std::size_t s = 0; s < dataset.size(); ++s) out.push_back(Scope::of_sequence(s));
      break;
  }
  return out;
}

std::vector<MeasureRow> measure_table(const std::vector<SequenceRecord>& dataset, const std::vector<TrackerRuns>& runs,
                                      double S) {
  std::vector<Scope> scopes = scopes_of(Scope::Kind::Pooled, dataset);
  for (auto kind : {Scope::Kind::Attribute, Scope::Kind::Sequence})
    for (const auto& s : scopes_of(kind, dataset)) scopes.push_back(s);
  std::vector<MeasureRow> rows;
  for (const auto& r : runs)
    for (const auto& scope : scopes)
      rows.push_back({r.tracker, scope.label(dataset), summarize(scope_series(dataset, r, scope), S)});
  return rows;
}

std::string measures_csv(const std::vector<MeasureRow>& rows) {
  std::string out = "tracker,scope,accuracy,robustness,robustness_per100,reliability,n_valid,frames\n";
  for (const auto& r : rows) {
    out += csv_escape(r.tracker) + "," + csv_escape(r.scope) + "," + format_optional(r.measures.accuracy) + "," +
           format_fixed(r.measures.robustness) + "," + format_fixed(r.measures.robustness_per100) + "," +
           format_fixed(r.measures.reliability) + "," + std::to_string(r.measures.n_valid) + "," +
           std::to_string(r.measures.frames) + "\n";
  }
  return out;
}

}  // namespace votkit

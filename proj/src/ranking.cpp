#include "ranking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "error.hpp"
#include "text.hpp"

namespace votkit {

namespace {

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::vector<double> rank(std::span<const double> values, Direction direction) {
  for (double v : values)
    if (!std::isfinite(v)) raise(ErrorKind::InvalidArgument, "rank needs finite values");
  if (direction == Direction::LowerBetter) return average_ranks(values);
  std::vector<double> negated(values.size());
  std::transform(values.begin(), values.end(), negated.begin(), [](double v) { return -v; });
  return average_ranks(negated);
}

std::vector<double> corrected_ranks(std::span<const double> raw, const EquivalenceMatrix& equivalent,
                                    Correction correction) {
  const std::size_t n = raw.size();
  if (equivalent.size() != n) raise(ErrorKind::Shape, "equivalence matrix does not match the tracker count");
  for (std::size_t i = 0; i < n; ++i) {
    if (equivalent[i].size() != n) raise(ErrorKind::Shape, "equivalence matrix must be square");
    if (!equivalent[i][i]) raise(ErrorKind::Contract, "equivalence must be reflexive");
    for (std::size_t j = 0; j < i; ++j)
      if (equivalent[i][j] != equivalent[j][i])
        raise(ErrorKind::Contract, "equivalence must be symmetric (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0, lo = raw[i], hi = raw[i];
    std::size_t members = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!equivalent[i][j]) continue;
      sum += raw[j];
      lo = std::min(lo, raw[j]);
      hi = std::max(hi, raw[j]);
      ++members;
    }
    switch (correction) {
      case Correction::Mean: out[i] = sum / static_cast<double>(members); break;
      case Correction::Min: out[i] = lo; break;
      case Correction::Max: out[i] = hi; break;
    }
  }
  return out;
}

ScopeRanks rank_scope(std::string scope, const std::vector<ScopeSeries>& per_tracker, const RankOptions& options) {
  const std::size_t n = per_tracker.size();
  if (n == 0) raise(ErrorKind::InvalidArgument, "no trackers to rank");
  ScopeRanks r;
  r.scope = std::move(scope);
  for (const auto& s : per_tracker) {
    if (s.phi.size() != per_tracker[0].phi.size()) raise(ErrorKind::Contract, "scope frames differ between trackers");
    r.accuracy.push_back(accuracy(s.phi));
    r.robustness.push_back(robustness(s.failures));
  }
  r.accuracy_raw = rank(r.accuracy, Direction::HigherBetter);
  r.robustness_raw = rank(r.robustness, Direction::LowerBetter);

  r.accuracy_equivalent.assign(n, std::vector<bool>(n, false));
  r.robustness_equivalent.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    r.accuracy_equivalent[i][i] = r.robustness_equivalent[i][i] = true;
    if (!options.with_tests) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& a = per_tracker[i];
      const auto& b = per_tracker[j];
      const bool acc = equivalent_accuracy(a.phi, b.phi, a.gamma, options.equivalence);
      const bool rob = equivalent_robustness(a.failures, b.failures, options.equivalence);
      r.accuracy_equivalent[i][j] = r.accuracy_equivalent[j][i] = acc;
      r.robustness_equivalent[i][j] = r.robustness_equivalent[j][i] = rob;
    }
  }
  r.accuracy_rank = corrected_ranks(r.accuracy_raw, r.accuracy_equivalent, options.correction);
  r.robustness_rank = corrected_ranks(r.robustness_raw, r.robustness_equivalent, options.correction);
  return r;
}

double combined_rank(double accuracy_rank, double robustness_rank) { return (accuracy_rank + robustness_rank) / 2.0; }

RankTable aggregate(const std::vector<std::string>& trackers, const std::vector<ScopeRanks>& scopes) {
  if (scopes.empty()) raise(ErrorKind::InsufficientData, "no scope could be ranked");
  const std::size_t n = trackers.size();
  RankTable t;
  t.trackers = trackers;
  t.accuracy_rank.assign(n, 0.0);
  t.robustness_rank.assign(n, 0.0);
  for (const auto& s : scopes) {
    if (s.accuracy_rank.size() != n || s.robustness_rank.size() != n)
      raise(ErrorKind::Contract, "scope '" + s.scope + "' ranks a different tracker set");
    for (std::size_t i = 0; i < n; ++i) {
      t.accuracy_rank[i] += s.accuracy_rank[i];
      t.robustness_rank[i] += s.robustness_rank[i];
    }
    t.scopes.push_back(s.scope);
  }
  const double k = static_cast<double>(scopes.size());
  for (std::size_t i = 0; i < n; ++i) {
    t.accuracy_rank[i] /= k;
    t.robustness_rank[i] /= k;
    t.combined.push_back(combined_rank(t.accuracy_rank[i], t.robustness_rank[i]));
  }
  return t;
}

std::string_view aggregate_mode_name(AggregateMode mode) {
  switch (mode) {
    case AggregateMode::SequencePooled: return "sequence_pooled";
    case AggregateMode::AttributeNormalized: return "attribute_normalized";
    case AggregateMode::SequenceNormalized: return "sequence_normalized";
  }
  return "";
}

std::optional<AggregateMode> aggregate_mode_from_name(std::string_view name) {
  for (auto m : {AggregateMode::SequencePooled, AggregateMode::AttributeNormalized, AggregateMode::SequenceNormalized})
    if (aggregate_mode_name(m) == name) return m;
  return std::nullopt;
}

RankTable rank_dataset(const std::vector<SequenceRecord>& dataset, const std::vector<TrackerRuns>& runs,
                       AggregateMode mode, const RankOptions& options) {
  const Scope::Kind kind = mode == AggregateMode::SequencePooled      ? Scope::Kind::Pooled
                           : mode == AggregateMode::AttributeNormalized ? Scope::Kind::Attribute
                                                                        : Scope::Kind::Sequence;
  std::vector<std::string> trackers;
  for (const auto& r : runs) trackers.push_back(r.tracker);
  std::vector<ScopeRanks> ranked;
  for (const auto& scope : scopes_of(kind, dataset)) {
    std::vector<ScopeSeries> series;
    for (const auto& r : runs) series.push_back(scope_series(dataset, r, scope));
    if (series.empty() || series[0].frames == 0) continue;
    try {
      ranked.push_back(rank_scope(scope.label(dataset), series, options));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UndefinedMeasure) throw;
    }
  }
  return aggregate(trackers, ranked);
}

std::vector<ArPoint> ar_plot_data(const RankTable& ranks, const std::vector<ScopeMeasures>& measures) {
  if (measures.size() != ranks.trackers.size()) raise(ErrorKind::Shape, "measures do not match the ranked trackers");
  std::vector<ArPoint> out;
  for (std::size_t i = 0; i < ranks.trackers.size(); ++i) {
    ArPoint p;
    p.tracker = ranks.trackers[i];
    p.accuracy_rank = ranks.accuracy_rank[i];
    p.robustness_rank = ranks.robustness_rank[i];
    p.accuracy = measures[i].accuracy.value_or(0.0);
    p.reliability = measures[i].reliability;
    out.push_back(p);
  }
  return out;
}

std::string ranks_csv(const RankTable& table, std::string_view scope) {
  std::string out = "tracker,scope,accuracy_rank,robustness_rank,combined\n";
  for (std::size_t i = 0; i < table.trackers.size(); ++i)
    out += csv_escape(table.trackers[i]) + "," + csv_escape(scope) + "," + fixed(table.accuracy_rank[i], 2) + "," +
           fixed(table.robustness_rank[i], 2) + "," + fixed(table.combined[i], 2) + "\n";
  return out;
}

std::string ar_points_csv(const std::vector<ArPoint>& points) {
  std::string out = "tracker,accuracy_rank,robustness_rank,accuracy,reliability\n";
  for (const auto& p : points)
    out += csv_escape(p.tracker) + "," + fixed(p.accuracy_rank, 4) + "," + fixed(p.robustness_rank, 4) + "," +
           fixed(p.accuracy, 6) + "," + fixed(p.reliability, 6) + "\n";
  return out;
}

std::string ar_svg(const std::vector<ArPoint>& points, bool raw) {
  const double size = 400.0, margin = 50.0, span = size - 2 * margin;
  double max_rank = 1.0;
  for (const auto& p : points) max_rank = std::max({max_rank, p.accuracy_rank, p.robustness_rank});
  // Rank plots: rank 1 at the top/right. Raw plots: 1.0 at the top/right.
  auto to_unit = [&](double v, bool is_rank) {
    if (!is_rank) return std::clamp(v, 0.0, 1.0);
    return max_rank > 1.0 ? (max_rank - v) / (max_rank - 1.0) : 1.0;
  };
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(size, 0) + "\" height=\"" +
                    fixed(size, 0) + "\">\n";
  out += "<rect x=\"" + fixed(margin, 0) + "\" y=\"" + fixed(margin, 0) + "\" width=\"" + fixed(span, 0) +
         "\" height=\"" + fixed(span, 0) + "\" fill=\"none\" stroke=\"black\"/>\n";
  const std::string xlabel = raw ? "Reliability (S=100)" : "Robustness rank";
  const std::string ylabel = raw ? "Accuracy" : "Accuracy rank";
  out += "<text x=\"" + fixed(size / 2, 0) + "\" y=\"" + fixed(size - 15, 0) + "\" text-anchor=\"middle\">" + xlabel +
         "</text>\n";
  out += "<text x=\"15\" y=\"" + fixed(size / 2, 0) + "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " +
         fixed(size / 2, 0) + ")\">" + ylabel + "</text>\n";
  for (const auto& p : points) {
    const double ux = raw ? to_unit(p.reliability, false) : to_unit(p.robustness_rank, true);
    const double uy = raw ? to_unit(p.accuracy, false) : to_unit(p.accuracy_rank, true);
    const double x = margin + ux * span, y = margin + (1.0 - uy) * span;
    out += "<circle cx=\"" + fixed(x, 2) + "\" cy=\"" + fixed(y, 2) + "\" r=\"4\"/>\n";
    out += "<text x=\"" + fixed(x + 6, 2) + "\" y=\"" + fixed(y - 6, 2) + "\" font-size=\"10\">" +
           xml_escape(p.tracker) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace votkit

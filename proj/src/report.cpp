#include "lexiprof/report.hpp"

#include <algorithm>
#include <tuple>

#include "json_io.hpp"
#include "lexiprof/text.hpp"

namespace lexiprof {

std::vector<ReportRow> report_rows(const SweepRecord& r) {
  std::vector<ReportRow> rows;
  for (MetricKind kind : {MetricKind::Recall, MetricKind::Coverage, MetricKind::Cosine}) {
    if (kind == MetricKind::Cosine && r.metric.scope.kind == Scope::Kind::Ngram) continue;
    ReportRow row;
    row.speaker_id = r.speaker_id;
    row.timepoint_min = r.timepoint_min;
    row.window_minutes = r.window_minutes;
    row.window_index = r.metric.window_index;
    row.scope = r.metric.scope.name();
    row.scope_order = r.metric.scope.order();
    row.mode = std::string(match_mode_name(r.metric.mode));
    row.k_assignment_id = r.assignment_id;
    row.metric = std::string(metric_name(kind));
    row.value = metric_value(r.metric, kind);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

int metric_order(const std::string& m) {
  if (m == "recall") return 0;
  if (m == "coverage") return 1;
  if (m == "cosine") return 2;
  return 3;
}

}  // namespace

std::vector<ReportRow> report_rows(const SweepResult& r) {
  std::vector<ReportRow> rows;
  for (const SweepRecord& rec : r.records) {
    for (ReportRow& row : report_rows(rec)) rows.push_back(std::move(row));
  }
  for (const SkipRecord& s : r.skips) {
    ReportRow row;
    row.speaker_id = s.speaker_id;
    row.timepoint_min = s.timepoint_min;
    row.window_minutes = s.window_minutes;
    row.window_index = s.window_index;
    row.k_assignment_id = s.assignment_id;
    row.skip_reason = s.reason;
    row.scope_order = -1;
    rows.push_back(std::move(row));
  }

  std::map<std::string, std::size_t> rank;
  for (std::size_t i = 0; i < r.provenance.assignment_ids.size(); ++i) rank[r.provenance.assignment_ids[i]] = i;
  std::stable_sort(rows.begin(), rows.end(), [&](const ReportRow& a, const ReportRow& b) {
    return std::forward_as_tuple(a.speaker_id, a.timepoint_min, rank[a.k_assignment_id], a.window_minutes, a.mode,
                                 a.window_index, a.scope_order, metric_order(a.metric)) <
           std::forward_as_tuple(b.speaker_id, b.timepoint_min, rank[b.k_assignment_id], b.window_minutes, b.mode,
                                 b.window_index, b.scope_order, metric_order(b.metric));
  });
  return rows;
}

void sort_rows(std::vector<ReportRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::forward_as_tuple(a.speaker_id, a.timepoint_min, a.k_assignment_id, a.window_minutes, a.mode,
                                 a.window_index, a.scope_order, metric_order(a.metric)) <
           std::forward_as_tuple(b.speaker_id, b.timepoint_min, b.k_assignment_id, b.window_minutes, b.mode,
                                 b.window_index, b.scope_order, metric_order(b.metric));
  });
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string opt_value(const std::optional<double>& v) { return v ? text::format_fixed(*v, 6) : std::string(); }

}  // namespace

std::string rows_to_csv(const std::vector<ReportRow>& rows) {
  std::string out = "speaker_id,timepoint_min,window_minutes,window_index,scope,mode,k_assignment_id,metric,value,skip_reason\n";
  for (const ReportRow& r : rows) {
    out += csv_escape(r.speaker_id);
    out += ',' + std::to_string(r.timepoint_min);
    out += ',' + (r.window_minutes > 0 ? std::to_string(r.window_minutes) : std::string());
    out += ',' + (r.window_index >= 0 ? std::to_string(r.window_index) : std::string());
    out += ',' + csv_escape(r.scope);
    out += ',' + csv_escape(r.mode);
    out += ',' + csv_escape(r.k_assignment_id);
    out += ',' + csv_escape(r.metric);
    out += ',' + opt_value(r.value);
    out += ',' + csv_escape(r.skip_reason);
    out += '\n';
  }
  return out;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "timepoint_min,k_assignment_id,window_minutes,mode,window_index,scope,metric,mean,std,n_defined,n_total\n";
  for (const SummaryRow& r : rows) {
    out += std::to_string(r.timepoint_min);
    out += ',' + csv_escape(r.assignment_id);
    out += ',' + std::to_string(r.window_minutes);
    out += ',' + std::string(match_mode_name(r.mode));
    out += ',' + std::to_string(r.window_index);
    out += ',' + r.scope.name();
    out += ',' + std::string(metric_name(r.metric));
    out += ',' + opt_value(r.mean);
    out += ',' + opt_value(r.stddev);
    out += ',' + std::to_string(r.n_defined);
    out += ',' + std::to_string(r.n_total);
    out += '\n';
  }
  return out;
}

std::string provenance_to_json(const SweepResult& r, const std::string& manifest_hash, std::uint64_t seed) {
  using json_io::Json;
  const Provenance& p = r.provenance;
  Json j;
  j["config_hash"] = p.config_hash;
  j["corpus_hash"] = p.corpus_hash;
  j["manifest_hash"] = manifest_hash;
  j["seed"] = seed;
  j["grid"] = Json{{"speakers", p.speakers},
                   {"timepoints", p.timepoints},
                   {"k_assignments", p.assignments},
                   {"window_sizes", p.window_sizes},
                   {"modes", p.modes},
                   {"k_assignment_ids", p.assignment_ids}};
  j["records"] = r.records.size();
  j["skips"] = r.skips.size();
  return j.dump(2) + "\n";
}

}  // namespace lexiprof

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lexiprof/experiment.hpp"

namespace lexiprof {

// One long-format output row. `value` is empty for undefined metrics and
// skipped cells; skipped cells carry a reason instead.
struct ReportRow {
  std::string speaker_id;
  int timepoint_min = 0;
  int window_minutes = 0;
  int window_index = 0;
  std::string scope;
  std::string mode;
  std::string k_assignment_id;
  std::string metric;
  std::optional<double> value;
  std::string skip_reason;
  int scope_order = 0;  // sort helper, not written
};

// Recall and coverage for every scope, cosine for categories and the
// aggregate.
std::vector<ReportRow> report_rows(const SweepRecord& r);
std::vector<ReportRow> report_rows(const SweepResult& r);

void sort_rows(std::vector<ReportRow>& rows);

// Fixed columns, 6 decimals, missing values as empty fields, "\n" endings.
std::string rows_to_csv(const std::vector<ReportRow>& rows);
std::string summary_to_csv(const std::vector<SummaryRow>& rows);
std::string provenance_to_json(const SweepResult& r, const std::string& manifest_hash,
                               std::uint64_t seed);

std::string csv_escape(const std::string& field);

}  // namespace lexiprof

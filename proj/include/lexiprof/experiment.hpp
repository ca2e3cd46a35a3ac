#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lexiprof/metrics.hpp"

namespace lexiprof {

// Items per category for one profile size setting.
struct KAssignment {
  std::string id;
  std::map<ProfileCategory, int> k;

  static KAssignment uniform(int k);  // id "k<k>"

  friend bool operator==(const KAssignment&, const KAssignment&) = default;
};

struct SweepConfig {
  std::vector<int> timepoints_min = {5, 10, 15, 20, 25, 30};
  std::vector<int> k_values = {3, 5, 10, 15, 20};
  std::vector<KAssignment> extra_assignments;  // non-uniform settings
  std::vector<int> window_minutes = {10, 30};
  std::vector<MatchMode> modes = {MatchMode::Exact, MatchMode::Lemmatised};
  std::optional<int> analysis_cutoff_min = 115;
  MarkerPolicy marker_policy = MarkerPolicy::Retain;
  PosMapping pos_mapping;
  std::uint64_t seed = 0;
  // Thresholds and n-gram settings; k and construction minutes are
  // overridden per grid cell.
  ProfileConfig profile_base;

  // Uniform assignments for k_values followed by extra_assignments.
  std::vector<KAssignment> assignments() const;
  ProfileConfig profile_config(int timepoint_min, const KAssignment& a) const;
  WindowOptions window_options() const;

  // Throws Error(InvalidConfig).
  void validate() const;

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct OptimalConfig {
  int timepoint_min = 0;
  std::map<ProfileCategory, int> k;
};

// 10 minutes of speech; 5 adjectives and conjunctions, 10 of the rest.
OptimalConfig paper_optimal_config();

// Sweep restricted to the optimal timepoint and k assignment.
SweepConfig optimal_sweep_config();

// Contiguous [after, after+w), [after+w, after+2w), ... spans ending no
// later than min(duration, cutoff).
std::vector<Span> window_spans(double duration_s, double after_s, double window_s,
                               std::optional<double> cutoff_s);

std::vector<EvaluationWindow> make_windows(const Transcript& t, double after_s, double window_s,
                                           std::optional<double> cutoff_s,
                                           const WindowOptions& opts = {});

struct SweepRecord {
  std::string speaker_id;
  int timepoint_min = 0;
  std::string assignment_id;
  int window_minutes = 0;
  MetricRecord metric;
};

// A grid cell that produced no metrics, with the reason.
struct SkipRecord {
  std::string speaker_id;
  int timepoint_min = 0;
  std::string assignment_id;
  int window_minutes = 0;  // 0 when the whole profile was skipped
  int window_index = -1;   // -1 when not tied to one window
  std::string reason;
};

struct Provenance {
  std::string config_hash;
  std::string corpus_hash;
  std::size_t speakers = 0;
  std::size_t timepoints = 0;
  std::size_t assignments = 0;
  std::size_t window_sizes = 0;
  std::size_t modes = 0;
  std::vector<std::string> assignment_ids;  // grid order
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<SkipRecord> skips;
  Provenance provenance;
};

// Builds each (speaker, timepoint, assignment) profile once and evaluates it
// over every window of every size in every mode. Failing cells become skip
// records. Output order is independent of `jobs`.
SweepResult run_sweep(const std::vector<Transcript>& corpus, const SweepConfig& sc,
                      unsigned jobs = 1);

enum class MetricKind { Recall, Coverage, Cosine };
std::string_view metric_name(MetricKind m);
std::optional<double> metric_value(const MetricRecord& r, MetricKind m);

struct SummaryRow {
  int timepoint_min = 0;
  std::string assignment_id;
  int window_minutes = 0;
  MatchMode mode = MatchMode::Exact;
  int window_index = 0;
  Scope scope;
  MetricKind metric = MetricKind::Recall;
  std::optional<double> mean;
  std::optional<double> stddev;  // population
  std::size_t n_defined = 0;
  std::size_t n_total = 0;
};

// Mean and population standard deviation across speakers per cell.
std::vector<SummaryRow> aggregate(const SweepResult& r);

std::string sweep_config_to_json(const SweepConfig& sc);
SweepConfig sweep_config_from_json(std::string_view json);

}  // namespace lexiprof

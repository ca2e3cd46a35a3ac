#include "lexiprof/experiment.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <tuple>

#include "json_io.hpp"
#include "lexiprof/error.hpp"
#include "lexiprof/ingest.hpp"
#include "lexiprof/text.hpp"

namespace lexiprof {

KAssignment KAssignment::uniform(int k) { return KAssignment{"k" + std::to_string(k), ProfileConfig::uniform_k(k)}; }

std::vector<KAssignment> SweepConfig::assignments() const {
  std::vector<KAssignment> out;
  for (int k : k_values) out.push_back(KAssignment::uniform(k));
  out.insert(out.end(), extra_assignments.begin(), extra_assignments.end());
  return out;
}

ProfileConfig SweepConfig::profile_config(int timepoint_min, const KAssignment& a) const {
  ProfileConfig c = profile_base;
  c.items_per_category = a.k;
  c.construction_minutes = timepoint_min;
  c.marker_policy = marker_policy;
  c.pos_mapping = pos_mapping;
  return c;
}

WindowOptions SweepConfig::window_options() const {
  return WindowOptions{pos_mapping, marker_policy, profile_base.ngram_min_n, profile_base.ngram_max_n};
}

void SweepConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (timepoints_min.empty()) bad("timepoints_min is empty");
  for (std::size_t i = 0; i < timepoints_min.size(); ++i) {
    if (timepoints_min[i] < 1) bad("timepoints must be positive");
    if (i > 0 && timepoints_min[i] <= timepoints_min[i - 1]) bad("timepoints must be strictly increasing");
  }
  if (analysis_cutoff_min && *analysis_cutoff_min <= timepoints_min.back()) {
    bad("analysis_cutoff_min must exceed the last timepoint");
  }
  for (int k : k_values) {
    if (k < 1) bad("k values must be >= 1");
  }
  const auto all = assignments();
  if (all.empty()) bad("no k assignments");
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (all[i].id == all[j].id) bad("duplicate k assignment id '" + all[i].id + "'");
    }
    ProfileConfig probe = profile_config(timepoints_min.front(), all[i]);
    probe.validate();
  }
  if (window_minutes.empty()) bad("window_minutes is empty");
  for (int w : window_minutes) {
    if (w < 1) bad("window sizes must be positive");
  }
  if (modes.empty()) bad("modes is empty");
}

OptimalConfig paper_optimal_config() {
  OptimalConfig o;
  o.timepoint_min = 10;
  o.k = {
      {ProfileCategory::Adjective, 5}, {ProfileCategory::Conjunction, 5}, {ProfileCategory::Adverb, 10},
      {ProfileCategory::Noun, 10},     {ProfileCategory::Pronoun, 10},    {ProfileCategory::Verb, 10},
  };
  return o;
}

SweepConfig optimal_sweep_config() {
  const OptimalConfig o = paper_optimal_config();
  SweepConfig sc;
  sc.timepoints_min = {o.timepoint_min};
  sc.k_values.clear();
  sc.extra_assignments = {KAssignment{"optimal", o.k}};
  return sc;
}

std::vector<Span> window_spans(double duration_s, double after_s, double window_s, std::optional<double> cutoff_s) {
  std::vector<Span> spans;
  if (!(window_s > 0.0)) return spans;
  const double limit = cutoff_s ? std::min(duration_s, *cutoff_s) : duration_s;
  for (std::size_t k = 0;; ++k) {
    const double start = after_s + static_cast<double>(k) * window_s;
    const double end = start + window_s;
    if (end > limit) break;
    spans.push_back(Span{start, end});
  }
  return spans;
}

std::vector<EvaluationWindow> make_windows(const Transcript& t, double after_s, double window_s,
                                           std::optional<double> cutoff_s, const WindowOptions& opts) {
  std::vector<EvaluationWindow> windows;
  int index = 0;
  for (const Span& s : window_spans(t.duration, after_s, window_s, cutoff_s)) {
    windows.push_back(make_evaluation_window(t, s, index++, opts));
  }
  return windows;
}

namespace {

struct SpeakerOutput {
  std::vector<SweepRecord> records;
  std::vector<SkipRecord> skips;
};

SpeakerOutput sweep_speaker(const Transcript& t, const SweepConfig& sc, const std::vector<KAssignment>& assignments) {
  SpeakerOutput out;
  const std::optional<double> cutoff =
      sc.analysis_cutoff_min ? std::optional<double>(*sc.analysis_cutoff_min * 60.0) : std::nullopt;
  const WindowOptions wopts = sc.window_options();

  for (int tp : sc.timepoints_min) {
    // Windows depend on the timepoint and size only; shared across k.
    std::map<int, std::vector<EvaluationWindow>> windows;
    std::map<int, std::string> window_errors;
    for (int ws : sc.window_minutes) {
      try {
        windows[ws] = make_windows(t, tp * 60.0, ws * 60.0, cutoff, wopts);
      } catch (const Error& e) {
        window_errors[ws] = std::string(error_name(e.code()));
      }
    }

    for (const KAssignment& a : assignments) {
      LexicalProfile profile;
      try {
        profile = build_profile(t, sc.profile_config(tp, a));
      } catch (const Error& e) {
        out.skips.push_back({t.speaker_id, tp, a.id, 0, -1, std::string(error_name(e.code()))});
        continue;
      }
      for (int ws : sc.window_minutes) {
        if (auto it = window_errors.find(ws); it != window_errors.end()) {
          out.skips.push_back({t.speaker_id, tp, a.id, ws, -1, it->second});
          continue;
        }
        const auto& wins = windows[ws];
        if (wins.empty()) {
          out.skips.push_back({t.speaker_id, tp, a.id, ws, -1, "NoEvaluationWindows"});
          continue;
        }
        for (const EvaluationWindow& w : wins) {
          if (w.empty) out.skips.push_back({t.speaker_id, tp, a.id, ws, w.index, "EmptyWindow"});
        }
        for (MatchMode mode : sc.modes) {
          for (const EvaluationWindow& w : wins) {
            if (w.empty) continue;
            try {
              for (MetricRecord& r : evaluate_profile(profile, w, mode)) {
                out.records.push_back(SweepRecord{t.speaker_id, tp, a.id, ws, std::move(r)});
              }
            } catch (const Error& e) {
              out.skips.push_back({t.speaker_id, tp, a.id, ws, w.index, std::string(error_name(e.code()))});
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

SweepResult run_sweep(const std::vector<Transcript>& corpus, const SweepConfig& sc, unsigned jobs) {
  sc.validate();
  const std::vector<KAssignment> assignments = sc.assignments();

  std::vector<SpeakerOutput> outputs(corpus.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(corpus.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < corpus.size(); ++i) outputs[i] = sweep_speaker(corpus[i], sc, assignments);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < corpus.size(); i = next++) outputs[i] = sweep_speaker(corpus[i], sc, assignments);
      });
    }
    for (auto& th : pool) th.join();
  }

  SweepResult result;
  for (auto& o : outputs) {
    std::move(o.records.begin(), o.records.end(), std::back_inserter(result.records));
    std::move(o.skips.begin(), o.skips.end(), std::back_inserter(result.skips));
  }

  std::map<std::string, std::size_t> assignment_rank;
  for (std::size_t i = 0; i < assignments.size(); ++i) assignment_rank[assignments[i].id] = i;
  std::stable_sort(result.records.begin(), result.records.end(), [&](const SweepRecord& a, const SweepRecord& b) {
    return std::forward_as_tuple(a.speaker_id, a.timepoint_min, assignment_rank[a.assignment_id], a.window_minutes,
                                 static_cast<int>(a.metric.mode), a.metric.window_index, a.metric.scope.order()) <
           std::forward_as_tuple(b.speaker_id, b.timepoint_min, assignment_rank[b.assignment_id], b.window_minutes,
                                 static_cast<int>(b.metric.mode), b.metric.window_index, b.metric.scope.order());
  });
  std::stable_sort(result.skips.begin(), result.skips.end(), [&](const SkipRecord& a, const SkipRecord& b) {
    return std::forward_as_tuple(a.speaker_id, a.timepoint_min, assignment_rank[a.assignment_id], a.window_minutes,
                                 a.window_index) <
           std::forward_as_tuple(b.speaker_id, b.timepoint_min, assignment_rank[b.assignment_id], b.window_minutes,
                                 b.window_index);
  });

  std::uint64_t corpus_hash = text::fnv1a64("");
  for (const Transcript& t : corpus) corpus_hash = text::fnv1a64(serialize_conllu(t), corpus_hash);
  result.provenance.config_hash = text::hex64(text::fnv1a64(sweep_config_to_json(sc)));
  result.provenance.corpus_hash = text::hex64(corpus_hash);
  result.provenance.speakers = corpus.size();
  result.provenance.timepoints = sc.timepoints_min.size();
  result.provenance.assignments = assignments.size();
  result.provenance.window_sizes = sc.window_minutes.size();
  result.provenance.modes = sc.modes.size();
  for (const KAssignment& a : assignments) result.provenance.assignment_ids.push_back(a.id);
  return result;
}

std::string_view metric_name(MetricKind m) {
  switch (m) {
    case MetricKind::Recall: return "recall";
    case MetricKind::Coverage: return "coverage";
    case MetricKind::Cosine: return "cosine";
  }
  return "recall";
}

std::optional<double> metric_value(const MetricRecord& r, MetricKind m) {
  switch (m) {
    case MetricKind::Recall: return r.recall;
    case MetricKind::Coverage: return r.coverage;
    case MetricKind::Cosine: return r.cosine;
  }
  return std::nullopt;
}

std::vector<SummaryRow> aggregate(const SweepResult& r) {
  // Assignment ids keep first-seen order, which run_sweep makes grid order.
  std::map<std::string, std::size_t> assignment_rank;
  for (const SweepRecord& rec : r.records) assignment_rank.try_emplace(rec.assignment_id, assignment_rank.size());

  using Key = std::tuple<int, std::size_t, int, int, int, int, int>;
  struct Cell {
    SummaryRow row;
    std::vector<double> values;
  };
  std::map<Key, Cell> cells;
  for (const SweepRecord& rec : r.records) {
    const MetricRecord& m = rec.metric;
    for (MetricKind kind : {MetricKind::Recall, MetricKind::Coverage, MetricKind::Cosine}) {
      if (kind == MetricKind::Cosine && m.scope.kind == Scope::Kind::Ngram) continue;
      const Key key{rec.timepoint_min,         assignment_rank[rec.assignment_id], rec.window_minutes,
                    static_cast<int>(m.mode),  m.window_index,                     m.scope.order(),
                    static_cast<int>(kind)};
      auto [it, inserted] = cells.try_emplace(key);
      if (inserted) {
        it->second.row = SummaryRow{rec.timepoint_min, rec.assignment_id, rec.window_minutes, m.mode,
                                    m.window_index,    m.scope,           kind,               {}, {}, 0, 0};
      }
      ++it->second.row.n_total;
      if (auto v = metric_value(m, kind)) it->second.values.push_back(*v);
    }
  }

  std::vector<SummaryRow> rows;
  rows.reserve(cells.size());
  for (auto& [key, cell] : cells) {
    SummaryRow row = cell.row;
    row.n_defined = cell.values.size();
    if (!cell.values.empty()) {
      double sum = 0.0;
      for (double v : cell.values) sum += v;
      const double mean = sum / static_cast<double>(cell.values.size());
      double sq = 0.0;
      for (double v : cell.values) sq += (v - mean) * (v - mean);
      row.mean = mean;
      row.stddev = std::sqrt(sq / static_cast<double>(cell.values.size()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_config_to_json(const SweepConfig& sc) {
  using json_io::Json;
  Json j;
  j["timepoints_min"] = sc.timepoints_min;
  j["k_values"] = sc.k_values;
  Json extra = Json::array();
  for (const KAssignment& a : sc.extra_assignments) extra.push_back(Json{{"id", a.id}, {"k", json_io::k_map_json(a.k)}});
  j["extra_assignments"] = std::move(extra);
  j["window_minutes"] = sc.window_minutes;
  Json modes = Json::array();
  for (MatchMode m : sc.modes) modes.push_back(match_mode_name(m));
  j["modes"] = std::move(modes);
  j["analysis_cutoff_min"] = sc.analysis_cutoff_min ? Json(*sc.analysis_cutoff_min) : Json(nullptr);
  j["marker_policy"] = marker_policy_name(sc.marker_policy);
  j["include_aux"] = sc.pos_mapping.include_aux;
  j["include_propn"] = sc.pos_mapping.include_propn;
  j["seed"] = sc.seed;
  Json base;
  base["vocab_min_count"] = sc.profile_base.vocab_min_count;
  base["ngram_n_range"] = {sc.profile_base.ngram_min_n, sc.profile_base.ngram_max_n};
  base["ngrams_per_n"] = sc.profile_base.ngrams_per_n;
  base["ngram_min_count"] = sc.profile_base.ngram_min_count;
  j["profile"] = std::move(base);
  return j.dump(2) + "\n";
}

SweepConfig sweep_config_from_json(std::string_view json) {
  using json_io::Json;
  const Json j = json_io::parse_document(json, ErrorCode::InvalidConfig);
  json_io::reject_unknown_keys(j,
                               {"timepoints_min", "k_values", "extra_assignments", "window_minutes", "modes",
                                "analysis_cutoff_min", "marker_policy", "include_aux", "include_propn", "seed",
                                "profile"},
                               ErrorCode::InvalidConfig);
  SweepConfig sc;
  try {
    if (j.contains("timepoints_min")) sc.timepoints_min = j["timepoints_min"].get<std::vector<int>>();
    if (j.contains("k_values")) sc.k_values = j["k_values"].get<std::vector<int>>();
    if (j.contains("extra_assignments")) {
      for (const Json& a : j["extra_assignments"]) {
        json_io::reject_unknown_keys(a, {"id", "k"}, ErrorCode::InvalidConfig);
        sc.extra_assignments.push_back(KAssignment{a.at("id").get<std::string>(), json_io::k_map_from(a.at("k"))});
      }
    }
    if (j.contains("window_minutes")) sc.window_minutes = j["window_minutes"].get<std::vector<int>>();
    if (j.contains("modes")) {
      sc.modes.clear();
      for (const Json& m : j["modes"]) {
        const auto mode = parse_match_mode(m.get<std::string>());
        if (!mode) throw Error(ErrorCode::InvalidConfig, "unknown match mode");
        sc.modes.push_back(*mode);
      }
    }
    if (j.contains("analysis_cutoff_min")) {
      const Json& c = j["analysis_cutoff_min"];
      sc.analysis_cutoff_min = c.is_null() ? std::nullopt : std::optional<int>(c.get<int>());
    }
    if (j.contains("marker_policy")) {
      const auto p = parse_marker_policy(j["marker_policy"].get<std::string>());
      if (!p) throw Error(ErrorCode::InvalidConfig, "unknown marker_policy");
      sc.marker_policy = *p;
    }
    if (j.contains("include_aux")) sc.pos_mapping.include_aux = j["include_aux"].get<bool>();
    if (j.contains("include_propn")) sc.pos_mapping.include_propn = j["include_propn"].get<bool>();
    if (j.contains("seed")) sc.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("profile")) {
      const Json& p = j["profile"];
      json_io::reject_unknown_keys(p, {"vocab_min_count", "ngram_n_range", "ngrams_per_n", "ngram_min_count"},
                                   ErrorCode::InvalidConfig);
      sc.profile_base = json_io::config_from(p);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("bad sweep config: ") + e.what());
  }
  sc.validate();
  return sc;
}

}  // namespace lexiprof

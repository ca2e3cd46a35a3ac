// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <tuple>
#include <unistd.h>

#include "lexiprof/cli.hpp"
#include "lexiprof/error.hpp"
#include "lexiprof/experiment.hpp"
#include "lexiprof/ingest.hpp"
#include "lexiprof/metrics.hpp"
#include "lexiprof/synth.hpp"
#include "lexiprof/text.hpp"
#include "support.hpp"

using namespace lexiprof;
using namespace lexiprof::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 6) { return text::format_fixed(v, prec); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// ---- 1. metric oracle equivalence -------------------------------------------

Outcome metric_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  int mismatches = 0;
  double worst = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    // A profile and a window over a shared pool of at most 50 items.
    const int pool = std::uniform_int_distribution<int>(1, 50)(rng);
    LexicalProfile p;
    p.construction_span = Span{0, 600};
    EvaluationWindow w;
    w.span = Span{600, 1200};
    for (ProfileCategory c : kAllCategories) {
      std::vector<int> ids(static_cast<std::size_t>(pool));
      for (int i = 0; i < pool; ++i) ids[static_cast<std::size_t>(i)] = i;
      std::shuffle(ids.begin(), ids.end(), rng);
      const int np = std::uniform_int_distribution<int>(0, std::min(pool, 20))(rng);
      for (int i = 0; i < np; ++i) {
        const std::string item = "w" + std::to_string(ids[static_cast<std::size_t>(i)]);
        p.vocab[c].push_back(VocabEntry{item, "l" + std::to_string(ids[static_cast<std::size_t>(i)] / 3), c,
                                        std::uniform_int_distribution<long>(5, 60)(rng), 0});
      }
      std::bernoulli_distribution present(std::uniform_real_distribution<double>(0, 1)(rng));
      for (int i = 0; i < pool; ++i) {
        if (!present(rng)) continue;
        ItemStat st;
        st.count = std::uniform_int_distribution<long>(1, 40)(rng);
        st.lemma = "l" + std::to_string(i / 3);
        w.items[c]["w" + std::to_string(i)] = st;
      }
    }
    for (MatchMode mode : {MatchMode::Exact, MatchMode::Lemmatised}) {
      const auto records = evaluate_profile(p, w, mode);
      for (const MetricRecord& r : records) {
        if (r.scope.kind != Scope::Kind::Category) continue;
        const ProfileCategory c = r.scope.category;
        std::vector<std::pair<std::string, double>> pv, ev;
        for (const VocabEntry& e : p.vocab[c]) {
          pv.emplace_back(mode == MatchMode::Exact ? e.surface : e.lemma, static_cast<double>(e.count));
        }
        for (const auto& [item, st] : w.items[c]) {
          ev.emplace_back(mode == MatchMode::Exact ? item : st.lemma, static_cast<double>(st.count));
        }
        const OracleMetrics o = oracle_metrics(pv, ev);
        auto check = [&](const std::optional<double>& got, bool defined, double want) {
          if (got.has_value() != defined) {
            ++mismatches;
            return;
          }
          if (got) {
            worst = std::max(worst, std::abs(*got - want));
            if (std::abs(*got - want) > 1e-12) ++mismatches;
          }
        };
        check(r.recall, o.recall_defined, o.recall);
        check(r.coverage, o.coverage_defined, o.coverage);
        check(r.cosine, o.cosine_defined, o.cosine);
      }
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 5.0,
          std::to_string(mismatches) + " mismatches, max |diff| " + sci(worst) + ", " + fmt(secs, 2) + " s"};
}

// ---- 2. top-k / n-gram oracle equivalence ----------------------------------

Outcome topk_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(777);
  int mismatches = 0;
  int nonempty = 0;
  ProfileConfig cfg;  // threshold 5 vocab; 3 n-grams per n in [2,5], threshold 3
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n_tokens = std::uniform_int_distribution<std::size_t>(0, 500)(rng);
    const TokenWindow w = random_window(rng, n_tokens);
    const int k = std::uniform_int_distribution<int>(1, 20)(rng);
    cfg.marker_policy = static_cast<MarkerPolicy>(inst % 3);

    const CategoryCounts counts = [&] {
      try {
        return count_vocabulary(w);
      } catch (const Error&) {
        return CategoryCounts{};
      }
    }();
    for (ProfileCategory c : kAllCategories) {
      auto it = counts.find(c);
      const auto got = it == counts.end() ? std::vector<Candidate<std::string>>{} : select_top_k(it->second, k, cfg.vocab_min_count);
      const auto want = oracle_rank(oracle_vocab(w, c, false), k, cfg.vocab_min_count);
      bool same = got.size() == want.size();
      for (std::size_t i = 0; same && i < got.size(); ++i) {
        same = got[i].key == want[i].key && got[i].count == want[i].count && got[i].first_index == want[i].first;
      }
      mismatches += !same;
      nonempty += !want.empty();
    }

    const auto ngrams = extract_ngrams(w, cfg);
    for (int n = 2; n <= 5; ++n) {
      const auto& got = ngrams.at(n);
      const auto want = oracle_rank(oracle_ngrams(w, n, cfg.marker_policy), cfg.ngrams_per_n, cfg.ngram_min_count);
      bool same = got.size() == want.size();
      for (std::size_t i = 0; same && i < got.size(); ++i) {
        same = got[i].tokens == want[i].key && got[i].count == want[i].count &&
               got[i].first_occurrence_index == want[i].first;
      }
      mismatches += !same;
      nonempty += !want.empty();
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 10.0, std::to_string(mismatches) + " mismatches over 2000 ranked lists (" +
                                              std::to_string(nonempty) + " non-empty), " + fmt(secs, 2) + " s"};
}

// ---- 3. protocol constants ---------------------------------------------------

Outcome protocol_constants() {
  const OptimalConfig o = paper_optimal_config();
  const std::map<ProfileCategory, int> want_k = {
      {ProfileCategory::Adjective, 5}, {ProfileCategory::Conjunction, 5}, {ProfileCategory::Adverb, 10},
      {ProfileCategory::Noun, 10},     {ProfileCategory::Pronoun, 10},    {ProfileCategory::Verb, 10}};
  const SweepConfig sc;
  const ProfileConfig pc;
  const bool ok = o.timepoint_min == 10 && o.k == want_k &&
                  sc.timepoints_min == std::vector<int>{5, 10, 15, 20, 25, 30} &&
                  sc.k_values == std::vector<int>{3, 5, 10, 15, 20} && sc.window_minutes == std::vector<int>{10, 30} &&
                  sc.analysis_cutoff_min == std::optional<int>(115) && pc.items_per_category == ProfileConfig::uniform_k(5) &&
                  pc.vocab_min_count == 5 && pc.ngram_min_n == 2 && pc.ngram_max_n == 5 && pc.ngrams_per_n == 3 &&
                  pc.ngram_min_count == 3;
  return {ok, ok ? "optimal {10 min; ADJ 5, CONJ 5, ADV/NOUN/PRON/VERB 10}; sweep defaults match" : "constant mismatch"};
}

// Per-window aggregate recall (exact) of one profile configuration.
std::vector<double> aggregate_recall_series(const Transcript& t, int timepoint, const std::map<ProfileCategory, int>& k) {
  ProfileConfig cfg;
  cfg.construction_minutes = timepoint;
  cfg.items_per_category = k;
  const LexicalProfile p = build_profile(t, cfg);
  std::vector<double> series;
  for (const EvaluationWindow& w : make_windows(t, timepoint * 60.0, 600.0, 115 * 60.0, WindowOptions::from(cfg))) {
    if (w.empty) continue;
    for (const MetricRecord& r : evaluate_profile(p, w, MatchMode::Exact)) {
      if (r.scope.kind == Scope::Kind::Aggregate && r.recall) series.push_back(*r.recall);
    }
  }
  return series;
}

// ---- 4. stationary stability -------------------------------------------------

Outcome stationary_stability() {
  const auto t0 = Clock::now();
  const OptimalConfig o = paper_optimal_config();
  std::vector<std::vector<double>> series;
  double worst_std = 0.0, worst_slope = 0.0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Transcript t = generate_transcript(SpeakerModel::dutch_default(seed), 120);
    series.push_back(aggregate_recall_series(t, o.timepoint_min, o.k));
    worst_std = std::max(worst_std, population_std(series.back()));
    worst_slope = std::max(worst_slope, std::abs(ls_slope(series.back())));
  }
  std::size_t len = series.front().size();
  for (const auto& s : series) len = std::min(len, s.size());
  std::vector<double> mean(len, 0.0);
  for (const auto& s : series) {
    for (std::size_t i = 0; i < len; ++i) mean[i] += s[i] / static_cast<double>(series.size());
  }
  const double slope = ls_slope(mean);
  const double secs = seconds_since(t0);
  const bool ok = std::abs(slope) <= 0.01 && worst_slope <= 0.01 && worst_std <= 0.10 && secs < 60.0;
  return {ok, "mean-curve slope " + fmt(slope) + "/window over " + std::to_string(len) +
                  " windows (max per-speaker |slope| " + fmt(worst_slope) + "), max per-speaker std " + fmt(worst_std) +
                  ", " + fmt(secs, 2) + " s"};
}

// ---- 5. short-profile degradation -------------------------------------------

Outcome short_profile_degradation() {
  const OptimalConfig o = paper_optimal_config();
  double sum5 = 0.0, sum10 = 0.0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    SpeakerModel m = SpeakerModel::dutch_default(seed);
    m.drift = TopicShift{7.0, 0.5};
    const Transcript t = generate_transcript(m, 120);
    auto mean_of = [](const std::vector<double>& v) {
      double s = 0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    sum5 += mean_of(aggregate_recall_series(t, 5, o.k));
    sum10 += mean_of(aggregate_recall_series(t, 10, o.k));
  }
  const double m5 = sum5 / 30.0, m10 = sum10 / 30.0;
  return {m5 < m10, "mean aggregate recall 5 min " + fmt(m5) + " vs 10 min " + fmt(m10)};
}

std::vector<Transcript> synthetic_corpus(int speakers) {
  std::vector<Transcript> corpus;
  for (int i = 0; i < speakers; ++i) {
    SpeakerModel m = SpeakerModel::dutch_default(100 + static_cast<std::uint64_t>(i));
    if (i % 2 == 1) m.drift = TopicShift{20.0, 0.6};
    corpus.push_back(generate_transcript(m, 70 + 25 * i));
  }
  return corpus;
}

// ---- 6. coverage monotone in k -----------------------------------------------

Outcome coverage_monotonicity() {
  const SweepResult r = run_sweep(synthetic_corpus(4), SweepConfig{}, 4);
  // (speaker, timepoint, window size, mode, window, scope) -> coverage by k
  std::map<std::tuple<std::string, int, int, int, int, int>, std::map<int, std::optional<double>>> cells;
  for (const SweepRecord& rec : r.records) {
    if (rec.metric.scope.kind != Scope::Kind::Category) continue;
    const int k = std::stoi(rec.assignment_id.substr(1));
    cells[{rec.speaker_id, rec.timepoint_min, rec.window_minutes, static_cast<int>(rec.metric.mode),
           rec.metric.window_index, rec.metric.scope.order()}][k] = rec.metric.coverage;
  }
  int violations = 0, comparisons = 0;
  for (const auto& [key, by_k] : cells) {
    std::optional<double> prev;
    for (const auto& [k, cov] : by_k) {
      if (prev && cov) {
        ++comparisons;
        if (*cov < *prev) ++violations;
      }
      if (cov) prev = cov;
    }
  }
  return {violations == 0 && comparisons > 0,
          std::to_string(violations) + " violations in " + std::to_string(comparisons) + " k-steps over " +
              std::to_string(cells.size()) + " cells"};
}

// ---- 7. sweep determinism ----------------------------------------------------

Outcome sweep_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("lexiprof_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::string manifest = "[";
  const auto corpus = synthetic_corpus(3);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const std::string name = "spk" + std::to_string(i) + ".conllu";
    std::ofstream(dir / name) << serialize_conllu(corpus[i]);
    manifest += (i ? ", \"" : "\"") + name + "\"";
  }
  manifest += "]";
  std::ofstream(dir / "manifest.json") << manifest;

  std::ostringstream out, err;
  auto run = [&](const std::string& outdir, const std::string& jobs) {
    return cli::run({"--seed", "42", "--jobs", jobs, "--output", (dir / outdir).string(), "sweep",
                     (dir / "manifest.json").string()},
                    out, err);
  };
  const int rc1 = run("a", "1");
  const int rc2 = run("b", "4");
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream b;
    b << in.rdbuf();
    return b.str();
  };
  const std::string a = slurp(dir / "a" / "rows.csv");
  const std::string b = slurp(dir / "b" / "rows.csv");
  const auto ha = text::fnv1a64(a), hb = text::fnv1a64(b);
  fs::remove_all(dir);
  const bool ok = rc1 == 0 && rc2 == 0 && !a.empty() && ha == hb && a == b;
  return {ok, "exit " + std::to_string(rc1) + "/" + std::to_string(rc2) + ", rows.csv hashes " + text::hex64(ha) +
                  " / " + text::hex64(hb) + " (" + std::to_string(a.size()) + " bytes)" + (err.str().empty() ? "" : ", stderr: " + err.str())};
}

// ---- 8. ingest round trip ------------------------------------------------------

Outcome ingest_round_trip() {
  std::mt19937_64 rng(99);
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    const Transcript t = random_transcript(rng);
    const std::string once = serialize_conllu(t);
    const Transcript back = parse_conllu(once);
    if (serialize_conllu(back) != once || !(back == t)) ++failures;
  }
  int residual = 0;
  std::size_t tokens = 0;
  for (int i = 0; i < 100; ++i) {
    const Transcript t = parse_raw_transcript(random_raw_document(rng));
    for (const Utterance& u : t.utterances) {
      for (const Token& tok : u.tokens) {
        ++tokens;
        const bool bad = tok.surface.find("...") != std::string::npos ||
                         tok.surface.find("\xE2\x80\xA6") != std::string::npos || tok.surface.back() == '-';
        residual += bad;
      }
    }
  }
  return {failures == 0 && residual == 0, std::to_string(failures) + "/100 round-trip failures; " +
                                              std::to_string(residual) + " residual ellipsis/hyphen surfaces in " +
                                              std::to_string(tokens) + " raw tokens"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"metric-oracle-equivalence", metric_oracle},
      {"topk-ngram-oracle-equivalence", topk_oracle},
      {"protocol-constants", protocol_constants},
      {"stationary-stability", stationary_stability},
      {"short-profile-degradation", short_profile_degradation},
      {"coverage-monotone-in-k", coverage_monotonicity},
      {"sweep-determinism", sweep_determinism},
      {"ingest-round-trip", ingest_round_trip},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    failed += !o.pass;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}

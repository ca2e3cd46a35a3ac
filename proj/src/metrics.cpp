#include "lexiprof/metrics.hpp"

#include <cmath>

#include "lexiprof/error.hpp"
#include "lexiprof/ingest.hpp"

namespace lexiprof {

std::string_view match_mode_name(MatchMode m) { return m == MatchMode::Exact ? "EXACT" : "LEMMATISED"; }

std::optional<MatchMode> parse_match_mode(std::string_view name) {
  if (name == "EXACT" || name == "exact") return MatchMode::Exact;
  if (name == "LEMMATISED" || name == "lemmatised" || name == "LEMMATIZED" || name == "lemmatized") {
    return MatchMode::Lemmatised;
  }
  return std::nullopt;
}

namespace {

std::size_t intersection_size(const ItemSet& a, const ItemSet& b) {
  const ItemSet& small = a.size() <= b.size() ? a : b;
  const ItemSet& large = a.size() <= b.size() ? b : a;
  std::size_t n = 0;
  for (const auto& item : small) n += large.count(item);
  return n;
}

}  // namespace

std::optional<double> recall(const ItemSet& profile_items, const ItemSet& window_items) {
  if (profile_items.empty()) return std::nullopt;
  return static_cast<double>(intersection_size(profile_items, window_items)) /
         static_cast<double>(profile_items.size());
}

std::optional<double> coverage(const ItemSet& profile_items, const ItemSet& window_items) {
  if (window_items.empty()) return std::nullopt;
  return static_cast<double>(intersection_size(profile_items, window_items)) /
         static_cast<double>(window_items.size());
}

std::optional<double> cosine(std::span<const double> p, std::span<const double> e) {
  double dot = 0.0, pp = 0.0, ee = 0.0;
  const std::size_t n = std::max(p.size(), e.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < e.size() ? e[i] : 0.0;
    dot += a * b;
    pp += a * a;
    ee += b * b;
  }
  if (pp == 0.0 || ee == 0.0) return std::nullopt;
  return std::clamp(dot / (std::sqrt(pp) * std::sqrt(ee)), 0.0, 1.0);
}

std::optional<double> cosine(const FrequencyMap& p, const FrequencyMap& e) {
  // Merge-walk both sorted maps to lay them out over the union of keys.
  std::vector<double> pv, ev;
  pv.reserve(p.size() + e.size());
  ev.reserve(p.size() + e.size());
  auto pi = p.begin();
  auto ei = e.begin();
  while (pi != p.end() || ei != e.end()) {
    if (ei == e.end() || (pi != p.end() && pi->first < ei->first)) {
      pv.push_back(pi->second);
      ev.push_back(0.0);
      ++pi;
    } else if (pi == p.end() || ei->first < pi->first) {
      pv.push_back(0.0);
      ev.push_back(ei->second);
      ++ei;
    } else {
      pv.push_back(pi->second);
      ev.push_back(ei->second);
      ++pi;
      ++ei;
    }
  }
  return cosine(std::span<const double>(pv), std::span<const double>(ev));
}

ItemSet key_set(const FrequencyMap& m) {
  ItemSet s;
  for (const auto& [k, v] : m) s.insert(s.end(), k);
  return s;
}

std::string join_ngram(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) s += ' ';
    s += parts[i];
  }
  return s;
}

namespace {

const std::string& lemma_key(const std::string& lemma, const std::string& item) {
  if (lemma.empty()) throw Error(ErrorCode::MissingLemmas, "no lemma for '" + item + "'");
  return lemma;
}

const std::vector<std::string>& lemma_seq(const std::vector<std::string>& lemmas, const std::vector<std::string>& tokens) {
  for (const auto& l : lemmas) {
    if (l.empty()) throw Error(ErrorCode::MissingLemmas, "no lemma in n-gram '" + join_ngram(tokens) + "'");
  }
  return lemmas;
}

}  // namespace

FrequencyMap project_items(const std::vector<VocabEntry>& entries, MatchMode mode) {
  FrequencyMap m;
  for (const VocabEntry& e : entries) {
    const std::string& key = mode == MatchMode::Exact ? e.surface : lemma_key(e.lemma, e.surface);
    m[key] += static_cast<double>(e.count);
  }
  return m;
}

FrequencyMap project_items(const ItemCounts& items, MatchMode mode) {
  FrequencyMap m;
  for (const auto& [surface, stat] : items) {
    const std::string& key = mode == MatchMode::Exact ? surface : lemma_key(stat.lemma, surface);
    m[key] += static_cast<double>(stat.count);
  }
  return m;
}

FrequencyMap project_ngrams(const std::vector<NgramEntry>& entries, MatchMode mode) {
  FrequencyMap m;
  for (const NgramEntry& e : entries) {
    const auto& parts = mode == MatchMode::Exact ? e.tokens : lemma_seq(e.lemmas, e.tokens);
    m[join_ngram(parts)] += static_cast<double>(e.count);
  }
  return m;
}

FrequencyMap project_ngrams(const NgramCounts& ngrams, MatchMode mode) {
  FrequencyMap m;
  for (const auto& [tokens, stat] : ngrams) {
    const auto& parts = mode == MatchMode::Exact ? tokens : lemma_seq(stat.lemmas, tokens);
    m[join_ngram(parts)] += static_cast<double>(stat.count);
  }
  return m;
}

WindowOptions WindowOptions::from(const ProfileConfig& c) {
  return WindowOptions{c.pos_mapping, c.marker_policy, c.ngram_min_n, c.ngram_max_n};
}

EvaluationWindow make_evaluation_window(const Transcript& t, Span span, int index, const WindowOptions& opts) {
  const TokenWindow tw = slice(t, span.start, span.end, SpeakerRole::Interviewee);
  EvaluationWindow w;
  w.span = span;
  w.index = index;
  w.empty = std::none_of(tw.tokens.begin(), tw.tokens.end(), [](const Token& tok) { return !tok.is_marker(); });
  w.items = count_vocabulary(tw, opts.pos_mapping);
  for (int n = opts.ngram_min_n; n <= opts.ngram_max_n; ++n) w.ngrams[n] = count_ngrams(tw, n, opts.marker_policy);
  return w;
}

std::string Scope::name() const {
  switch (kind) {
    case Kind::Category: return std::string(category_name(category));
    case Kind::Ngram: return "ngram-" + std::to_string(n);
    case Kind::Aggregate: return "AGGREGATE";
  }
  return "AGGREGATE";
}

int Scope::order() const {
  switch (kind) {
    case Kind::Category: return static_cast<int>(category);
    case Kind::Ngram: return 100 + n;
    case Kind::Aggregate: return 1000;
  }
  return 1000;
}

namespace {

struct Weighted {
  double sum = 0.0;
  double weight = 0.0;
  int missing = 0;

  void add(const std::optional<double>& v, double w) {
    if (!v) {
      ++missing;
      return;
    }
    sum += *v * w;
    weight += w;
  }
  std::optional<double> mean() const {
    if (weight == 0.0) return std::nullopt;
    return sum / weight;
  }
};

double mass(const FrequencyMap& m) {
  double total = 0.0;
  for (const auto& [k, v] : m) total += v;
  return total;
}

}  // namespace

std::vector<MetricRecord> evaluate_profile(const LexicalProfile& p, const EvaluationWindow& w, MatchMode mode,
                                           AggregateWeighting weighting) {
  if (w.span.start < p.construction_span.end) {
    throw Error(ErrorCode::SpanOverlap, "evaluation window overlaps the profile's construction span");
  }
  const bool pooled = weighting == AggregateWeighting::Pooled;
  std::vector<MetricRecord> records;
  Weighted agg_recall, agg_coverage, agg_cosine;

  static const std::vector<VocabEntry> kNoEntries;
  static const ItemCounts kNoItems;
  for (ProfileCategory c : kAllCategories) {
    auto pv = p.vocab.find(c);
    auto wi = w.items.find(c);
    const FrequencyMap pm = project_items(pv == p.vocab.end() ? kNoEntries : pv->second, mode);
    const FrequencyMap em = project_items(wi == w.items.end() ? kNoItems : wi->second, mode);
    const ItemSet ps = key_set(pm), es = key_set(em);

    MetricRecord r;
    r.scope = Scope::of(c);
    r.mode = mode;
    r.window_index = w.index;
    r.recall = recall(ps, es);
    r.coverage = coverage(ps, es);
    r.cosine = cosine(pm, em);
    agg_recall.add(r.recall, pooled ? static_cast<double>(ps.size()) : 1.0);
    agg_coverage.add(r.coverage, pooled ? static_cast<double>(es.size()) : 1.0);
    agg_cosine.add(r.cosine, pooled ? mass(em) : 1.0);
    records.push_back(r);
  }

  static const NgramCounts kNoNgrams;
  for (const auto& [n, entries] : p.ngrams) {
    auto wn = w.ngrams.find(n);
    const ItemSet ps = key_set(project_ngrams(entries, mode));
    const ItemSet es = key_set(project_ngrams(wn == w.ngrams.end() ? kNoNgrams : wn->second, mode));

    MetricRecord r;
    r.scope = Scope::ngram(n);
    r.mode = mode;
    r.window_index = w.index;
    r.recall = recall(ps, es);
    r.coverage = coverage(ps, es);
    agg_recall.add(r.recall, pooled ? static_cast<double>(ps.size()) : 1.0);
    agg_coverage.add(r.coverage, pooled ? static_cast<double>(es.size()) : 1.0);
    records.push_back(r);
  }

  MetricRecord agg;
  agg.scope = Scope::aggregate();
  agg.mode = mode;
  agg.window_index = w.index;
  agg.recall = agg_recall.mean();
  agg.coverage = agg_coverage.mean();
  agg.cosine = agg_cosine.mean();
  agg.missing_recall = agg_recall.missing;
  agg.missing_coverage = agg_coverage.missing;
  agg.missing_cosine = agg_cosine.missing;
  records.push_back(agg);
  return records;
}

}  // namespace lexiprof

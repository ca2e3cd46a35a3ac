#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lexiprof/profile.hpp"

namespace lexiprof {

enum class MatchMode { Exact, Lemmatised };

std::string_view match_mode_name(MatchMode m);
std::optional<MatchMode> parse_match_mode(std::string_view name);

using ItemSet = std::set<std::string>;
using FrequencyMap = std::map<std::string, double>;

// |P ∩ E| / |P|; nullopt when P is empty.
std::optional<double> recall(const ItemSet& profile_items, const ItemSet& window_items);
// |P ∩ E| / |E|; nullopt when E is empty.
std::optional<double> coverage(const ItemSet& profile_items, const ItemSet& window_items);

// Cosine between two frequency vectors indexed over the union of their keys;
// a key missing on one side is a zero coordinate there. nullopt when either
// norm is zero.
std::optional<double> cosine(const FrequencyMap& p, const FrequencyMap& e);
std::optional<double> cosine(std::span<const double> p, std::span<const double> e);

ItemSet key_set(const FrequencyMap& m);

// Vocabulary and n-gram content of an evaluation span. Items carry all
// distinct words (no threshold).
struct EvaluationWindow {
  Span span;
  int index = 0;
  bool empty = false;  // no interviewee words in the span
  CategoryCounts items;
  std::map<int, NgramCounts> ngrams;
};

struct WindowOptions {
  PosMapping pos_mapping;
  MarkerPolicy marker_policy = MarkerPolicy::Retain;
  int ngram_min_n = 2;
  int ngram_max_n = 5;

  static WindowOptions from(const ProfileConfig& c);
};

EvaluationWindow make_evaluation_window(const Transcript& t, Span span, int index,
                                        const WindowOptions& opts);

// Item projections. Exact keys by case-folded surface, Lemmatised by
// case-folded lemma with counts of items sharing a lemma merged. Lemmatised
// throws MissingLemmas if an item has no lemma. Marker positions in n-grams
// keep their marker surface.
FrequencyMap project_items(const std::vector<VocabEntry>& entries, MatchMode mode);
FrequencyMap project_items(const ItemCounts& items, MatchMode mode);
FrequencyMap project_ngrams(const std::vector<NgramEntry>& entries, MatchMode mode);
FrequencyMap project_ngrams(const NgramCounts& ngrams, MatchMode mode);

std::string join_ngram(const std::vector<std::string>& parts);

struct Scope {
  enum class Kind { Category, Ngram, Aggregate };
  Kind kind = Kind::Aggregate;
  ProfileCategory category = ProfileCategory::Noun;
  int n = 0;

  static Scope of(ProfileCategory c) { return {Kind::Category, c, 0}; }
  static Scope ngram(int order) { return {Kind::Ngram, ProfileCategory::Noun, order}; }
  static Scope aggregate() { return {}; }

  // "NOUN", "ngram-3", "AGGREGATE"
  std::string name() const;
  // Sort key: categories, then n-gram orders, then the aggregate.
  int order() const;

  friend bool operator==(const Scope& a, const Scope& b) {
    return a.kind == b.kind && a.order() == b.order();
  }
};

struct MetricRecord {
  std::optional<double> recall;
  std::optional<double> coverage;
  std::optional<double> cosine;
  Scope scope;
  MatchMode mode = MatchMode::Exact;
  int window_index = 0;
  // Aggregate only: scopes whose value was undefined and left out of the mean.
  int missing_recall = 0;
  int missing_coverage = 0;
  int missing_cosine = 0;
};

enum class AggregateWeighting {
  Unweighted,  // plain mean over defined scopes
  Pooled,      // recall weighted by |P|, coverage and cosine by |E|
};

// One record per category, one per n-gram order, then the aggregate.
// Throws SpanOverlap when the window starts before the construction span
// ends.
std::vector<MetricRecord> evaluate_profile(const LexicalProfile& p, const EvaluationWindow& w,
                                           MatchMode mode,
                                           AggregateWeighting weighting = AggregateWeighting::Unweighted);

}  // namespace lexiprof

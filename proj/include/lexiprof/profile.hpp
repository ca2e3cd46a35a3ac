#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "lexiprof/annotate.hpp"
#include "lexiprof/transcript.hpp"

namespace lexiprof {

// How PAUSE/BREAK tokens take part in n-gram extraction.
enum class MarkerPolicy {
  Retain,        // markers are ordinary tokens
  DropToken,     // markers removed before windowing
  ExcludeNgram,  // counted, then any n-gram containing a marker is discarded
};

std::string_view marker_policy_name(MarkerPolicy p);
std::optional<MarkerPolicy> parse_marker_policy(std::string_view name);

struct ProfileConfig {
  std::map<ProfileCategory, int> items_per_category = uniform_k(5);
  int vocab_min_count = 5;
  int ngram_min_n = 2;
  int ngram_max_n = 5;
  int ngrams_per_n = 3;
  int ngram_min_count = 3;
  MarkerPolicy marker_policy = MarkerPolicy::Retain;
  int construction_minutes = 10;
  PosMapping pos_mapping;

  static std::map<ProfileCategory, int> uniform_k(int k);

  // Throws Error(InvalidConfig).
  void validate() const;
  double construction_seconds() const { return construction_minutes * 60.0; }

  friend bool operator==(const ProfileConfig&, const ProfileConfig&) = default;
};

struct ItemStat {
  long count = 0;
  std::size_t first_index = 0;
  std::string lemma;  // case-folded lemma of the first occurrence
};

// Keyed by case-folded surface.
using ItemCounts = std::map<std::string, ItemStat>;
using CategoryCounts = std::map<ProfileCategory, ItemCounts>;

using NgramKey = std::vector<std::string>;

struct NgramStat {
  long count = 0;
  std::size_t first_index = 0;
  std::vector<std::string> lemmas;  // per position, from the first occurrence
};

using NgramCounts = std::map<NgramKey, NgramStat>;

// One rankable item. Ranking is count descending, then first occurrence
// ascending, then key ascending.
template <typename Key>
struct Candidate {
  Key key;
  long count = 0;
  std::size_t first_index = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

template <typename Key>
bool ranks_before(const Candidate<Key>& a, const Candidate<Key>& b) {
  return std::tie(b.count, a.first_index, a.key) < std::tie(a.count, b.first_index, b.key);
}

template <typename Key>
std::vector<Candidate<Key>> select_top_k(std::vector<Candidate<Key>> items, int k, long min_count) {
  std::erase_if(items, [&](const Candidate<Key>& c) { return c.count < min_count; });
  std::sort(items.begin(), items.end(), ranks_before<Key>);
  if (items.size() > static_cast<std::size_t>(k)) items.resize(static_cast<std::size_t>(k));
  return items;
}

std::vector<Candidate<std::string>> select_top_k(const ItemCounts& freqs, int k, long min_count);

// Per-category counts of case-folded surfaces. Markers and tokens outside
// the six categories are skipped. Throws UntaggedInput when the window has
// words but none of them carry a tag.
CategoryCounts count_vocabulary(const TokenWindow& w, PosMapping mapping = {});

// All n-grams of order n within utterances, under the marker policy.
NgramCounts count_ngrams(const TokenWindow& w, int n, MarkerPolicy policy);

struct VocabEntry {
  std::string surface;  // case-folded
  std::string lemma;
  ProfileCategory category = ProfileCategory::Noun;
  long count = 0;
  std::size_t first_occurrence_index = 0;

  friend bool operator==(const VocabEntry&, const VocabEntry&) = default;
};

struct NgramEntry {
  std::vector<std::string> tokens;
  std::vector<std::string> lemmas;
  int n = 0;
  long count = 0;
  std::size_t first_occurrence_index = 0;

  friend bool operator==(const NgramEntry&, const NgramEntry&) = default;
};

std::map<int, std::vector<NgramEntry>> extract_ngrams(const TokenWindow& w, const ProfileConfig& config);

struct LexicalProfile {
  std::string speaker_id;
  Span construction_span;
  ProfileConfig config;
  std::map<ProfileCategory, std::vector<VocabEntry>> vocab;
  std::map<int, std::vector<NgramEntry>> ngrams;

  friend bool operator==(const LexicalProfile&, const LexicalProfile&) = default;
};

// Profile from the interviewee's speech in [0, construction_minutes).
// Throws EmptyConstructionWindow when the transcript is shorter than the
// construction span or the interviewee says nothing in it.
LexicalProfile build_profile(const Transcript& t, const ProfileConfig& config);

std::string profile_to_json(const LexicalProfile& p);
LexicalProfile profile_from_json(std::string_view json);

std::string config_to_json(const ProfileConfig& c);
ProfileConfig config_from_json(std::string_view json);

}  // namespace lexiprof

#pragma once

// Random instance generators and brute-force oracles shared by the unit and
// acceptance suites. The oracles deliberately avoid the library's counting,
// ranking and metric code: linear scans, selection sort, explicit unions.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "lexiprof/annotate.hpp"
#include "lexiprof/profile.hpp"
#include "lexiprof/transcript.hpp"

namespace lexiprof::testing {

inline std::string ascii_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// ---- generators -------------------------------------------------------------

inline Upos random_upos(std::mt19937_64& rng) {
  return kAllUpos[std::uniform_int_distribution<std::size_t>(0, kAllUpos.size() - 1)(rng)];
}

// Short ASCII words over a small alphabet so counts collide often.
inline std::string random_word(std::mt19937_64& rng, int alphabet = 8) {
  static const char* kWords[] = {"ik", "de", "man", "huis", "en", "was", "toen", "groot",
                                 "Ik", "De", "Man", "goed", "dat", "wel", "boot", "MAN"};
  return kWords[std::uniform_int_distribution<int>(0, std::min(alphabet, 16) - 1)(rng)];
}

// A tagged window with `n_tokens` tokens split into utterances; tags are
// drawn from a fixed per-word table so the same surface mostly keeps its tag.
inline TokenWindow random_window(std::mt19937_64& rng, std::size_t n_tokens, double marker_rate = 0.08) {
  TokenWindow w;
  w.speaker_id = "rand";
  w.span = Span{0.0, 600.0};
  std::bernoulli_distribution marker(marker_rate), flip(0.1), boundary(0.12);
  const int alphabet = std::uniform_int_distribution<int>(3, 16)(rng);
  for (std::size_t i = 0; i < n_tokens; ++i) {
    if (i == 0 || boundary(rng)) w.utterance_starts.push_back(w.tokens.size());
    if (marker(rng)) {
      w.tokens.push_back(flip(rng) ? Token::brk() : Token::pause());
      continue;
    }
    const std::string s = random_word(rng, alphabet);
    const std::string folded = ascii_lower(s);
    Upos pos = static_cast<Upos>(static_cast<int>(folded.size() * 7 + folded[0]) % 17);
    if (flip(rng)) pos = random_upos(rng);
    if (pos == Upos::X) pos = Upos::NOUN;
    w.tokens.push_back(Token::word(s, folded.substr(0, std::max<std::size_t>(2, folded.size() - 1)), pos));
  }
  return w;
}

// Random transcript with the full range of features the CoNLL-U writer has
// to preserve: all roles, fractional times, markers, missing lemmas,
// non-ASCII surfaces.
inline Transcript random_transcript(std::mt19937_64& rng) {
  static const char* kSurfaces[] = {"ik", "Huis", "één", "café", "ZEE", "wo", "'t", "zo'n", ",", "ÄÖ", "x-y", "ρ"};
  Transcript t;
  t.speaker_id = "spk" + std::to_string(rng() % 1000);
  const int n_utt = std::uniform_int_distribution<int>(0, 25)(rng);
  double time = 0.0;
  std::uniform_real_distribution<double> step(0.0, 90.0);
  for (int i = 0; i < n_utt; ++i) {
    if (rng() % 4 != 0) time += step(rng);
    Utterance u;
    u.speaker_role = static_cast<SpeakerRole>(rng() % 3);
    u.start_time = time;
    const int n_tok = std::uniform_int_distribution<int>(1, 12)(rng);
    for (int k = 0; k < n_tok; ++k) {
      const auto r = rng() % 10;
      if (r == 0) {
        u.tokens.push_back(Token::pause());
      } else if (r == 1) {
        u.tokens.push_back(Token::brk());
      } else {
        std::string s = kSurfaces[rng() % std::size(kSurfaces)];
        std::string lemma = rng() % 5 == 0 ? std::string() : ascii_lower(s);
        Upos pos = random_upos(rng);
        u.tokens.push_back(Token::word(s, lemma, pos));
      }
    }
    t.utterances.push_back(std::move(u));
  }
  t.duration = time + (rng() % 2 ? step(rng) : 0.0);
  return t;
}

// Raw transcript text exercising ellipses, hyphens and punctuation.
inline std::string random_raw_document(std::mt19937_64& rng) {
  static const char* kPieces[] = {"ik", "was", "...", "daar", "wo-", "-", "woning", "\xE2\x80\xA6", "ja...", "...nee",
                                  "dus-", "a...b", "....", "zo,", "echt?", "wo--", "x-y", "(hm)", "--", "mooi...-"};
  std::string doc = "#speaker-id: r" + std::to_string(rng() % 100) + "\n";
  int minute = 0;
  const int lines = std::uniform_int_distribution<int>(0, 30)(rng);
  for (int i = 0; i < lines; ++i) {
    if (rng() % 5 == 0) {
      minute += static_cast<int>(rng() % 6);
      char buf[32];
      std::snprintf(buf, sizeof buf, "[%02d:%02d:00]\n", minute / 60, minute % 60);
      doc += buf;
      continue;
    }
    doc += rng() % 3 == 0 ? "INT:" : "SPK:";
    const int words = std::uniform_int_distribution<int>(0, 8)(rng);
    for (int w = 0; w < words; ++w) {
      doc += ' ';
      doc += kPieces[rng() % std::size(kPieces)];
    }
    doc += rng() % 4 == 0 ? "\r\n" : "\n";
    if (rng() % 6 == 0) doc += "\n";
  }
  return doc;
}

// ---- oracles ----------------------------------------------------------------

inline int oracle_category(Upos p, bool include_aux) {
  // Returns the ProfileCategory as int or -1.
  if (p == Upos::NOUN) return static_cast<int>(ProfileCategory::Noun);
  if (p == Upos::PRON) return static_cast<int>(ProfileCategory::Pronoun);
  if (p == Upos::ADJ) return static_cast<int>(ProfileCategory::Adjective);
  if (p == Upos::CCONJ || p == Upos::SCONJ) return static_cast<int>(ProfileCategory::Conjunction);
  if (p == Upos::VERB || (include_aux && p == Upos::AUX)) return static_cast<int>(ProfileCategory::Verb);
  if (p == Upos::ADV) return static_cast<int>(ProfileCategory::Adverb);
  return -1;
}

template <typename Key>
struct OracleItem {
  Key key;
  long count = 0;
  std::size_t first = 0;
};

// Selection sort with an explicitly spelled-out ordering.
template <typename Key>
std::vector<OracleItem<Key>> oracle_rank(std::vector<OracleItem<Key>> items, int k, long min_count) {
  std::vector<OracleItem<Key>> pool;
  for (auto& it : items) {
    if (it.count >= min_count) pool.push_back(it);
  }
  std::vector<OracleItem<Key>> out;
  while (!pool.empty() && static_cast<int>(out.size()) < k) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pool.size(); ++i) {
      const auto& a = pool[i];
      const auto& b = pool[best];
      bool better = false;
      if (a.count != b.count) {
        better = a.count > b.count;
      } else if (a.first != b.first) {
        better = a.first < b.first;
      } else {
        better = a.key < b.key;
      }
      if (better) best = i;
    }
    out.push_back(pool[best]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

inline std::vector<OracleItem<std::string>> oracle_vocab(const TokenWindow& w, ProfileCategory cat, bool include_aux) {
  std::vector<OracleItem<std::string>> items;
  for (std::size_t i = 0; i < w.tokens.size(); ++i) {
    const Token& t = w.tokens[i];
    if (t.marker != Marker::None) continue;
    if (oracle_category(t.pos, include_aux) != static_cast<int>(cat)) continue;
    const std::string key = ascii_lower(t.surface);
    bool found = false;
    for (auto& it : items) {
      if (it.key == key) {
        ++it.count;
        found = true;
      }
    }
    if (!found) items.push_back({key, 1, i});
  }
  return items;
}

inline std::vector<OracleItem<std::vector<std::string>>> oracle_ngrams(const TokenWindow& w, int n, MarkerPolicy policy) {
  std::vector<OracleItem<std::vector<std::string>>> items;
  for (std::size_t u = 0; u < w.utterance_starts.size(); ++u) {
    const std::size_t first = w.utterance_starts[u];
    const std::size_t last = u + 1 < w.utterance_starts.size() ? w.utterance_starts[u + 1] : w.tokens.size();
    std::vector<std::size_t> idx;
    for (std::size_t i = first; i < last; ++i) {
      if (policy == MarkerPolicy::DropToken && w.tokens[i].marker != Marker::None) continue;
      idx.push_back(i);
    }
    for (std::size_t s = 0; s + static_cast<std::size_t>(n) <= idx.size(); ++s) {
      std::vector<std::string> key;
      bool marker = false;
      for (int k = 0; k < n; ++k) {
        const Token& t = w.tokens[idx[s + static_cast<std::size_t>(k)]];
        marker = marker || t.marker != Marker::None;
        key.push_back(t.marker != Marker::None ? t.surface : ascii_lower(t.surface));
      }
      if (marker && policy == MarkerPolicy::ExcludeNgram) continue;
      bool found = false;
      for (auto& it : items) {
        if (it.key == key) {
          ++it.count;
          found = true;
        }
      }
      if (!found) items.push_back({key, 1, idx[s]});
    }
  }
  return items;
}

// Recall, coverage and cosine computed directly from the definitions over
// explicitly enumerated item lists (keys may repeat; duplicates are merged
// by summing counts first).
struct OracleMetrics {
  bool recall_defined = false, coverage_defined = false, cosine_defined = false;
  double recall = 0, coverage = 0, cosine = 0;
};

inline OracleMetrics oracle_metrics(const std::vector<std::pair<std::string, double>>& p,
                                    const std::vector<std::pair<std::string, double>>& e) {
  std::vector<std::string> universe;
  auto add = [&](const std::string& k) {
    if (std::find(universe.begin(), universe.end(), k) == universe.end()) universe.push_back(k);
  };
  for (const auto& [k, v] : p) add(k);
  for (const auto& [k, v] : e) add(k);
  std::vector<double> pv(universe.size(), 0.0), ev(universe.size(), 0.0);
  std::vector<bool> in_p(universe.size(), false), in_e(universe.size(), false);
  for (std::size_t i = 0; i < universe.size(); ++i) {
    for (const auto& [k, v] : p) {
      if (k == universe[i]) {
        pv[i] += v;
        in_p[i] = true;
      }
    }
    for (const auto& [k, v] : e) {
      if (k == universe[i]) {
        ev[i] += v;
        in_e[i] = true;
      }
    }
  }
  std::size_t np = 0, ne = 0, both = 0;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    np += in_p[i];
    ne += in_e[i];
    both += in_p[i] && in_e[i];
  }
  OracleMetrics m;
  if (np > 0) {
    m.recall_defined = true;
    m.recall = static_cast<double>(both) / static_cast<double>(np);
  }
  if (ne > 0) {
    m.coverage_defined = true;
    m.coverage = static_cast<double>(both) / static_cast<double>(ne);
  }
  double dot = 0, sp = 0, se = 0;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    dot += pv[i] * ev[i];
    sp += pv[i] * pv[i];
    se += ev[i] * ev[i];
  }
  if (sp > 0 && se > 0) {
    m.cosine_defined = true;
    m.cosine = dot / (std::sqrt(sp) * std::sqrt(se));
  }
  return m;
}

// Least-squares slope of y over x = 0, 1, 2, ...
inline double ls_slope(const std::vector<double>& y) {
  const double n = static_cast<double>(y.size());
  if (y.size() < 2) return 0.0;
  const double mx = (n - 1) / 2.0;
  double my = 0;
  for (double v : y) my += v;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dx = static_cast<double>(i) - mx;
    sxy += dx * (y[i] - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

inline double population_std(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double m = 0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace lexiprof::testing

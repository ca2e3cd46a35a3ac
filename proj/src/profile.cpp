#include "lexiprof/profile.hpp"

#include "json_io.hpp"
#include "lexiprof/error.hpp"
#include "lexiprof/ingest.hpp"
#include "lexiprof/text.hpp"

namespace lexiprof {

std::string_view marker_policy_name(MarkerPolicy p) {
  switch (p) {
    case MarkerPolicy::Retain: return "RETAIN";
    case MarkerPolicy::DropToken: return "DROP_TOKEN";
    case MarkerPolicy::ExcludeNgram: return "EXCLUDE_NGRAM";
  }
  return "RETAIN";
}

std::optional<MarkerPolicy> parse_marker_policy(std::string_view name) {
  for (MarkerPolicy p : {MarkerPolicy::Retain, MarkerPolicy::DropToken, MarkerPolicy::ExcludeNgram}) {
    if (marker_policy_name(p) == name) return p;
  }
  return std::nullopt;
}

std::map<ProfileCategory, int> ProfileConfig::uniform_k(int k) {
  std::map<ProfileCategory, int> m;
  for (ProfileCategory c : kAllCategories) m[c] = k;
  return m;
}

void ProfileConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  for (ProfileCategory c : kAllCategories) {
    auto it = items_per_category.find(c);
    if (it == items_per_category.end()) bad("items_per_category lacks " + std::string(category_name(c)));
    if (it->second < 1) bad("items_per_category must be >= 1");
  }
  if (vocab_min_count < 1) bad("vocab_min_count must be >= 1");
  if (ngram_min_n < 2) bad("ngram n range must start at 2 or above");
  if (ngram_max_n < ngram_min_n) bad("ngram n range is empty");
  if (ngrams_per_n < 1) bad("ngrams_per_n must be >= 1");
  if (ngram_min_count < 1) bad("ngram_min_count must be >= 1");
  if (construction_minutes < 1) bad("construction_minutes must be >= 1");
}

std::vector<Candidate<std::string>> select_top_k(const ItemCounts& freqs, int k, long min_count) {
  std::vector<Candidate<std::string>> items;
  items.reserve(freqs.size());
  for (const auto& [key, stat] : freqs) items.push_back({key, stat.count, stat.first_index});
  return select_top_k(std::move(items), k, min_count);
}

CategoryCounts count_vocabulary(const TokenWindow& w, PosMapping mapping) {
  CategoryCounts counts;
  bool any_word = false;
  bool any_tagged = false;
  for (std::size_t i = 0; i < w.tokens.size(); ++i) {
    const Token& tok = w.tokens[i];
    if (tok.is_marker()) continue;
    any_word = true;
    if (tok.pos != Upos::X) any_tagged = true;
    const auto cat = map_pos(tok.pos, mapping);
    if (!cat) continue;
    auto [it, inserted] = counts[*cat].try_emplace(text::fold_case(tok.surface));
    if (inserted) {
      it->second.first_index = i;
      it->second.lemma = text::fold_case(tok.lemma);
    }
    ++it->second.count;
  }
  if (any_word && !any_tagged) {
    throw Error(ErrorCode::UntaggedInput, "window tokens carry no POS tags; run a tagger first");
  }
  return counts;
}

NgramCounts count_ngrams(const TokenWindow& w, int n, MarkerPolicy policy) {
  NgramCounts counts;
  if (n < 1) return counts;
  std::vector<std::size_t> seq;
  for (std::size_t u = 0; u < w.utterance_count(); ++u) {
    const auto [first, last] = w.utterance_range(u);
    seq.clear();
    for (std::size_t i = first; i < last; ++i) {
      if (policy == MarkerPolicy::DropToken && w.tokens[i].is_marker()) continue;
      seq.push_back(i);
    }
    const auto order = static_cast<std::size_t>(n);
    for (std::size_t s = 0; s + order <= seq.size(); ++s) {
      NgramKey key;
      std::vector<std::string> lemmas;
      bool has_marker = false;
      for (std::size_t k = s; k < s + order; ++k) {
        const Token& tok = w.tokens[seq[k]];
        if (tok.is_marker()) {
          has_marker = true;
          key.push_back(tok.surface);
          lemmas.push_back(tok.surface);
        } else {
          key.push_back(text::fold_case(tok.surface));
          lemmas.push_back(text::fold_case(tok.lemma));
        }
      }
      if (has_marker && policy == MarkerPolicy::ExcludeNgram) continue;
      auto [it, inserted] = counts.try_emplace(std::move(key));
      if (inserted) {
        it->second.first_index = seq[s];
        it->second.lemmas = std::move(lemmas);
      }
      ++it->second.count;
    }
  }
  return counts;
}

std::map<int, std::vector<NgramEntry>> extract_ngrams(const TokenWindow& w, const ProfileConfig& config) {
  config.validate();
  std::map<int, std::vector<NgramEntry>> result;
  for (int n = config.ngram_min_n; n <= config.ngram_max_n; ++n) {
    const NgramCounts counts = count_ngrams(w, n, config.marker_policy);
    std::vector<Candidate<NgramKey>> candidates;
    candidates.reserve(counts.size());
    for (const auto& [key, stat] : counts) candidates.push_back({key, stat.count, stat.first_index});
    auto& entries = result[n];
    for (auto& c : select_top_k(std::move(candidates), config.ngrams_per_n, config.ngram_min_count)) {
      entries.push_back(NgramEntry{c.key, counts.at(c.key).lemmas, n, c.count, c.first_index});
    }
  }
  return result;
}

LexicalProfile build_profile(const Transcript& t, const ProfileConfig& config) {
  config.validate();
  const double end = config.construction_seconds();
  if (t.duration < end) {
    throw Error(ErrorCode::EmptyConstructionWindow,
                "transcript '" + t.speaker_id + "' is shorter than the " +
                    std::to_string(config.construction_minutes) + "-minute construction window");
  }
  const TokenWindow w = slice(t, 0.0, end, SpeakerRole::Interviewee);
  const bool has_words = std::any_of(w.tokens.begin(), w.tokens.end(), [](const Token& tok) { return !tok.is_marker(); });
  if (!has_words) {
    throw Error(ErrorCode::EmptyConstructionWindow,
                "no interviewee speech in the first " + std::to_string(config.construction_minutes) +
                    " minutes of '" + t.speaker_id + "'");
  }

  LexicalProfile p;
  p.speaker_id = t.speaker_id;
  p.construction_span = w.span;
  p.config = config;
  const CategoryCounts counts = count_vocabulary(w, config.pos_mapping);
  for (ProfileCategory c : kAllCategories) {
    auto& entries = p.vocab[c];
    auto it = counts.find(c);
    if (it == counts.end()) continue;
    for (const auto& cand : select_top_k(it->second, config.items_per_category.at(c), config.vocab_min_count)) {
      entries.push_back(VocabEntry{cand.key, it->second.at(cand.key).lemma, c, cand.count, cand.first_index});
    }
  }
  p.ngrams = extract_ngrams(w, config);
  return p;
}

// --- JSON -------------------------------------------------------------------

namespace json_io {

Json parse_document(std::string_view text, ErrorCode code) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(code, std::string("invalid JSON: ") + e.what());
  }
}

void reject_unknown_keys(const Json& j, std::initializer_list<std::string_view> allowed, ErrorCode code) {
  if (!j.is_object()) throw Error(code, "expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(code, "unknown key '" + key + "'");
    }
  }
}

Json k_map_json(const std::map<ProfileCategory, int>& k) {
  Json j = Json::object();
  for (ProfileCategory c : kAllCategories) {
    if (auto it = k.find(c); it != k.end()) j[std::string(category_name(c))] = it->second;
  }
  return j;
}

std::map<ProfileCategory, int> k_map_from(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "k map must be an object");
  std::map<ProfileCategory, int> k;
  for (const auto& [key, value] : j.items()) {
    const auto c = parse_category(key);
    if (!c) throw Error(ErrorCode::InvalidConfig, "unknown category '" + key + "'");
    k[*c] = value.get<int>();
  }
  return k;
}

Json config_json(const ProfileConfig& c) {
  Json j;
  j["items_per_category"] = k_map_json(c.items_per_category);
  j["vocab_min_count"] = c.vocab_min_count;
  j["ngram_n_range"] = {c.ngram_min_n, c.ngram_max_n};
  j["ngrams_per_n"] = c.ngrams_per_n;
  j["ngram_min_count"] = c.ngram_min_count;
  j["marker_policy"] = marker_policy_name(c.marker_policy);
  j["construction_minutes"] = c.construction_minutes;
  j["include_aux"] = c.pos_mapping.include_aux;
  j["include_propn"] = c.pos_mapping.include_propn;
  return j;
}

ProfileConfig config_from(const Json& j) {
  reject_unknown_keys(j,
                      {"items_per_category", "vocab_min_count", "ngram_n_range", "ngrams_per_n", "ngram_min_count",
                       "marker_policy", "construction_minutes", "include_aux", "include_propn"},
                      ErrorCode::InvalidConfig);
  ProfileConfig c;
  try {
    if (j.contains("items_per_category")) {
      const Json& k = j["items_per_category"];
      if (k.is_number_integer()) {
        c.items_per_category = ProfileConfig::uniform_k(k.get<int>());
      } else {
        for (const auto& [cat, v] : k_map_from(k)) c.items_per_category[cat] = v;
      }
    }
    if (j.contains("vocab_min_count")) c.vocab_min_count = j["vocab_min_count"].get<int>();
    if (j.contains("ngram_n_range")) {
      const Json& r = j["ngram_n_range"];
      if (!r.is_array() || r.size() != 2) throw Error(ErrorCode::InvalidConfig, "ngram_n_range must be [low, high]");
      c.ngram_min_n = r[0].get<int>();
      c.ngram_max_n = r[1].get<int>();
    }
    if (j.contains("ngrams_per_n")) c.ngrams_per_n = j["ngrams_per_n"].get<int>();
    if (j.contains("ngram_min_count")) c.ngram_min_count = j["ngram_min_count"].get<int>();
    if (j.contains("marker_policy")) {
      const auto p = parse_marker_policy(j["marker_policy"].get<std::string>());
      if (!p) throw Error(ErrorCode::InvalidConfig, "unknown marker_policy");
      c.marker_policy = *p;
    }
    if (j.contains("construction_minutes")) c.construction_minutes = j["construction_minutes"].get<int>();
    if (j.contains("include_aux")) c.pos_mapping.include_aux = j["include_aux"].get<bool>();
    if (j.contains("include_propn")) c.pos_mapping.include_propn = j["include_propn"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("bad profile config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace json_io

std::string config_to_json(const ProfileConfig& c) { return json_io::config_json(c).dump(2) + "\n"; }

ProfileConfig config_from_json(std::string_view json) {
  return json_io::config_from(json_io::parse_document(json, ErrorCode::InvalidConfig));
}

std::string profile_to_json(const LexicalProfile& p) {
  using json_io::Json;
  Json j;
  j["speaker_id"] = p.speaker_id;
  j["construction_span"] = {p.construction_span.start, p.construction_span.end};
  j["config"] = json_io::config_json(p.config);
  Json vocab = Json::object();
  for (ProfileCategory c : kAllCategories) {
    Json list = Json::array();
    if (auto it = p.vocab.find(c); it != p.vocab.end()) {
      for (const VocabEntry& e : it->second) {
        list.push_back(Json{{"surface", e.surface},
                            {"lemma", e.lemma},
                            {"count", e.count},
                            {"first_occurrence_index", e.first_occurrence_index}});
      }
    }
    vocab[std::string(category_name(c))] = std::move(list);
  }
  j["vocab"] = std::move(vocab);
  Json ngrams = Json::object();
  for (const auto& [n, entries] : p.ngrams) {
    Json list = Json::array();
    for (const NgramEntry& e : entries) {
      list.push_back(Json{{"tokens", e.tokens},
                          {"lemmas", e.lemmas},
                          {"count", e.count},
                          {"first_occurrence_index", e.first_occurrence_index}});
    }
    ngrams[std::to_string(n)] = std::move(list);
  }
  j["ngrams"] = std::move(ngrams);
  return j.dump(2) + "\n";
}

LexicalProfile profile_from_json(std::string_view json) {
  using json_io::Json;
  const Json j = json_io::parse_document(json, ErrorCode::ParseError);
  LexicalProfile p;
  try {
    json_io::reject_unknown_keys(j, {"speaker_id", "construction_span", "config", "vocab", "ngrams"},
                                 ErrorCode::ParseError);
    p.speaker_id = j.at("speaker_id").get<std::string>();
    const Json& span = j.at("construction_span");
    p.construction_span = Span{span.at(0).get<double>(), span.at(1).get<double>()};
    p.config = json_io::config_from(j.at("config"));
    for (const auto& [name, list] : j.at("vocab").items()) {
      const auto c = parse_category(name);
      if (!c) throw Error(ErrorCode::ParseError, "unknown category '" + name + "' in profile");
      auto& entries = p.vocab[*c];
      for (const Json& e : list) {
        entries.push_back(VocabEntry{e.at("surface").get<std::string>(), e.at("lemma").get<std::string>(), *c,
                                     e.at("count").get<long>(), e.at("first_occurrence_index").get<std::size_t>()});
      }
    }
    for (const auto& [key, list] : j.at("ngrams").items()) {
      const int n = std::stoi(key);
      auto& entries = p.ngrams[n];
      for (const Json& e : list) {
        entries.push_back(NgramEntry{e.at("tokens").get<std::vector<std::string>>(),
                                     e.at("lemmas").get<std::vector<std::string>>(), n, e.at("count").get<long>(),
                                     e.at("first_occurrence_index").get<std::size_t>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad profile JSON: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::ParseError, "bad n-gram order in profile JSON");
  }
  return p;
}

}  // namespace lexiprof

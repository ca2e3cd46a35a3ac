#include "lexiprof/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "json_io.hpp"
#include "lexiprof/error.hpp"

namespace lexiprof {

namespace {

std::vector<SynthWord> words(Upos pos, std::initializer_list<std::pair<const char*, const char*>> list) {
  std::vector<SynthWord> out;
  for (const auto& [surface, lemma] : list) out.push_back(SynthWord{surface, lemma, pos});
  return out;
}

std::vector<SynthWord> same(Upos pos, std::initializer_list<const char*> list) {
  std::vector<SynthWord> out;
  for (const char* w : list) out.push_back(SynthWord{w, w, pos});
  return out;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) from the top 53 bits; identical on every platform.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Index drawn from an unnormalised cumulative weight table.
  std::size_t pick(const std::vector<double>& cdf) {
    const double u = uniform() * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
  }

  // 1 + Geometric, mean `mean`.
  int length(double mean) {
    if (mean <= 1.0) return 1;
    const double p = 1.0 / mean;
    const double u = 1.0 - uniform();  // (0, 1]
    return 1 + static_cast<int>(std::floor(std::log(u) / std::log1p(-p)));
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<double> zipf_cdf(std::size_t n, double s) {
  std::vector<double> cdf(n);
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    total += 1.0 / std::pow(static_cast<double>(r + 1), s);
    cdf[r] = total;
  }
  return cdf;
}

// Number of leading (highest-mass) words covering `fraction` of the mass.
std::size_t replaced_prefix(std::size_t n, double s, double fraction) {
  if (fraction <= 0.0 || n == 0) return 0;
  const std::vector<double> cdf = zipf_cdf(n, s);
  const double target = fraction * cdf.back();
  std::size_t k = 0;
  while (k < n && cdf[k] < target - 1e-12) ++k;
  return std::min(k + 1, n);
}

bool shift_target(Upos pos) { return pos == Upos::NOUN || pos == Upos::ADJ; }

SynthWord replacement(const SynthWord& w) {
  const std::string prefix = w.pos == Upos::NOUN ? "leger" : "over";
  return SynthWord{prefix + w.surface, prefix + w.lemma, w.pos};
}

Token to_token(const SynthWord& w) { return Token::word(w.surface, w.lemma, w.pos); }

const std::vector<SynthWord> kInterviewerLines[] = {
    {{"en", "en", Upos::CCONJ}, {"toen", "toen", Upos::ADV}},
    {{"hoe", "hoe", Upos::ADV}, {"was", "zijn", Upos::AUX}, {"dat", "dat", Upos::PRON}},
    {{"ja", "ja", Upos::INTJ}},
    {{"wat", "wat", Upos::PRON}, {"gebeurde", "gebeuren", Upos::VERB}, {"er", "er", Upos::ADV}},
};

}  // namespace

void SpeakerModel::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidModel, what); };
  if (!(zipf_exponent > 0.0)) bad("zipf_exponent must be positive");
  if (!(mean_utterance_tokens >= 1.0)) bad("mean_utterance_tokens must be >= 1");
  if (!(tokens_per_minute > 0.0)) bad("tokens_per_minute must be positive");
  for (double r : {pause_rate, break_rate, interviewer_rate, phrase_rate}) {
    if (!(r >= 0.0 && r <= 1.0)) bad("rates must lie in [0, 1]");
  }
  double total_weight = 0.0;
  for (const auto& [pos, w] : pos_weights) {
    if (!(w >= 0.0)) bad("pos weights must be non-negative");
    if (w > 0.0) {
      auto it = vocabulary.find(pos);
      if (it == vocabulary.end() || it->second.empty()) {
        bad("no vocabulary for weighted tag " + std::string(upos_name(pos)));
      }
    }
    total_weight += w;
  }
  if (!(total_weight > 0.0)) bad("pos weights sum to zero");
  auto check_word = [&](const SynthWord& w) {
    if (w.surface.empty() || w.surface.find_first_of(" \t\n\r") != std::string::npos) {
      bad("vocabulary surfaces must be non-empty single words");
    }
  };
  for (const auto& [pos, list] : vocabulary) {
    for (const SynthWord& w : list) check_word(w);
  }
  if (phrase_rate > 0.0 && phrases.empty()) bad("phrase_rate set without phrases");
  for (const auto& phrase : phrases) {
    if (phrase.empty()) bad("empty phrase");
    for (const SynthWord& w : phrase) check_word(w);
  }
  if (drift) {
    if (!(drift->replacement_fraction >= 0.0 && drift->replacement_fraction <= 1.0)) {
      bad("replacement_fraction must lie in [0, 1]");
    }
    if (!(drift->at_minute >= 0.0)) bad("topic shift minute must be non-negative");
  }
}

SpeakerModel SpeakerModel::dutch_default(std::uint64_t seed) {
  SpeakerModel m;
  m.seed = seed;
  m.speaker_id = "synth-" + std::to_string(seed);
  m.vocabulary[Upos::NOUN] = same(Upos::NOUN, {"huis", "boot", "schip", "man", "vrouw", "kind", "vader", "moeder",
                                               "broer", "jaar", "dag", "tijd", "land", "leger", "kamp", "oorlog",
                                               "soldaat", "dorp", "stad", "school", "geld", "eten", "water",
                                               "brief", "trein", "vriend", "familie", "kerk", "regen", "weg"});
  m.vocabulary[Upos::ADJ] = same(Upos::ADJ, {"groot", "klein", "goed", "slecht", "mooi", "oud", "jong", "lang",
                                             "kort", "zwaar", "moeilijk", "leuk", "nieuw", "blij", "bang", "koud",
                                             "warm", "ver", "hard", "rustig", "vreemd", "eerlijk", "arm", "rijk",
                                             "sterk"});
  m.vocabulary[Upos::PRON] = same(Upos::PRON, {"ik", "je", "hij", "we", "ze", "het", "die", "dat", "jij", "zij",
                                               "wij", "mij", "me", "ons", "hem"});
  m.vocabulary[Upos::CCONJ] = same(Upos::CCONJ, {"en", "maar", "of", "want", "dus"});
  m.vocabulary[Upos::SCONJ] = same(Upos::SCONJ, {"dat", "als", "omdat", "toen", "wanneer", "terwijl", "voordat",
                                                 "nadat", "hoewel", "zodat"});
  m.vocabulary[Upos::VERB] =
      words(Upos::VERB, {{"ging", "gaan"},     {"gaan", "gaan"},    {"ga", "gaan"},       {"gaat", "gaan"},
                         {"kwam", "komen"},    {"komt", "komen"},   {"zag", "zien"},      {"zien", "zien"},
                         {"denk", "denken"},   {"dacht", "denken"}, {"weet", "weten"},    {"wist", "weten"},
                         {"zei", "zeggen"},    {"zeg", "zeggen"},   {"liep", "lopen"},    {"loopt", "lopen"},
                         {"lopen", "lopen"},   {"werkte", "werken"}, {"woonde", "wonen"}, {"vond", "vinden"},
                         {"vind", "vinden"},   {"kreeg", "krijgen"}, {"krijg", "krijgen"}, {"praat", "praten"},
                         {"gingen", "gaan"},   {"kwamen", "komen"}, {"zagen", "zien"},    {"woon", "wonen"},
                         {"werk", "werken"},   {"praatten", "praten"}});
  m.vocabulary[Upos::ADV] = same(Upos::ADV, {"nog", "wel", "niet", "ook", "toen", "daar", "hier", "nu", "dan",
                                             "altijd", "nooit", "echt", "gewoon", "eigenlijk", "heel", "zo", "erg",
                                             "weer", "even", "misschien", "later", "eerst", "vaak", "samen", "al"});
  m.vocabulary[Upos::DET] = same(Upos::DET, {"de", "het", "een", "die", "dat", "deze"});
  m.vocabulary[Upos::ADP] = same(Upos::ADP, {"in", "op", "van", "met", "naar", "voor", "bij", "uit", "over", "door"});
  m.vocabulary[Upos::AUX] =
      words(Upos::AUX, {{"was", "zijn"}, {"is", "zijn"}, {"ben", "zijn"}, {"had", "hebben"}, {"heb", "hebben"},
                        {"werd", "worden"}, {"waren", "zijn"}, {"kon", "kunnen"}});
  m.vocabulary[Upos::INTJ] = same(Upos::INTJ, {"ja", "nee", "nou", "hè"});
  m.vocabulary[Upos::NUM] = same(Upos::NUM, {"twee", "drie", "tien", "honderd", "vier"});
  m.pos_weights = {{Upos::NOUN, 0.14}, {Upos::PRON, 0.14}, {Upos::VERB, 0.12}, {Upos::ADV, 0.12},
                   {Upos::DET, 0.10},  {Upos::ADP, 0.09},  {Upos::AUX, 0.08},  {Upos::ADJ, 0.07},
                   {Upos::CCONJ, 0.05}, {Upos::INTJ, 0.04}, {Upos::SCONJ, 0.03}, {Upos::NUM, 0.02}};
  m.phrases = {
      {{"ik", "ik", Upos::PRON}, {"weet", "weten", Upos::VERB}, {"het", "het", Upos::PRON}, {"niet", "niet", Upos::ADV}},
      {{"en", "en", Upos::CCONJ}, {"toen", "toen", Upos::ADV}},
      {{"dat", "dat", Upos::PRON}, {"was", "zijn", Upos::AUX}, {"het", "het", Upos::PRON}},
      {{"ja", "ja", Upos::INTJ}, {"ja", "ja", Upos::INTJ}},
  };
  m.phrase_rate = 0.3;
  return m;
}

std::vector<SynthWord> replaced_words(const SpeakerModel& m) {
  std::vector<SynthWord> out;
  if (!m.drift) return out;
  for (const auto& [pos, list] : m.vocabulary) {
    if (!shift_target(pos)) continue;
    const std::size_t k = replaced_prefix(list.size(), m.zipf_exponent, m.drift->replacement_fraction);
    out.insert(out.end(), list.begin(), list.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return out;
}

Transcript generate_transcript(const SpeakerModel& m, double duration_min) {
  m.validate();
  if (!(duration_min >= 1.0)) throw Error(ErrorCode::InvalidModel, "duration must be at least one minute");

  Rng rng(m.seed);
  const double duration_s = duration_min * 60.0;

  std::vector<Upos> tags;
  std::vector<double> tag_cdf;
  double acc = 0.0;
  for (const auto& [pos, w] : m.pos_weights) {
    if (w <= 0.0) continue;
    acc += w;
    tags.push_back(pos);
    tag_cdf.push_back(acc);
  }
  std::map<Upos, std::vector<double>> word_cdf;
  std::map<Upos, std::vector<SynthWord>> shifted;  // vocabulary after the topic shift
  for (Upos pos : tags) {
    const auto& list = m.vocabulary.at(pos);
    word_cdf[pos] = zipf_cdf(list.size(), m.zipf_exponent);
    auto& after = shifted[pos];
    after = list;
    if (m.drift && shift_target(pos)) {
      const std::size_t k = replaced_prefix(list.size(), m.zipf_exponent, m.drift->replacement_fraction);
      for (std::size_t i = 0; i < k; ++i) after[i] = replacement(list[i]);
    }
  }
  const double shift_s = m.drift ? m.drift->at_minute * 60.0 : INFINITY;

  Transcript t;
  t.speaker_id = m.speaker_id;
  t.duration = duration_s;
  double now = 0.0;
  while (now < duration_s) {
    const double start = std::round(now * 100.0) / 100.0;
    const bool post_shift = start >= shift_s;
    Utterance u;
    u.speaker_role = SpeakerRole::Interviewee;
    u.start_time = start;

    const int n_words = rng.length(m.mean_utterance_tokens);
    const int phrase_at = rng.bernoulli(m.phrase_rate) ? static_cast<int>(rng.uniform() * n_words) : -1;
    for (int i = 0; i < n_words; ++i) {
      if (i == phrase_at) {
        const auto& phrase = m.phrases[static_cast<std::size_t>(rng.uniform() * static_cast<double>(m.phrases.size()))];
        for (const SynthWord& w : phrase) u.tokens.push_back(to_token(w));
      }
      const Upos pos = tags[rng.pick(tag_cdf)];
      const std::size_t rank = rng.pick(word_cdf[pos]);
      const SynthWord& w = post_shift ? shifted[pos][rank] : m.vocabulary.at(pos)[rank];
      u.tokens.push_back(to_token(w));
      if (rng.bernoulli(m.pause_rate)) u.tokens.push_back(Token::pause());
      if (rng.bernoulli(m.break_rate)) u.tokens.push_back(Token::brk());
    }
    std::string& first = u.tokens.front().surface;
    if (!u.tokens.front().is_marker() && first[0] >= 'a' && first[0] <= 'z') first[0] = static_cast<char>(first[0] - 32);

    now += static_cast<double>(u.tokens.size()) / m.tokens_per_minute * 60.0;
    t.utterances.push_back(std::move(u));

    if (rng.bernoulli(m.interviewer_rate)) {
      const auto& line = kInterviewerLines[static_cast<std::size_t>(rng.uniform() * std::size(kInterviewerLines))];
      Utterance q;
      q.speaker_role = SpeakerRole::Interviewer;
      q.start_time = std::round(std::min(now, duration_s) * 100.0) / 100.0;
      if (q.start_time >= duration_s) break;
      for (const SynthWord& w : line) q.tokens.push_back(to_token(w));
      t.utterances.push_back(std::move(q));
    }
  }
  return t;
}

// --- JSON -------------------------------------------------------------------

namespace {

using json_io::Json;

Json word_json(const SynthWord& w, bool with_pos) {
  Json j = Json::array({w.surface, w.lemma});
  if (with_pos) j.push_back(upos_name(w.pos));
  return j;
}

SynthWord word_from(const Json& j, std::optional<Upos> pos) {
  if (!j.is_array() || j.size() < 2) throw Error(ErrorCode::InvalidModel, "word must be [surface, lemma(, UPOS)]");
  SynthWord w{j[0].get<std::string>(), j[1].get<std::string>(), pos.value_or(Upos::X)};
  if (!pos) {
    if (j.size() != 3) throw Error(ErrorCode::InvalidModel, "phrase words need [surface, lemma, UPOS]");
    const auto p = parse_upos(j[2].get<std::string>());
    if (!p) throw Error(ErrorCode::InvalidModel, "unknown UPOS in phrase");
    w.pos = *p;
  }
  return w;
}

Upos upos_key(const std::string& key) {
  const auto p = parse_upos(key);
  if (!p) throw Error(ErrorCode::InvalidModel, "unknown UPOS '" + key + "'");
  return *p;
}

}  // namespace

std::string model_to_json(const SpeakerModel& m) {
  Json j;
  j["speaker_id"] = m.speaker_id;
  j["seed"] = m.seed;
  j["zipf_exponent"] = m.zipf_exponent;
  j["mean_utterance_tokens"] = m.mean_utterance_tokens;
  j["tokens_per_minute"] = m.tokens_per_minute;
  j["pause_rate"] = m.pause_rate;
  j["break_rate"] = m.break_rate;
  j["interviewer_rate"] = m.interviewer_rate;
  j["phrase_rate"] = m.phrase_rate;
  if (m.drift) {
    j["drift"] = Json{{"type", "TOPIC_SHIFT"},
                      {"at_minute", m.drift->at_minute},
                      {"replacement_fraction", m.drift->replacement_fraction}};
  } else {
    j["drift"] = Json{{"type", "NONE"}};
  }
  Json weights = Json::object();
  for (const auto& [pos, w] : m.pos_weights) weights[std::string(upos_name(pos))] = w;
  j["pos_weights"] = std::move(weights);
  Json vocab = Json::object();
  for (const auto& [pos, list] : m.vocabulary) {
    Json arr = Json::array();
    for (const SynthWord& w : list) arr.push_back(word_json(w, false));
    vocab[std::string(upos_name(pos))] = std::move(arr);
  }
  j["vocabulary"] = std::move(vocab);
  Json phrases = Json::array();
  for (const auto& phrase : m.phrases) {
    Json arr = Json::array();
    for (const SynthWord& w : phrase) arr.push_back(word_json(w, true));
    phrases.push_back(std::move(arr));
  }
  j["phrases"] = std::move(phrases);
  return j.dump(2) + "\n";
}

SpeakerModel model_from_json(std::string_view json) {
  const Json j = json_io::parse_document(json, ErrorCode::InvalidModel);
  json_io::reject_unknown_keys(j,
                               {"speaker_id", "seed", "zipf_exponent", "mean_utterance_tokens", "tokens_per_minute",
                                "pause_rate", "break_rate", "interviewer_rate", "phrase_rate", "drift", "pos_weights",
                                "vocabulary", "phrases"},
                               ErrorCode::InvalidModel);
  // Absent fields fall back to the default model.
  const std::uint64_t seed = j.contains("seed") ? j["seed"].get<std::uint64_t>() : 1;
  SpeakerModel m = SpeakerModel::dutch_default(seed);
  try {
    if (j.contains("speaker_id")) m.speaker_id = j["speaker_id"].get<std::string>();
    if (j.contains("zipf_exponent")) m.zipf_exponent = j["zipf_exponent"].get<double>();
    if (j.contains("mean_utterance_tokens")) m.mean_utterance_tokens = j["mean_utterance_tokens"].get<double>();
    if (j.contains("tokens_per_minute")) m.tokens_per_minute = j["tokens_per_minute"].get<double>();
    if (j.contains("pause_rate")) m.pause_rate = j["pause_rate"].get<double>();
    if (j.contains("break_rate")) m.break_rate = j["break_rate"].get<double>();
    if (j.contains("interviewer_rate")) m.interviewer_rate = j["interviewer_rate"].get<double>();
    if (j.contains("phrase_rate")) m.phrase_rate = j["phrase_rate"].get<double>();
    if (j.contains("drift")) {
      const Json& d = j["drift"];
      const std::string type = d.at("type").get<std::string>();
      if (type == "NONE") {
        m.drift.reset();
      } else if (type == "TOPIC_SHIFT") {
        m.drift = TopicShift{d.at("at_minute").get<double>(), d.at("replacement_fraction").get<double>()};
      } else {
        throw Error(ErrorCode::InvalidModel, "unknown drift type '" + type + "'");
      }
    }
    if (j.contains("pos_weights")) {
      m.pos_weights.clear();
      for (const auto& [key, w] : j["pos_weights"].items()) m.pos_weights[upos_key(key)] = w.get<double>();
    }
    if (j.contains("vocabulary")) {
      m.vocabulary.clear();
      for (const auto& [key, list] : j["vocabulary"].items()) {
        const Upos pos = upos_key(key);
        for (const Json& w : list) m.vocabulary[pos].push_back(word_from(w, pos));
      }
    }
    if (j.contains("phrases")) {
      m.phrases.clear();
      for (const Json& phrase : j["phrases"]) {
        std::vector<SynthWord> p;
        for (const Json& w : phrase) p.push_back(word_from(w, std::nullopt));
        m.phrases.push_back(std::move(p));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidModel, std::string("bad model JSON: ") + e.what());
  }
  m.validate();
  return m;
}

}  // namespace lexiprof

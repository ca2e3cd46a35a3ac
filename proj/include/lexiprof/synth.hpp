#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lexiprof/transcript.hpp"

namespace lexiprof {

struct SynthWord {
  std::string surface;
  std::string lemma;
  Upos pos = Upos::X;

  friend bool operator==(const SynthWord&, const SynthWord&) = default;
};

struct TopicShift {
  double at_minute = 0.0;
  double replacement_fraction = 0.0;

  friend bool operator==(const TopicShift&, const TopicShift&) = default;
};

// Generative model of one interviewee. Each token picks a tag by
// `pos_weights`, then a word of that tag by a Zipf law over the tag's list.
struct SpeakerModel {
  std::string speaker_id = "synth";
  std::map<Upos, std::vector<SynthWord>> vocabulary;
  std::map<Upos, double> pos_weights;
  double zipf_exponent = 1.1;
  double mean_utterance_tokens = 12.0;
  double tokens_per_minute = 100.0;
  std::optional<TopicShift> drift;  // nullopt = stationary
  double pause_rate = 0.03;         // per token
  double break_rate = 0.01;         // per token
  double interviewer_rate = 0.15;   // interviewer turn after an utterance
  // Recurring multiword expressions; one is spliced into an utterance with
  // probability `phrase_rate`.
  std::vector<std::vector<SynthWord>> phrases;
  double phrase_rate = 0.0;
  std::uint64_t seed = 1;

  // Throws Error(InvalidModel).
  void validate() const;

  // A Dutch-flavoured default model with enough words per tag for top-20
  // profiles; lemmas are shared between inflected verb forms.
  static SpeakerModel dutch_default(std::uint64_t seed);

  friend bool operator==(const SpeakerModel&, const SpeakerModel&) = default;
};

// Fully determined by the model and its seed. Under a topic shift, the
// noun and adjective words making up `replacement_fraction` of each tag's
// probability mass are replaced with unseen words from `at_minute` on.
Transcript generate_transcript(const SpeakerModel& m, double duration_min);

// Words that the topic shift removes from use; empty without drift.
std::vector<SynthWord> replaced_words(const SpeakerModel& m);

std::string model_to_json(const SpeakerModel& m);
SpeakerModel model_from_json(std::string_view json);

}  // namespace lexiprof

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lexiprof {

// Universal Dependencies part-of-speech tags.
enum class Upos {
  ADJ, ADP, ADV, AUX, CCONJ, DET, INTJ, NOUN, NUM,
  PART, PRON, PROPN, PUNCT, SCONJ, SYM, VERB, X,
};

inline constexpr std::array<Upos, 17> kAllUpos = {
    Upos::ADJ, Upos::ADP,  Upos::ADV,   Upos::AUX,   Upos::CCONJ, Upos::DET,
    Upos::INTJ, Upos::NOUN, Upos::NUM,  Upos::PART,  Upos::PRON,  Upos::PROPN,
    Upos::PUNCT, Upos::SCONJ, Upos::SYM, Upos::VERB, Upos::X,
};

std::string_view upos_name(Upos pos);
std::optional<Upos> parse_upos(std::string_view name);

enum class Marker { None, Pause, Break };

inline constexpr std::string_view kPauseSurface = "PAUSE";
inline constexpr std::string_view kBreakSurface = "BREAK";

struct Token {
  std::string surface;
  std::string lemma;  // empty when no lemma is known
  Upos pos = Upos::X;
  Marker marker = Marker::None;

  static Token word(std::string surface, std::string lemma = {}, Upos pos = Upos::X);
  static Token pause();
  static Token brk();

  bool is_marker() const noexcept { return marker != Marker::None; }

  friend bool operator==(const Token&, const Token&) = default;
};

enum class SpeakerRole { Interviewee, Interviewer, Other };

// Transcript prefix used by both the raw format and CoNLL-U metadata.
std::string_view role_code(SpeakerRole role);
std::optional<SpeakerRole> parse_role_code(std::string_view code);

struct Utterance {
  SpeakerRole speaker_role = SpeakerRole::Interviewee;
  double start_time = 0.0;  // seconds
  std::vector<Token> tokens;

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

struct Transcript {
  std::string speaker_id;
  std::vector<Utterance> utterances;
  double duration = 0.0;  // seconds

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

// Half-open interval [start, end) in seconds.
struct Span {
  double start = 0.0;
  double end = 0.0;

  bool contains(double t) const noexcept { return t >= start && t < end; }
  double length() const noexcept { return end - start; }
  friend bool operator==(const Span&, const Span&) = default;
};

// Tokens of one speaker role inside a time span. Utterance boundaries are
// kept as offsets into `tokens` so that n-grams can respect them.
struct TokenWindow {
  std::string speaker_id;
  Span span;
  std::vector<Token> tokens;
  std::vector<std::size_t> utterance_starts;

  std::size_t utterance_count() const noexcept { return utterance_starts.size(); }
  // Token range [first, last) of utterance i.
  std::pair<std::size_t, std::size_t> utterance_range(std::size_t i) const;
};

}  // namespace lexiprof

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "lexiprof/transcript.hpp"

namespace lexiprof {

enum class ProfileCategory { Noun, Pronoun, Adjective, Conjunction, Verb, Adverb };

inline constexpr std::array<ProfileCategory, 6> kAllCategories = {
    ProfileCategory::Noun,        ProfileCategory::Pronoun, ProfileCategory::Adjective,
    ProfileCategory::Conjunction, ProfileCategory::Verb,    ProfileCategory::Adverb,
};

std::string_view category_name(ProfileCategory c);
std::optional<ProfileCategory> parse_category(std::string_view name);

struct PosMapping {
  bool include_aux = false;
  bool include_propn = false;

  friend bool operator==(const PosMapping&, const PosMapping&) = default;
};

// UPOS -> profile category. CCONJ and SCONJ both map to Conjunction; AUX
// and PROPN only when enabled.
std::optional<ProfileCategory> map_pos(Upos upos, PosMapping mapping = {});

inline std::optional<ProfileCategory> map_pos(Upos upos, bool include_aux) {
  return map_pos(upos, PosMapping{include_aux, false});
}

struct LexiconEntry {
  Upos pos = Upos::X;
  std::string lemma;
};

// surface -> (UPOS, lemma) table. Loaded from `surface<TAB>UPOS<TAB>lemma`
// lines; the first entry for a surface wins.
class Lexicon {
 public:
  Lexicon() = default;

  static Lexicon load(const std::string& path);
  static Lexicon parse(std::string_view text);

  void add(std::string surface, Upos pos, std::string lemma);
  const LexiconEntry* find(std::string_view surface) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::unordered_map<std::string, LexiconEntry> entries_;
};

enum class TaggerKind { PretaggedPassthrough, BuiltinLexicon, ExternalConllu };

struct TaggerSpec {
  TaggerKind kind = TaggerKind::PretaggedPassthrough;
  std::optional<std::string> lexicon_path;

  void validate() const;
};

// Tags every non-marker token. Marker tokens, surfaces, utterance
// boundaries and timing are never touched.
Transcript tag_transcript(const Transcript& t, const TaggerSpec& spec);
Transcript tag_with_lexicon(const Transcript& t, const Lexicon& lexicon);

// Lookup order for the builtin tagger: exact surface, case-folded surface,
// suffix rules, then X with lemma = surface.
LexiconEntry lookup_or_guess(const Lexicon& lexicon, std::string_view surface);

}  // namespace lexiprof

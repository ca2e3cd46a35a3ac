#include "lexiprof/annotate.hpp"

#include <fstream>
#include <sstream>

#include "lexiprof/error.hpp"
#include "lexiprof/text.hpp"

namespace lexiprof {

std::string_view category_name(ProfileCategory c) {
  switch (c) {
    case ProfileCategory::Noun: return "NOUN";
    case ProfileCategory::Pronoun: return "PRONOUN";
    case ProfileCategory::Adjective: return "ADJECTIVE";
    case ProfileCategory::Conjunction: return "CONJUNCTION";
    case ProfileCategory::Verb: return "VERB";
    case ProfileCategory::Adverb: return "ADVERB";
  }
  return "NOUN";
}

std::optional<ProfileCategory> parse_category(std::string_view name) {
  for (ProfileCategory c : kAllCategories) {
    if (category_name(c) == name) return c;
  }
  return std::nullopt;
}

std::optional<ProfileCategory> map_pos(Upos upos, PosMapping mapping) {
  switch (upos) {
    case Upos::NOUN: return ProfileCategory::Noun;
    case Upos::PROPN:
      if (mapping.include_propn) return ProfileCategory::Noun;
      return std::nullopt;
    case Upos::PRON: return ProfileCategory::Pronoun;
    case Upos::ADJ: return ProfileCategory::Adjective;
    case Upos::CCONJ:
    case Upos::SCONJ: return ProfileCategory::Conjunction;
    case Upos::VERB: return ProfileCategory::Verb;
    case Upos::AUX:
      if (mapping.include_aux) return ProfileCategory::Verb;
      return std::nullopt;
    case Upos::ADV: return ProfileCategory::Adverb;
    default: return std::nullopt;
  }
}

Lexicon Lexicon::parse(std::string_view text) {
  Lexicon lex;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty() || line.front() == '#') continue;

    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos || line.find('\t', t2 + 1) != std::string_view::npos) {
      throw Error(ErrorCode::LexiconLoadError,
                  "lexicon line " + std::to_string(line_no) + ": expected surface<TAB>UPOS<TAB>lemma");
    }
    const std::string_view surface = line.substr(0, t1);
    const std::string_view tag = line.substr(t1 + 1, t2 - t1 - 1);
    const std::string_view lemma = line.substr(t2 + 1);
    const auto upos = parse_upos(tag);
    if (surface.empty() || lemma.empty() || !upos) {
      throw Error(ErrorCode::LexiconLoadError, "lexicon line " + std::to_string(line_no) + ": bad entry");
    }
    lex.add(std::string(surface), *upos, std::string(lemma));
  }
  return lex;
}

Lexicon Lexicon::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::LexiconLoadError, "cannot open lexicon " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void Lexicon::add(std::string surface, Upos pos, std::string lemma) {
  entries_.try_emplace(std::move(surface), LexiconEntry{pos, std::move(lemma)});
}

const LexiconEntry* Lexicon::find(std::string_view surface) const {
  auto it = entries_.find(std::string(surface));
  return it == entries_.end() ? nullptr : &it->second;
}

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool all_of(std::string_view s, bool (*pred)(char)) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!pred(c)) return false;
  }
  return true;
}

bool is_punct_char(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
}

bool is_numeric_char(char c) { return (c >= '0' && c <= '9') || c == '.' || c == ','; }

struct SuffixRule {
  std::string_view suffix;
  Upos pos;
};

// Productive Dutch derivational endings.
constexpr SuffixRule kSuffixRules[] = {
    {"heid", Upos::NOUN}, {"schap", Upos::NOUN}, {"ing", Upos::NOUN},   {"isme", Upos::NOUN},
    {"tjes", Upos::NOUN}, {"tje", Upos::NOUN},   {"lijke", Upos::ADJ},  {"lijk", Upos::ADJ},
    {"ische", Upos::ADJ}, {"isch", Upos::ADJ},   {"ige", Upos::ADJ},    {"ig", Upos::ADJ},
};

}  // namespace

LexiconEntry lookup_or_guess(const Lexicon& lexicon, std::string_view surface) {
  if (const LexiconEntry* e = lexicon.find(surface)) return *e;
  const std::string folded = text::fold_case(surface);
  if (const LexiconEntry* e = lexicon.find(folded)) return *e;

  if (all_of(surface, is_punct_char)) return {Upos::PUNCT, std::string(surface)};
  if (surface.front() >= '0' && surface.front() <= '9' && all_of(surface, is_numeric_char)) {
    return {Upos::NUM, std::string(surface)};
  }
  for (const SuffixRule& rule : kSuffixRules) {
    if (folded.size() >= rule.suffix.size() + 2 && ends_with(folded, rule.suffix)) {
      return {rule.pos, folded};
    }
  }
  return {Upos::X, std::string(surface)};
}

void TaggerSpec::validate() const {
  if ((kind == TaggerKind::BuiltinLexicon) != lexicon_path.has_value()) {
    throw Error(ErrorCode::InvalidConfig, "a lexicon path is required for, and only for, the builtin tagger");
  }
}

Transcript tag_with_lexicon(const Transcript& t, const Lexicon& lexicon) {
  Transcript out = t;
  for (Utterance& u : out.utterances) {
    for (Token& tok : u.tokens) {
      if (tok.is_marker()) continue;
      LexiconEntry e = lookup_or_guess(lexicon, tok.surface);
      tok.pos = e.pos;
      tok.lemma = std::move(e.lemma);
    }
  }
  return out;
}

Transcript tag_transcript(const Transcript& t, const TaggerSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case TaggerKind::PretaggedPassthrough:
      for (const Utterance& u : t.utterances) {
        for (const Token& tok : u.tokens) {
          if (!tok.is_marker() && tok.pos == Upos::X) {
            throw Error(ErrorCode::PassthroughOnUntagged,
                        "token '" + tok.surface + "' has no tag; use a tagger instead of passthrough");
          }
        }
      }
      return t;
    case TaggerKind::BuiltinLexicon:
      return tag_with_lexicon(t, Lexicon::load(*spec.lexicon_path));
    case TaggerKind::ExternalConllu:
      // Tags come from the external pipeline's CoNLL-U; X is a legitimate tag there.
      return t;
  }
  return t;
}

}  // namespace lexiprof

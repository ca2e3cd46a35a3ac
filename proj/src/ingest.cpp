#include "lexiprof/ingest.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lexiprof/error.hpp"
#include "lexiprof/text.hpp"

namespace lexiprof {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedTimeMarker: return "MalformedTimeMarker";
    case ErrorCode::MissingSpeakerPrefix: return "MissingSpeakerPrefix";
    case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::MissingMetadata: return "MissingMetadata";
    case ErrorCode::InvalidUPOS: return "InvalidUPOS";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidSpan: return "InvalidSpan";
    case ErrorCode::LexiconLoadError: return "LexiconLoadError";
    case ErrorCode::PassthroughOnUntagged: return "PassthroughOnUntagged";
    case ErrorCode::UntaggedInput: return "UntaggedInput";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyConstructionWindow: return "EmptyConstructionWindow";
    case ErrorCode::MissingLemmas: return "MissingLemmas";
    case ErrorCode::SpanOverlap: return "SpanOverlap";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::IOError: return "IOError";
  }
  return "Unknown";
}

std::string_view upos_name(Upos pos) {
  switch (pos) {
    case Upos::ADJ: return "ADJ";
    case Upos::ADP: return "ADP";
    case Upos::ADV: return "ADV";
    case Upos::AUX: return "AUX";
    case Upos::CCONJ: return "CCONJ";
    case Upos::DET: return "DET";
    case Upos::INTJ: return "INTJ";
    case Upos::NOUN: return "NOUN";
    case Upos::NUM: return "NUM";
    case Upos::PART: return "PART";
    case Upos::PRON: return "PRON";
    case Upos::PROPN: return "PROPN";
    case Upos::PUNCT: return "PUNCT";
    case Upos::SCONJ: return "SCONJ";
    case Upos::SYM: return "SYM";
    case Upos::VERB: return "VERB";
    case Upos::X: return "X";
  }
  return "X";
}

std::optional<Upos> parse_upos(std::string_view name) {
  for (Upos p : kAllUpos) {
    if (upos_name(p) == name) return p;
  }
  return std::nullopt;
}

Token Token::word(std::string surface, std::string lemma, Upos pos) {
  return Token{std::move(surface), std::move(lemma), pos, Marker::None};
}

Token Token::pause() {
  return Token{std::string(kPauseSurface), std::string(kPauseSurface), Upos::X, Marker::Pause};
}

Token Token::brk() {
  return Token{std::string(kBreakSurface), std::string(kBreakSurface), Upos::X, Marker::Break};
}

std::string_view role_code(SpeakerRole role) {
  switch (role) {
    case SpeakerRole::Interviewee: return "SPK";
    case SpeakerRole::Interviewer: return "INT";
    case SpeakerRole::Other: return "OTH";
  }
  return "OTH";
}

std::optional<SpeakerRole> parse_role_code(std::string_view code) {
  if (code == "SPK") return SpeakerRole::Interviewee;
  if (code == "INT") return SpeakerRole::Interviewer;
  if (code == "OTH") return SpeakerRole::Other;
  return std::nullopt;
}

std::pair<std::size_t, std::size_t> TokenWindow::utterance_range(std::size_t i) const {
  const std::size_t last = i + 1 < utterance_starts.size() ? utterance_starts[i + 1] : tokens.size();
  return {utterance_starts[i], last};
}

namespace {

[[noreturn]] void fail(ErrorCode code, std::size_t line, const std::string& what) {
  throw Error(code, "line " + std::to_string(line) + ": " + what);
}

bool is_split_punct(char c) {
  switch (c) {
    case ',': case '.': case '!': case '?': case ';': case ':': case '"': case '(': case ')':
      return true;
    default:
      return false;
  }
}

// Handles one ellipsis-free piece: peels punctuation into separate tokens
// and turns trailing hyphens into a BREAK.
void emit_piece(std::string_view piece, std::vector<Token>& out) {
  if (piece.empty()) return;
  if (piece.find_first_not_of('-') == std::string_view::npos) {
    out.push_back(Token::brk());
    return;
  }
  while (!piece.empty() && is_split_punct(piece.front())) {
    out.push_back(Token::word(std::string(1, piece.front()), std::string(1, piece.front())));
    piece.remove_prefix(1);
  }
  std::vector<Token> suffix;  // reversed
  while (!piece.empty()) {
    if (is_split_punct(piece.back())) {
      suffix.push_back(Token::word(std::string(1, piece.back()), std::string(1, piece.back())));
      piece.remove_suffix(1);
    } else if (piece.back() == '-') {
      while (!piece.empty() && piece.back() == '-') piece.remove_suffix(1);
      suffix.push_back(Token::brk());
    } else {
      break;
    }
  }
  if (!piece.empty()) out.push_back(Token::word(std::string(piece), std::string(piece)));
  out.insert(out.end(), suffix.rbegin(), suffix.rend());
}

constexpr std::string_view kUnicodeEllipsis = "\xE2\x80\xA6";

void tokenize_word(std::string_view word, std::vector<Token>& out) {
  std::size_t piece_start = 0;
  std::size_t i = 0;
  while (i < word.size()) {
    std::size_t ellipsis_len = 0;
    if (word.substr(i, kUnicodeEllipsis.size()) == kUnicodeEllipsis) {
      ellipsis_len = kUnicodeEllipsis.size();
    } else if (word[i] == '.') {
      std::size_t j = i;
      while (j < word.size() && word[j] == '.') ++j;
      if (j - i >= 3) ellipsis_len = j - i;
    }
    if (ellipsis_len == 0) {
      ++i;
      continue;
    }
    emit_piece(word.substr(piece_start, i - piece_start), out);
    out.push_back(Token::pause());
    i += ellipsis_len;
    piece_start = i;
  }
  emit_piece(word.substr(piece_start), out);
}

bool parse_two_digits(std::string_view s, int& v) {
  if (s.size() != 2 || s[0] < '0' || s[0] > '9' || s[1] < '0' || s[1] > '9') return false;
  v = (s[0] - '0') * 10 + (s[1] - '0');
  return true;
}

double parse_time_marker(std::string_view line, std::size_t line_no) {
  int h = 0, m = 0, s = 0;
  const bool ok = line.size() == 10 && line.front() == '[' && line.back() == ']' && line[3] == ':' &&
                  line[6] == ':' && parse_two_digits(line.substr(1, 2), h) &&
                  parse_two_digits(line.substr(4, 2), m) && parse_two_digits(line.substr(7, 2), s) &&
                  m < 60 && s < 60;
  if (!ok) fail(ErrorCode::MalformedTimeMarker, line_no, "expected [HH:MM:SS], got '" + std::string(line) + "'");
  return h * 3600.0 + m * 60.0 + s;
}

}  // namespace

Transcript parse_raw_transcript(std::string_view text) {
  Transcript t;
  double current_time = 0.0;
  bool seen_marker = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw_line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::string_view line = text::trim(raw_line);
    if (line.empty()) continue;

    if (text::starts_with(line, "#speaker-id:")) {
      t.speaker_id = std::string(text::trim(line.substr(12)));
      continue;
    }
    if (line.front() == '[') {
      const double marker = parse_time_marker(line, line_no);
      if (seen_marker && marker < current_time) {
        fail(ErrorCode::NonMonotonicTime, line_no, "time marker goes backwards");
      }
      current_time = marker;
      seen_marker = true;
      continue;
    }

    const std::size_t colon = line.find(':');
    const std::optional<SpeakerRole> role =
        colon == std::string_view::npos ? std::nullopt : parse_role_code(line.substr(0, colon));
    if (!role) fail(ErrorCode::MissingSpeakerPrefix, line_no, "expected 'SPK:' or 'INT:' prefix");

    Utterance u;
    u.speaker_role = *role;
    u.start_time = current_time;
    for (const std::string& word : text::split_whitespace(line.substr(colon + 1))) {
      tokenize_word(word, u.tokens);
    }
    if (!u.tokens.empty()) t.utterances.push_back(std::move(u));
  }
  t.duration = current_time;
  return t;
}

TokenWindow slice(const Transcript& t, double start_s, double end_s, SpeakerRole role) {
  if (!(start_s >= 0.0) || !(start_s < end_s)) {
    throw Error(ErrorCode::InvalidSpan, "invalid span [" + text::format_shortest(start_s) + ", " +
                                            text::format_shortest(end_s) + ")");
  }
  TokenWindow w;
  w.speaker_id = t.speaker_id;
  w.span = Span{start_s, end_s};
  for (const Utterance& u : t.utterances) {
    if (u.speaker_role != role || !w.span.contains(u.start_time)) continue;
    w.utterance_starts.push_back(w.tokens.size());
    w.tokens.insert(w.tokens.end(), u.tokens.begin(), u.tokens.end());
  }
  return w;
}

void validate(const Transcript& t) {
  double previous = 0.0;
  for (std::size_t i = 0; i < t.utterances.size(); ++i) {
    const Utterance& u = t.utterances[i];
    const std::string where = "utterance " + std::to_string(i + 1);
    if (!std::isfinite(u.start_time) || u.start_time < 0.0) {
      throw Error(ErrorCode::ParseError, where + ": start_time must be finite and non-negative");
    }
    if (u.start_time < previous) throw Error(ErrorCode::NonMonotonicTime, where + ": start_time decreases");
    previous = u.start_time;
    if (u.tokens.empty()) throw Error(ErrorCode::ParseError, where + ": no tokens");
    for (const Token& tok : u.tokens) {
      if (tok.surface.empty()) throw Error(ErrorCode::ParseError, where + ": empty token surface");
      const bool marker_surface = tok.surface == kPauseSurface || tok.surface == kBreakSurface;
      if (tok.is_marker() != (marker_surface && tok.pos == Upos::X)) {
        throw Error(ErrorCode::ParseError, where + ": inconsistent marker token '" + tok.surface + "'");
      }
    }
  }
  if (!(t.duration >= previous)) {
    throw Error(ErrorCode::ParseError, "duration precedes the last utterance");
  }
}

Transcript read_transcript_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IOError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::filesystem::path p(path);
  Transcript t = p.extension() == ".conllu" ? parse_conllu(buf.str()) : parse_raw_transcript(buf.str());
  if (t.speaker_id.empty()) t.speaker_id = p.stem().string();
  return t;
}

}  // namespace lexiprof

// CoNLL-U reading and writing for transcripts.

#include <istream>
#include <sstream>

#include "lexiprof/error.hpp"
#include "lexiprof/ingest.hpp"
#include "lexiprof/text.hpp"

namespace lexiprof {

namespace {

[[noreturn]] void fail(ErrorCode code, std::size_t line, const std::string& what) {
  throw Error(code, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool is_plain_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

Marker parse_misc(std::string_view misc, std::size_t line_no) {
  if (misc == "_") return Marker::None;
  Marker marker = Marker::None;
  std::size_t start = 0;
  while (start <= misc.size()) {
    std::size_t bar = misc.find('|', start);
    if (bar == std::string_view::npos) bar = misc.size();
    const std::string_view item = misc.substr(start, bar - start);
    if (text::starts_with(item, "Marker=")) {
      const std::string_view value = item.substr(7);
      if (value == "Pause") {
        marker = Marker::Pause;
      } else if (value == "Break") {
        marker = Marker::Break;
      } else {
        fail(ErrorCode::ParseError, line_no, "unknown marker '" + std::string(value) + "'");
      }
    }
    start = bar + 1;
  }
  return marker;
}

struct SentenceState {
  std::optional<SpeakerRole> role;
  std::optional<double> start_time;
  std::vector<Token> tokens;
  std::size_t first_line = 0;
};

}  // namespace

Transcript parse_conllu(std::string_view text) {
  Transcript t;
  std::optional<double> declared_duration;
  SentenceState sentence;
  double last_start = 0.0;

  auto finish_sentence = [&](std::size_t line_no) {
    if (!sentence.tokens.empty()) {
      if (!sentence.role) fail(ErrorCode::MissingMetadata, sentence.first_line, "sentence lacks '# speaker'");
      if (!sentence.start_time) {
        fail(ErrorCode::MissingMetadata, sentence.first_line, "sentence lacks '# start_time'");
      }
      if (!t.utterances.empty() && *sentence.start_time < last_start) {
        fail(ErrorCode::NonMonotonicTime, line_no, "start_time decreases");
      }
      last_start = *sentence.start_time;
      t.utterances.push_back(Utterance{*sentence.role, *sentence.start_time, std::move(sentence.tokens)});
    }
    sentence = SentenceState{};
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (text::trim(line).empty()) {
      finish_sentence(line_no);
      continue;
    }
    if (sentence.first_line == 0) sentence.first_line = line_no;

    if (line.front() == '#') {
      const std::string_view body = text::trim(line.substr(1));
      const std::size_t eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const std::string_view key = text::trim(body.substr(0, eq));
      const std::string_view value = text::trim(body.substr(eq + 1));
      if (key == "speaker") {
        sentence.role = parse_role_code(value);
        if (!sentence.role) fail(ErrorCode::MissingMetadata, line_no, "unknown speaker '" + std::string(value) + "'");
      } else if (key == "start_time") {
        double v = 0.0;
        if (!text::parse_double(value, v) || v < 0.0) {
          fail(ErrorCode::ParseError, line_no, "bad start_time '" + std::string(value) + "'");
        }
        sentence.start_time = v;
      } else if (key == "newdoc id") {
        t.speaker_id = std::string(value);
      } else if (key == "duration") {
        double v = 0.0;
        if (!text::parse_double(value, v) || v < 0.0) {
          fail(ErrorCode::ParseError, line_no, "bad duration '" + std::string(value) + "'");
        }
        declared_duration = v;
      }
      continue;
    }

    const auto fields = split_tabs(line);
    if (fields.size() != 10) {
      fail(ErrorCode::ParseError, line_no, "expected 10 tab-separated fields, got " + std::to_string(fields.size()));
    }
    // Multiword ranges (1-2) and empty nodes (1.1) carry no surface token.
    if (fields[0].find_first_of("-.") != std::string_view::npos) continue;
    if (!is_plain_id(fields[0])) fail(ErrorCode::ParseError, line_no, "bad token id '" + std::string(fields[0]) + "'");
    if (fields[1].empty()) fail(ErrorCode::ParseError, line_no, "empty FORM");

    Token tok;
    tok.surface = std::string(fields[1]);
    tok.lemma = fields[2] == "_" ? std::string() : std::string(fields[2]);
    if (fields[3] == "_") {
      tok.pos = Upos::X;
    } else if (auto upos = parse_upos(fields[3])) {
      tok.pos = *upos;
    } else {
      fail(ErrorCode::InvalidUPOS, line_no, "unknown UPOS '" + std::string(fields[3]) + "'");
    }
    tok.marker = parse_misc(fields[9], line_no);
    const bool marker_surface = tok.surface == kPauseSurface || tok.surface == kBreakSurface;
    if (tok.marker != Marker::None) {
      const std::string_view expected = tok.marker == Marker::Pause ? kPauseSurface : kBreakSurface;
      if (tok.surface != expected || tok.pos != Upos::X) {
        fail(ErrorCode::ParseError, line_no, "marker token must be " + std::string(expected) + " with UPOS X");
      }
    } else if (marker_surface && tok.pos == Upos::X) {
      tok.marker = tok.surface == kPauseSurface ? Marker::Pause : Marker::Break;
    }
    if (tok.marker != Marker::None && tok.lemma.empty()) tok.lemma = tok.surface;
    sentence.tokens.push_back(std::move(tok));
  }
  finish_sentence(line_no);

  t.duration = t.utterances.empty() ? 0.0 : t.utterances.back().start_time;
  if (declared_duration) {
    if (*declared_duration < t.duration) {
      throw Error(ErrorCode::ParseError, "declared duration precedes the last utterance");
    }
    t.duration = *declared_duration;
  }
  return t;
}

Transcript parse_conllu(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_conllu(buf.str());
}

std::string serialize_conllu(const Transcript& t) {
  std::string out;
  if (!t.speaker_id.empty()) out += "# newdoc id = " + t.speaker_id + "\n";
  out += "# duration = " + text::format_shortest(t.duration) + "\n";
  for (std::size_t i = 0; i < t.utterances.size(); ++i) {
    const Utterance& u = t.utterances[i];
    if (i > 0) out += "\n";
    out += "# sent_id = " + std::to_string(i + 1) + "\n";
    out += "# speaker = " + std::string(role_code(u.speaker_role)) + "\n";
    out += "# start_time = " + text::format_shortest(u.start_time) + "\n";
    out += "# text =";
    for (const Token& tok : u.tokens) out += " " + tok.surface;
    out += "\n";
    for (std::size_t k = 0; k < u.tokens.size(); ++k) {
      const Token& tok = u.tokens[k];
      out += std::to_string(k + 1);
      out += '\t' + tok.surface;
      out += '\t' + (tok.lemma.empty() ? std::string("_") : tok.lemma);
      out += '\t';
      out += upos_name(tok.pos);
      out += "\t_\t_\t_\t_\t_\t";
      switch (tok.marker) {
        case Marker::None: out += "_"; break;
        case Marker::Pause: out += "Marker=Pause"; break;
        case Marker::Break: out += "Marker=Break"; break;
      }
      out += '\n';
    }
  }
  out += "\n";
  return out;
}

}  // namespace lexiprof

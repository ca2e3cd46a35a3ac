#pragma once

#include <istream>
#include <string>
#include <string_view>

#include "lexiprof/transcript.hpp"

namespace lexiprof {

// Raw transcript format:
//
//   #speaker-id: <id>        optional header
//   [HH:MM:SS]               time marker; following lines inherit this time
//   SPK: <text>              interviewee line
//   INT: <text>              interviewer line
//
// Blank lines are ignored. Ellipses ("..." or U+2026) become PAUSE tokens,
// word-final or standalone hyphens become BREAK tokens. The duration is the
// latest time marker seen.
Transcript parse_raw_transcript(std::string_view text);

// CoNLL-U with one sentence per utterance. Every sentence needs
// `# speaker = SPK|INT|OTH` and `# start_time = <seconds>`. Optional
// document comments `# newdoc id = <speaker id>` and `# duration = <s>`.
Transcript parse_conllu(std::string_view text);
Transcript parse_conllu(std::istream& in);

std::string serialize_conllu(const Transcript& t);

// Throws Error(InvalidSpan) unless 0 <= start < end.
TokenWindow slice(const Transcript& t, double start_s, double end_s, SpeakerRole role);

// Checks the Token, Utterance and Transcript invariants. Throws ParseError
// or NonMonotonicTime describing the first violation.
void validate(const Transcript& t);

Transcript read_transcript_file(const std::string& path);

}  // namespace lexiprof

#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "lexiprof/error.hpp"
#include "lexiprof/ingest.hpp"
#include "support.hpp"

using namespace lexiprof;

namespace {

std::vector<std::string> surfaces(const Utterance& u) {
  std::vector<std::string> out;
  for (const auto& t : u.tokens) out.push_back(t.surface);
  return out;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IOError;
}

const char* kConllu =
    "# newdoc id = v01\n"
    "# speaker = SPK\n"
    "# start_time = 312.5\n"
    "1\tik\tik\tPRON\t_\t_\t_\t_\t_\t_\n"
    "2\tPAUSE\tPAUSE\tX\t_\t_\t_\t_\t_\tMarker=Pause\n"
    "3\tliep\tlopen\tVERB\t_\t_\t_\t_\t_\t_\n"
    "\n";

}  // namespace

TEST(RawTranscript, EllipsisBecomesPause) {
  Transcript t = parse_raw_transcript("[00:05:00]\nSPK: ik was ... daar\n");
  ASSERT_EQ(t.utterances.size(), 1u);
  EXPECT_EQ(surfaces(t.utterances[0]), (std::vector<std::string>{"ik", "was", "PAUSE", "daar"}));
  EXPECT_DOUBLE_EQ(t.utterances[0].start_time, 300.0);
  EXPECT_EQ(t.utterances[0].tokens[2].marker, Marker::Pause);
  EXPECT_EQ(t.utterances[0].speaker_role, SpeakerRole::Interviewee);
}

TEST(RawTranscript, TrailingHyphenBecomesBreak) {
  Transcript t = parse_raw_transcript("[00:00:00]\nSPK: de wo- woning\n");
  ASSERT_EQ(t.utterances.size(), 1u);
  EXPECT_EQ(surfaces(t.utterances[0]), (std::vector<std::string>{"de", "wo", "BREAK", "woning"}));
  EXPECT_EQ(t.utterances[0].tokens[2].marker, Marker::Break);
}

TEST(RawTranscript, MidWordHyphenKept) {
  Transcript t = parse_raw_transcript("[00:00:00]\nSPK: de x-y as\n");
  EXPECT_EQ(surfaces(t.utterances[0]), (std::vector<std::string>{"de", "x-y", "as"}));
}

TEST(RawTranscript, UnicodeEllipsisAndGluedDots) {
  Transcript t = parse_raw_transcript("[00:00:00]\nSPK: ja\xE2\x80\xA6 nee...toch\n");
  EXPECT_EQ(surfaces(t.utterances[0]), (std::vector<std::string>{"ja", "PAUSE", "nee", "PAUSE", "toch"}));
}

TEST(RawTranscript, EmptyDocument) {
  Transcript t = parse_raw_transcript("");
  EXPECT_TRUE(t.utterances.empty());
  EXPECT_EQ(t.duration, 0.0);
}

TEST(RawTranscript, RolesAndHeader) {
  Transcript t = parse_raw_transcript("#speaker-id: abc\n[00:00:10]\nINT: vraag\nOTH: iets\nSPK: antwoord\n");
  EXPECT_EQ(t.speaker_id, "abc");
  ASSERT_EQ(t.utterances.size(), 3u);
  EXPECT_EQ(t.utterances[0].speaker_role, SpeakerRole::Interviewer);
  EXPECT_EQ(t.utterances[1].speaker_role, SpeakerRole::Other);
  EXPECT_EQ(t.utterances[2].speaker_role, SpeakerRole::Interviewee);
}

TEST(RawTranscript, Errors) {
  EXPECT_EQ(code_of([] { parse_raw_transcript("[0:05:00]\nSPK: a\n"); }), ErrorCode::MalformedTimeMarker);
  EXPECT_EQ(code_of([] { parse_raw_transcript("[00:61:00]\nSPK: a\n"); }), ErrorCode::MalformedTimeMarker);
  EXPECT_EQ(code_of([] { parse_raw_transcript("[00:00:00]\nhallo daar\n"); }), ErrorCode::MissingSpeakerPrefix);
  EXPECT_EQ(code_of([] { parse_raw_transcript("[00:10:00]\nSPK: a\n[00:05:00]\nSPK: b\n"); }),
            ErrorCode::NonMonotonicTime);
}

TEST(RawTranscript, NoTextLost) {
  // every alphanumeric byte of the content ends up in some word token
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const std::string doc = lexiprof::testing::random_raw_document(rng);
    std::string expected;
    std::size_t pos = 0;
    while (pos < doc.size()) {
      std::size_t nl = doc.find('\n', pos);
      if (nl == std::string::npos) nl = doc.size();
      std::string line = doc.substr(pos, nl - pos);
      pos = nl + 1;
      if (line.size() > 4 && line[3] == ':' && line[0] != '#' && line[0] != '[') {
        for (char c : line.substr(4))
          if (std::isalnum(static_cast<unsigned char>(c))) expected += c;
      }
    }
    std::string got;
    for (const auto& u : parse_raw_transcript(doc).utterances)
      for (const auto& tok : u.tokens)
        if (!tok.is_marker())
          for (char c : tok.surface)
            if (std::isalnum(static_cast<unsigned char>(c))) got += c;
    ASSERT_EQ(got, expected) << doc;
  }
}

TEST(Conllu, ParsesMetadataAndMarkers) {
  Transcript t = parse_conllu(std::string_view(kConllu));
  EXPECT_EQ(t.speaker_id, "v01");
  ASSERT_EQ(t.utterances.size(), 1u);
  const auto& u = t.utterances[0];
  EXPECT_DOUBLE_EQ(u.start_time, 312.5);
  ASSERT_EQ(u.tokens.size(), 3u);
  EXPECT_EQ(u.tokens[1].marker, Marker::Pause);
  EXPECT_EQ(u.tokens[2].lemma, "lopen");
  EXPECT_EQ(u.tokens[2].pos, Upos::VERB);
}

TEST(Conllu, Errors) {
  const std::string backwards =
      "# speaker = SPK\n# start_time = 600\n1\ta\ta\tNOUN\t_\t_\t_\t_\t_\t_\n\n"
      "# speaker = SPK\n# start_time = 300\n1\tb\tb\tNOUN\t_\t_\t_\t_\t_\t_\n\n";
  EXPECT_EQ(code_of([&] { parse_conllu(std::string_view(backwards)); }), ErrorCode::NonMonotonicTime);

  const std::string no_speaker = "# start_time = 0\n1\ta\ta\tNOUN\t_\t_\t_\t_\t_\t_\n\n";
  EXPECT_EQ(code_of([&] { parse_conllu(std::string_view(no_speaker)); }), ErrorCode::MissingMetadata);

  const std::string bad_upos = "# speaker = SPK\n# start_time = 0\n1\ta\ta\tNOUNISH\t_\t_\t_\t_\t_\t_\n\n";
  EXPECT_EQ(code_of([&] { parse_conllu(std::string_view(bad_upos)); }), ErrorCode::InvalidUPOS);

  const std::string short_line = "# speaker = SPK\n# start_time = 0\n1\ta\ta\n\n";
  try {
    parse_conllu(std::string_view(short_line));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Conllu, RoundTripRandom) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    Transcript t = lexiprof::testing::random_transcript(rng);
    const std::string once = serialize_conllu(t);
    Transcript back = parse_conllu(std::string_view(once));
    EXPECT_EQ(back, t);
    EXPECT_EQ(serialize_conllu(back), once);
  }
}

TEST(Slice, HalfOpenBoundaries) {
  Transcript t;
  t.duration = 600;
  t.utterances.push_back({SpeakerRole::Interviewee, 290.0, {Token::word("a", "a", Upos::NOUN)}});
  t.utterances.push_back({SpeakerRole::Interviewer, 295.0, {Token::word("q", "q", Upos::NOUN)}});
  t.utterances.push_back({SpeakerRole::Interviewee, 300.0, {Token::word("b", "b", Upos::NOUN)}});
  TokenWindow w = slice(t, 0, 300, SpeakerRole::Interviewee);
  ASSERT_EQ(w.tokens.size(), 1u);
  EXPECT_EQ(w.tokens[0].surface, "a");
  TokenWindow w2 = slice(t, 300, 600, SpeakerRole::Interviewee);
  ASSERT_EQ(w2.tokens.size(), 1u);
  EXPECT_EQ(w2.tokens[0].surface, "b");
  EXPECT_EQ(slice(t, 0, 600, SpeakerRole::Interviewer).tokens.size(), 1u);
}

TEST(Slice, InvalidSpan) {
  Transcript t;
  EXPECT_EQ(code_of([&] { slice(t, 10, 5, SpeakerRole::Interviewee); }), ErrorCode::InvalidSpan);
  EXPECT_EQ(code_of([&] { slice(t, -1, 5, SpeakerRole::Interviewee); }), ErrorCode::InvalidSpan);
}

TEST(Slice, Additive) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    Transcript t = lexiprof::testing::random_transcript(rng);
    const double end = t.duration + 1;
    std::uniform_real_distribution<double> pick(0.0, end);
    double a = pick(rng), b = pick(rng);
    if (a > b) std::swap(a, b);
    const double c = end;
    for (SpeakerRole role : {SpeakerRole::Interviewee, SpeakerRole::Interviewer}) {
      TokenWindow whole = slice(t, a, c, role);
      TokenWindow left = slice(t, a, b, role);
      TokenWindow right = slice(t, b, c, role);
      std::vector<Token> joined = left.tokens;
      joined.insert(joined.end(), right.tokens.begin(), right.tokens.end());
      EXPECT_EQ(joined, whole.tokens);
      EXPECT_EQ(left.utterance_count() + right.utterance_count(), whole.utterance_count());
    }
  }
}

TEST(Validate, AcceptsParsedTranscripts) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 50; ++i) EXPECT_NO_THROW(validate(lexiprof::testing::random_transcript(rng)));
  Transcript bad;
  bad.utterances.push_back({SpeakerRole::Interviewee, 10, {}});
  bad.utterances.push_back({SpeakerRole::Interviewee, 5, {}});
  bad.duration = 20;
  EXPECT_THROW(validate(bad), Error);
}

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lexiprof {

enum class ErrorCode {
  MalformedTimeMarker,
  MissingSpeakerPrefix,
  NonMonotonicTime,
  MissingMetadata,
  InvalidUPOS,
  ParseError,
  InvalidSpan,
  LexiconLoadError,
  PassthroughOnUntagged,
  UntaggedInput,
  InvalidConfig,
  EmptyConstructionWindow,
  MissingLemmas,
  SpanOverlap,
  InvalidModel,
  IOError,
};

std::string_view error_name(ErrorCode code);

// All library failures are reported through this type; the code is what
// callers dispatch on, the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lexiprof

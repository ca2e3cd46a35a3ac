#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lexiprof::cli {

// Exit codes shared by all subcommands.
inline constexpr int kOk = 0;
inline constexpr int kUsageOrParse = 2;
inline constexpr int kEmptyConstruction = 3;
inline constexpr int kSpanOverlap = 4;
inline constexpr int kMissingLemmas = 5;
inline constexpr int kIo = 6;

// Entry point behind the `lexiprof` binary; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lexiprof::cli

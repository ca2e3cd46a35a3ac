#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lexiprof::text {

// Lower-cases UTF-8 text. Covers ASCII, Latin-1, Latin Extended-A, Greek
// and basic Cyrillic, which is everything Dutch transcripts contain.
// Invalid byte sequences are copied through unchanged.
std::string fold_case(std::string_view s);

std::vector<std::string> split_whitespace(std::string_view s);
std::string_view trim(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);

// Shortest representation that parses back to the same double.
std::string format_shortest(double v);
// Fixed notation, `decimals` places, '.' separator regardless of locale.
std::string format_fixed(double v, int decimals);
// Strict decimal parse; rejects trailing garbage, inf and nan.
bool parse_double(std::string_view s, double& out);

// 64-bit FNV-1a, used for provenance hashes.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

}  // namespace lexiprof::text

#pragma once

// nlohmann/json conversions shared by the profile, experiment and synth
// serializers. Not part of the public headers.

#include <json.hpp>

#include "lexiprof/error.hpp"
#include "lexiprof/profile.hpp"

namespace lexiprof::json_io {

using Json = nlohmann::ordered_json;

Json config_json(const ProfileConfig& c);
ProfileConfig config_from(const Json& j);

Json k_map_json(const std::map<ProfileCategory, int>& k);
std::map<ProfileCategory, int> k_map_from(const Json& j);

Json parse_document(std::string_view text, ErrorCode code);

// Throws `code` when `j` has keys outside `allowed`.
void reject_unknown_keys(const Json& j, std::initializer_list<std::string_view> allowed, ErrorCode code);

}  // namespace lexiprof::json_io

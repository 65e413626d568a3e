#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mh::text {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

// Splits on any character in `seps`; empty tokens are dropped.
std::vector<std::string> split_any(std::string_view s, std::string_view seps);

// Splits on a single separator character; empty tokens are kept.
std::vector<std::string> split(std::string_view s, char sep);

// Lowercases and collapses runs of whitespace to a single space, trimming ends.
std::string fold_ws(std::string_view s);

// Lowercases and strips every non-alphanumeric character ("Physical Object",
// "physical-object" and "PhysicalObject" all map to "physicalobject").
std::string squash_key(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool is_digits(std::string_view s);
std::optional<int> parse_int(std::string_view s);

// RFC 3986 percent-encoding for query parameter values.
std::string url_encode(std::string_view s);

} // namespace mh::text

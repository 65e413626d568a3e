#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mh::csv {

// RFC 4180 field quoting: quotes only when needed.
std::string encode_field(std::string_view field);
std::string encode_row(const std::vector<std::string>& fields);

// Parses one logical row (handles quoted fields with embedded separators,
// quotes and newlines). Returns false at end of stream.
bool read_row(std::istream& in, std::vector<std::string>& out);

} // namespace mh::csv

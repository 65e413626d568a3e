#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mh/error.hpp"
#include "mh/record.hpp"

namespace mh::parser {

// Envelope-level result of parsing one ListRecords/ListIdentifiers/GetRecord page.
struct PageContents {
    std::string response_date;
    std::vector<RawRecord> records; // document order; deleted headers yield tombstones
    std::optional<std::string> resumption_token;
    std::optional<uint64_t> complete_list_size;
    std::optional<uint64_t> cursor;
    std::optional<std::string> error_code; // in-band protocol error, when present
    std::string error_message;
};

// Throws Error(malformed_response) carrying the byte offset of the first violation.
PageContents parse_page_contents(std::string_view page_bytes);

// Convenience: just the records.
std::vector<RawRecord> parse_page(std::string_view page_bytes);

// Turns one raw envelope into the typed field model. Values are captured
// verbatim; unknown elements land in `extras`. Understands both the
// oai_datacite envelope (DataCite resource payload) and oai_dc payloads.
// Throws Error(malformed_metadata) when the payload is not well-formed.
ParsedRecord parse_record_metadata(const RawRecord& raw);

// True iff every presence bit except DataCenter is clear.
bool detect_empty(const ParsedRecord& p);

} // namespace mh::parser

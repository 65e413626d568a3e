#pragma once

#include <json.hpp>

#include "mh/canonical.hpp"
#include "mh/record.hpp"

namespace mh {

nlohmann::json to_json(const ParsedRecord& p);
ParsedRecord parsed_record_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CanonicalRecord& c);
CanonicalRecord canonical_record_from_json(const nlohmann::json& j);

} // namespace mh

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mh/record.hpp"
#include "mh/store.hpp"

namespace mh::test {

// Declarative description of one fixture record, rendered to envelope XML in
// either payload dialect.
struct RecordSpec {
    std::string oai_identifier;
    std::string datestamp = "2016-04-01";
    std::string set_spec = "BL.IMPERIAL";
    bool deleted = false;
    bool empty_payload = false; // envelope with data centre only
    bool dc_dialect = false;    // oai_dc payload instead of the datacite resource

    std::string doi;
    std::vector<std::string> creators;
    std::vector<std::string> titles;
    std::string publisher;
    std::vector<std::string> dates; // merged-form values ("2005", "Available:01/2/2005")
    std::vector<std::string> subjects;
    std::vector<std::string> contributors;
    std::string type_general;
    std::string type_subtype;
    std::vector<std::string> descriptions;
    std::vector<std::string> relations;
    std::vector<std::string> formats;
    std::vector<std::string> languages;
    std::vector<std::string> rights;
};

std::string record_xml(const RecordSpec& spec);

std::string list_records_page(const std::vector<RecordSpec>& records,
                              const std::optional<std::string>& resumption_token,
                              std::optional<uint64_t> cursor = std::nullopt,
                              std::optional<uint64_t> complete_list_size = std::nullopt);

std::string get_record_page(const RecordSpec& record);

std::string error_page(const std::string& code, const std::string& message);

// A fully-populated record touching all fourteen fields.
RecordSpec full_record(const std::string& oai_identifier);

// Fig-2 style record: OAI id and data centre only.
RecordSpec empty_record(const std::string& oai_identifier, const std::string& set_spec);

// Direct ParsedRecord construction for store/analytics fixtures.
ParsedRecord make_parsed(const std::string& oai_identifier, const std::string& data_center,
                         const std::string& type_general = "", const std::string& subtype = "",
                         const std::string& publisher = "", const std::string& year = "",
                         const std::vector<std::string>& relations = {});

// Randomized ParsedRecord for property tests; presence pattern varies.
ParsedRecord random_parsed(std::mt19937_64& rng, const std::string& oai_identifier);

// Stored record with canonical attached, for report-level fixtures.
store::StoredRecord make_stored(const ParsedRecord& parsed, const std::string& datestamp = "2016-04-01");

} // namespace mh::test

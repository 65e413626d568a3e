#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mh {

// The fourteen fields retrieved per record. Order fixes the presence bitmap.
enum class FieldName : uint8_t {
    Identifier = 0,
    Creator,
    Title,
    Publisher,
    Date,
    Subject,
    Contributor,
    ResourceType,
    Description,
    DataCenter,
    Relation,
    Format,
    Language,
    Rights,
};

inline constexpr int kFieldCount = 14;

const char* field_name(FieldName f);
inline uint16_t field_bit(FieldName f) { return static_cast<uint16_t>(1u << static_cast<uint8_t>(f)); }

// One OAI-PMH record envelope as it came off the wire.
struct RawRecord {
    std::string oai_identifier;
    std::string datestamp;
    std::vector<std::string> set_specs;
    bool deleted = false;
    std::optional<std::string> metadata_payload; // raw XML bytes, absent for tombstones
};

struct AlternateIdentifier {
    std::string scheme;
    std::string value;
    bool operator==(const AlternateIdentifier&) const = default;
};

struct SubjectEntry {
    std::string value;
    std::optional<std::string> scheme;
    bool operator==(const SubjectEntry&) const = default;
};

struct ContributorEntry {
    std::string name;
    std::optional<std::string> contribution_type;
    bool operator==(const ContributorEntry&) const = default;
};

struct ResourceTypeRaw {
    std::string general;
    std::optional<std::string> subtype;
    bool operator==(const ResourceTypeRaw&) const = default;
};

struct DescriptionEntry {
    std::string kind;
    std::string body;
    bool operator==(const DescriptionEntry&) const = default;
};

// Typed field model, captured verbatim. Normalization happens downstream.
struct ParsedRecord {
    std::string oai_identifier;
    std::optional<std::string> primary_identifier; // DOI when present
    std::vector<AlternateIdentifier> alternate_identifiers;
    std::vector<std::string> creators;
    std::vector<std::string> titles;
    std::optional<std::string> publisher_raw;
    std::vector<std::string> date_values; // merged field: bare years and "Type:value" strings
    std::vector<SubjectEntry> subjects;
    std::vector<ContributorEntry> contributors;
    std::optional<ResourceTypeRaw> resource_type_raw;
    std::vector<DescriptionEntry> descriptions;
    std::string data_center_id;
    std::vector<std::string> relations_raw;
    std::vector<std::string> formats;
    std::vector<std::string> languages_raw;
    std::vector<std::string> rights;
    std::vector<std::pair<std::string, std::string>> extras; // unknown elements, never dropped
    uint16_t presence = 0;

    bool has(FieldName f) const { return presence & field_bit(f); }
    void recompute_presence();

    bool operator==(const ParsedRecord&) const = default;
};

} // namespace mh

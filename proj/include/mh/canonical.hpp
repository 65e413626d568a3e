#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mh {

enum class DateKind : uint8_t {
    Accepted,
    Available,
    Copyrighted,
    Collected,
    Created,
    Issued,
    Submitted,
    Updated,
    Valid,
};

const char* date_kind_name(DateKind k);
std::optional<DateKind> date_kind_from(std::string_view name); // case-insensitive

struct CalendarDate {
    int year = 0;
    int month = 0;
    int day = 0;
    bool operator==(const CalendarDate&) const = default;
};

struct DateEvent {
    DateKind kind;
    std::string raw;
    std::optional<int> year;
    std::optional<CalendarDate> full_date;
    bool operator==(const DateEvent&) const = default;
};

// Closed fifteen-value top level of the resource-type classification.
enum class ResourceType : uint8_t {
    Dataset,
    Text,
    Image,
    Collection,
    Software,
    Audiovisual,
    Film,
    PhysicalObject,
    Event,
    Model,
    InteractiveResource,
    Sound,
    Workflow,
    Service,
    Other,
};

inline constexpr int kResourceTypeCount = 15;
const char* resource_type_name(ResourceType t);
std::optional<ResourceType> resource_type_from_name(std::string_view name); // exact canonical name

enum class QualityFlag : uint8_t {
    EmptyRecord,
    YearOutOfRange,
    MultiplePublicationYears,
    UnknownResourceType,
    DatasetLikeOther,
    AmbiguousLanguage,
    UnparseableDate,
};

const char* quality_flag_name(QualityFlag f);
std::optional<QualityFlag> quality_flag_from(std::string_view name);

using FlagSet = std::set<QualityFlag>;

struct CreatorName {
    std::string family;
    std::optional<std::string> given_or_initials;
    bool operator==(const CreatorName&) const = default;
};

// Cleaned view of a record. Raw values stay on the ParsedRecord; flags
// annotate, they never alter values.
struct CanonicalRecord {
    std::optional<std::string> doi; // lowercased, "doi:" prefix stripped
    std::optional<int> publication_year;
    std::vector<DateEvent> date_events;
    std::optional<ResourceType> resource_type;
    std::optional<std::string> resource_subtype; // normalized free text
    std::optional<bool> is_data_record;          // defined iff resource_type defined
    std::vector<std::string> language_codes;     // ISO 639-1
    std::vector<CreatorName> creators_normalized;
    FlagSet flags;

    bool operator==(const CanonicalRecord&) const = default;
};

} // namespace mh

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mh/canonical.hpp"
#include "mh/record.hpp"

namespace mh::cleaning {

struct Config {
    int year_min = 1000;
    int year_max = 2099;
    // "plausible modern" sub-window, used only by reports
    int plausible_year_min = 1850;
    int plausible_year_max = 2031;
    std::vector<std::string> extra_org_tokens;                       // appended to the built-ins
    std::vector<std::pair<std::string, std::string>> language_overrides; // token -> ISO 639-1
};

struct DateNormalization {
    std::optional<int> publication_year;
    std::vector<DateEvent> events;
    FlagSet flags;
};

// Bare four-digit tokens are publication-year candidates; "Kind:value"
// strings become typed events. Candidates outside the window are rejected
// with YearOutOfRange; of several surviving candidates the earliest wins,
// flagged MultiplePublicationYears. Unparseable entries are kept raw and
// flagged; nothing is ever dropped silently.
DateNormalization normalize_dates(const std::vector<std::string>& date_values,
                                  const Config& cfg = {});

struct TypeNormalization {
    std::optional<ResourceType> type;
    std::optional<std::string> subtype;
    FlagSet flags;
};

TypeNormalization normalize_resource_type(const std::optional<ResourceTypeRaw>& raw);

std::optional<bool> classify_data_record(std::optional<ResourceType> type);

struct LanguageNormalization {
    std::vector<std::string> codes; // ISO 639-1, first occurrence kept
    FlagSet flags;
};

LanguageNormalization normalize_language(std::string_view raw, const Config& cfg = {});

CreatorName normalize_agent_name(std::string_view raw, const Config& cfg = {});

CanonicalRecord canonicalize(const ParsedRecord& p, const Config& cfg = {});

namespace lang {
// ISO 639-1 lookup over two-letter codes, three-letter (terminological and
// bibliographic) codes and English names. Returns the two-letter code.
std::optional<std::string> to_iso639_1(std::string_view token);
} // namespace lang

} // namespace mh::cleaning

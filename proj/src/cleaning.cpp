#include "mh/cleaning.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>
#include <unordered_set>

#include "mh/schema_parser.hpp"
#include "mh/text.hpp"

namespace mh::cleaning {

namespace {

bool year_in_window(int y, const Config& cfg) {
    return y >= cfg.year_min && y <= cfg.year_max;
}

int days_in_month(int year, int month) {
    static constexpr std::array<int, 13> days = {0, 31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return days[static_cast<size_t>(month)];
}

bool valid_date(int y, int m, int d) {
    return m >= 1 && m <= 12 && d >= 1 && d <= days_in_month(y, m);
}

// Recognized date-value grammar: a bare four-digit year, day/month/year with
// '/' separators, or an ISO yyyy-mm-dd.
std::optional<CalendarDate> parse_date_value(std::string_view v) {
    auto parts_slash = text::split(v, '/');
    if (parts_slash.size() == 3 && text::is_digits(parts_slash[0]) &&
        text::is_digits(parts_slash[1]) && parts_slash[2].size() == 4 &&
        text::is_digits(parts_slash[2]) && parts_slash[0].size() <= 2 &&
        parts_slash[1].size() <= 2) {
        int d = *text::parse_int(parts_slash[0]);
        int m = *text::parse_int(parts_slash[1]);
        int y = *text::parse_int(parts_slash[2]);
        if (valid_date(y, m, d))
            return CalendarDate{y, m, d};
        return std::nullopt;
    }
    auto parts_dash = text::split(v, '-');
    if (parts_dash.size() == 3 && parts_dash[0].size() == 4 && text::is_digits(parts_dash[0]) &&
        parts_dash[1].size() == 2 && text::is_digits(parts_dash[1]) &&
        parts_dash[2].size() == 2 && text::is_digits(parts_dash[2])) {
        int y = *text::parse_int(parts_dash[0]);
        int m = *text::parse_int(parts_dash[1]);
        int d = *text::parse_int(parts_dash[2]);
        if (valid_date(y, m, d))
            return CalendarDate{y, m, d};
        return std::nullopt;
    }
    return std::nullopt;
}

bool is_bare_year(std::string_view v) {
    return v.size() == 4 && text::is_digits(v);
}

} // namespace

DateNormalization normalize_dates(const std::vector<std::string>& date_values, const Config& cfg) {
    DateNormalization out;
    std::vector<int> candidates;

    for (const std::string& value : date_values) {
        std::string_view trimmed = text::trim(value);
        if (trimmed.empty()) {
            out.flags.insert(QualityFlag::UnparseableDate);
            continue;
        }
        if (is_bare_year(trimmed)) {
            int y = *text::parse_int(trimmed);
            if (!year_in_window(y, cfg)) {
                out.flags.insert(QualityFlag::YearOutOfRange);
            } else {
                candidates.push_back(y);
            }
            continue;
        }
        size_t colon = trimmed.find(':');
        if (colon != std::string_view::npos) {
            auto kind = date_kind_from(trimmed.substr(0, colon));
            if (kind) {
                DateEvent ev;
                ev.kind = *kind;
                ev.raw = std::string(trimmed);
                std::string_view rest = text::trim(trimmed.substr(colon + 1));
                if (is_bare_year(rest)) {
                    ev.year = *text::parse_int(rest);
                } else if (auto date = parse_date_value(rest)) {
                    ev.full_date = date;
                    ev.year = date->year;
                } else {
                    out.flags.insert(QualityFlag::UnparseableDate);
                }
                out.events.push_back(std::move(ev));
                continue;
            }
        }
        // neither a bare year nor a recognized typed date
        out.flags.insert(QualityFlag::UnparseableDate);
    }

    if (!candidates.empty()) {
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        out.publication_year = candidates.front(); // earliest of the survivors
        if (candidates.size() > 1)
            out.flags.insert(QualityFlag::MultiplePublicationYears);
    }
    return out;
}

namespace {

const std::unordered_map<std::string, ResourceType>& type_key_map() {
    static const auto* map = [] {
        auto* m = new std::unordered_map<std::string, ResourceType>();
        for (int i = 0; i < kResourceTypeCount; ++i) {
            auto t = static_cast<ResourceType>(i);
            (*m)[text::squash_key(resource_type_name(t))] = t;
        }
        (*m)["interactiveresources"] = ResourceType::InteractiveResource; // plural variant
        (*m)["physicalobjects"] = ResourceType::PhysicalObject;
        (*m)["datasets"] = ResourceType::Dataset;
        return m;
    }();
    return *map;
}

} // namespace

TypeNormalization normalize_resource_type(const std::optional<ResourceTypeRaw>& raw) {
    TypeNormalization out;
    if (!raw)
        return out;

    std::string general_key = text::squash_key(raw->general);
    if (!general_key.empty()) {
        const auto& m = type_key_map();
        auto it = m.find(general_key);
        if (it != m.end())
            out.type = it->second;
        else
            out.flags.insert(QualityFlag::UnknownResourceType);
    } else if (!raw->general.empty() || raw->subtype) {
        out.flags.insert(QualityFlag::UnknownResourceType);
    }

    if (raw->subtype) {
        std::string sub = text::fold_ws(*raw->subtype);
        if (!sub.empty())
            out.subtype = sub;
    }

    if (out.type == ResourceType::Other && out.subtype == "data sheet")
        out.flags.insert(QualityFlag::DatasetLikeOther);
    return out;
}

std::optional<bool> classify_data_record(std::optional<ResourceType> type) {
    if (!type)
        return std::nullopt;
    return *type != ResourceType::Text;
}

LanguageNormalization normalize_language(std::string_view raw, const Config& cfg) {
    LanguageNormalization out;
    std::unordered_set<std::string> seen;
    for (const std::string& token : text::split_any(raw, "-,;/")) {
        std::string_view t = text::trim(token);
        if (t.empty())
            continue;
        std::optional<std::string> code = lang::to_iso639_1(t);
        if (!code) {
            std::string key = text::to_lower(t);
            for (const auto& [from, to] : cfg.language_overrides)
                if (key == text::to_lower(from)) {
                    code = to;
                    break;
                }
        }
        if (!code) {
            out.flags.insert(QualityFlag::AmbiguousLanguage);
            continue;
        }
        if (seen.insert(*code).second)
            out.codes.push_back(*code);
    }
    return out;
}

namespace {

const std::unordered_set<std::string>& builtin_org_tokens() {
    static const auto* set = new std::unordered_set<std::string>{
        "university",  "universitat",  "universitaet", "universite", "universidad",
        "college",     "institute",    "institut",     "institution", "center",
        "centre",      "laboratory",   "laboratoire",  "lab",         "library",
        "museum",      "archive",      "archives",     "consortium",  "foundation",
        "society",     "association",  "academy",      "agency",      "department",
        "ministry",    "council",      "network",      "project",     "group",
        "observatory", "survey",       "press",        "publishing",  "publishers",
        "publisher",   "gmbh",         "inc",          "inc.",        "ltd",
        "ltd.",        "corp",         "corp.",        "corporation", "company",
        "co.",         "school",       "repository",   "databank",    "bibliothek",
    };
    return *set;
}

bool looks_like_organization(std::string_view raw, const Config& cfg) {
    for (char c : raw)
        if (c >= '0' && c <= '9')
            return true;
    const auto& builtin = builtin_org_tokens();
    for (const std::string& token : text::split_any(text::to_lower(raw), " \t")) {
        std::string key = token;
        while (!key.empty() && (key.back() == ',' || key.back() == ';' || key.back() == ')'))
            key.pop_back();
        while (!key.empty() && key.front() == '(')
            key.erase(key.begin());
        if (builtin.count(key))
            return true;
        for (const auto& extra : cfg.extra_org_tokens)
            if (key == text::to_lower(extra))
                return true;
    }
    return false;
}

} // namespace

CreatorName normalize_agent_name(std::string_view raw, const Config& cfg) {
    std::string_view trimmed = text::trim(raw);
    CreatorName out;

    size_t comma = trimmed.find(',');
    if (comma != std::string_view::npos) {
        out.family = std::string(text::trim(trimmed.substr(0, comma)));
        std::string_view rest = text::trim(trimmed.substr(comma + 1));
        if (!rest.empty())
            out.given_or_initials = std::string(rest);
        if (out.family.empty())
            out.family = std::string(trimmed);
        return out;
    }

    if (looks_like_organization(trimmed, cfg)) {
        out.family = std::string(trimmed);
        return out;
    }

    size_t last_ws = trimmed.find_last_of(" \t");
    if (last_ws == std::string_view::npos) {
        out.family = std::string(trimmed);
        return out;
    }
    out.family = std::string(trimmed.substr(last_ws + 1));
    std::string_view given = text::trim(trimmed.substr(0, last_ws));
    if (!given.empty())
        out.given_or_initials = std::string(given);
    return out;
}

CanonicalRecord canonicalize(const ParsedRecord& p, const Config& cfg) {
    CanonicalRecord c;

    if (parser::detect_empty(p))
        c.flags.insert(QualityFlag::EmptyRecord);

    if (p.primary_identifier) {
        std::string doi = text::to_lower(text::trim(*p.primary_identifier));
        if (doi.rfind("doi:", 0) == 0)
            doi = std::string(text::trim(std::string_view(doi).substr(4)));
        if (!doi.empty())
            c.doi = doi;
    }

    DateNormalization dates = normalize_dates(p.date_values, cfg);
    c.publication_year = dates.publication_year;
    c.date_events = std::move(dates.events);
    c.flags.insert(dates.flags.begin(), dates.flags.end());

    TypeNormalization type = normalize_resource_type(p.resource_type_raw);
    c.resource_type = type.type;
    c.resource_subtype = type.subtype;
    c.flags.insert(type.flags.begin(), type.flags.end());
    c.is_data_record = classify_data_record(c.resource_type);

    std::unordered_set<std::string> seen_codes;
    for (const std::string& raw : p.languages_raw) {
        LanguageNormalization ln = normalize_language(raw, cfg);
        c.flags.insert(ln.flags.begin(), ln.flags.end());
        for (auto& code : ln.codes)
            if (seen_codes.insert(code).second)
                c.language_codes.push_back(code);
    }

    for (const std::string& creator : p.creators) {
        if (text::trim(creator).empty())
            continue;
        c.creators_normalized.push_back(normalize_agent_name(creator, cfg));
    }

    return c;
}

} // namespace mh::cleaning

#include "mh/serde.hpp"

#include "mh/error.hpp"

namespace mh {

using nlohmann::json;

namespace {

json opt_str(const std::optional<std::string>& v) {
    return v ? json(*v) : json(nullptr);
}

std::optional<std::string> str_opt(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null())
        return std::nullopt;
    return j[key].get<std::string>();
}

} // namespace

json to_json(const ParsedRecord& p) {
    json j;
    j["oai"] = p.oai_identifier;
    j["id"] = opt_str(p.primary_identifier);
    j["alt_ids"] = json::array();
    for (const auto& a : p.alternate_identifiers)
        j["alt_ids"].push_back({{"scheme", a.scheme}, {"value", a.value}});
    j["creators"] = p.creators;
    j["titles"] = p.titles;
    j["publisher"] = opt_str(p.publisher_raw);
    j["dates"] = p.date_values;
    j["subjects"] = json::array();
    for (const auto& s : p.subjects)
        j["subjects"].push_back({{"value", s.value}, {"scheme", opt_str(s.scheme)}});
    j["contributors"] = json::array();
    for (const auto& c : p.contributors)
        j["contributors"].push_back({{"name", c.name}, {"type", opt_str(c.contribution_type)}});
    if (p.resource_type_raw)
        j["type"] = {{"general", p.resource_type_raw->general},
                     {"subtype", opt_str(p.resource_type_raw->subtype)}};
    else
        j["type"] = nullptr;
    j["descriptions"] = json::array();
    for (const auto& d : p.descriptions)
        j["descriptions"].push_back({{"kind", d.kind}, {"body", d.body}});
    j["data_center"] = p.data_center_id;
    j["relations"] = p.relations_raw;
    j["formats"] = p.formats;
    j["languages"] = p.languages_raw;
    j["rights"] = p.rights;
    j["extras"] = json::array();
    for (const auto& [k, v] : p.extras)
        j["extras"].push_back({{"name", k}, {"text", v}});
    return j;
}

ParsedRecord parsed_record_from_json(const json& j) {
    ParsedRecord p;
    p.oai_identifier = j.value("oai", "");
    p.primary_identifier = str_opt(j, "id");
    for (const auto& a : j.value("alt_ids", json::array()))
        p.alternate_identifiers.push_back({a.value("scheme", ""), a.value("value", "")});
    p.creators = j.value("creators", std::vector<std::string>{});
    p.titles = j.value("titles", std::vector<std::string>{});
    p.publisher_raw = str_opt(j, "publisher");
    p.date_values = j.value("dates", std::vector<std::string>{});
    for (const auto& s : j.value("subjects", json::array()))
        p.subjects.push_back({s.value("value", ""), str_opt(s, "scheme")});
    for (const auto& c : j.value("contributors", json::array()))
        p.contributors.push_back({c.value("name", ""), str_opt(c, "type")});
    if (j.contains("type") && !j["type"].is_null())
        p.resource_type_raw =
            ResourceTypeRaw{j["type"].value("general", ""), str_opt(j["type"], "subtype")};
    for (const auto& d : j.value("descriptions", json::array()))
        p.descriptions.push_back({d.value("kind", ""), d.value("body", "")});
    p.data_center_id = j.value("data_center", "");
    p.relations_raw = j.value("relations", std::vector<std::string>{});
    p.formats = j.value("formats", std::vector<std::string>{});
    p.languages_raw = j.value("languages", std::vector<std::string>{});
    p.rights = j.value("rights", std::vector<std::string>{});
    for (const auto& e : j.value("extras", json::array()))
        p.extras.emplace_back(e.value("name", ""), e.value("text", ""));
    p.recompute_presence();
    return p;
}

json to_json(const CanonicalRecord& c) {
    json j;
    j["doi"] = opt_str(c.doi);
    j["year"] = c.publication_year ? json(*c.publication_year) : json(nullptr);
    j["events"] = json::array();
    for (const auto& e : c.date_events) {
        json ej;
        ej["kind"] = date_kind_name(e.kind);
        ej["raw"] = e.raw;
        ej["year"] = e.year ? json(*e.year) : json(nullptr);
        if (e.full_date)
            ej["date"] = {{"y", e.full_date->year}, {"m", e.full_date->month}, {"d", e.full_date->day}};
        else
            ej["date"] = nullptr;
        j["events"].push_back(std::move(ej));
    }
    j["type"] = c.resource_type ? json(resource_type_name(*c.resource_type)) : json(nullptr);
    j["subtype"] = opt_str(c.resource_subtype);
    j["is_data"] = c.is_data_record ? json(*c.is_data_record) : json(nullptr);
    j["languages"] = c.language_codes;
    j["creators"] = json::array();
    for (const auto& n : c.creators_normalized)
        j["creators"].push_back({{"family", n.family}, {"given", opt_str(n.given_or_initials)}});
    j["flags"] = json::array();
    for (auto f : c.flags)
        j["flags"].push_back(quality_flag_name(f));
    return j;
}

CanonicalRecord canonical_record_from_json(const json& j) {
    CanonicalRecord c;
    c.doi = str_opt(j, "doi");
    if (j.contains("year") && !j["year"].is_null())
        c.publication_year = j["year"].get<int>();
    for (const auto& ej : j.value("events", json::array())) {
        DateEvent e;
        auto kind = date_kind_from(ej.value("kind", ""));
        if (!kind)
            throw Error(Errc::io, "unknown date kind in stored record");
        e.kind = *kind;
        e.raw = ej.value("raw", "");
        if (ej.contains("year") && !ej["year"].is_null())
            e.year = ej["year"].get<int>();
        if (ej.contains("date") && !ej["date"].is_null())
            e.full_date = CalendarDate{ej["date"].value("y", 0), ej["date"].value("m", 0),
                                       ej["date"].value("d", 0)};
        c.date_events.push_back(std::move(e));
    }
    if (auto t = str_opt(j, "type")) {
        auto rt = resource_type_from_name(*t);
        if (!rt)
            throw Error(Errc::io, "unknown resource type in stored record: " + *t);
        c.resource_type = rt;
    }
    c.resource_subtype = str_opt(j, "subtype");
    if (j.contains("is_data") && !j["is_data"].is_null())
        c.is_data_record = j["is_data"].get<bool>();
    c.language_codes = j.value("languages", std::vector<std::string>{});
    for (const auto& nj : j.value("creators", json::array()))
        c.creators_normalized.push_back({nj.value("family", ""), str_opt(nj, "given")});
    for (const auto& fj : j.value("flags", json::array())) {
        auto f = quality_flag_from(fj.get<std::string>());
        if (!f)
            throw Error(Errc::io, "unknown quality flag in stored record");
        c.flags.insert(*f);
    }
    return c;
}

} // namespace mh

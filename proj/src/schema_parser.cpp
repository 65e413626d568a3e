#include "mh/schema_parser.hpp"

#include "mh/text.hpp"
#include "mh/xml.hpp"

namespace mh::parser {

namespace {

uint64_t parse_count(std::string_view s, uint64_t fallback) {
    uint64_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9')
            return fallback;
        v = v * 10 + static_cast<uint64_t>(c - '0');
    }
    return s.empty() ? fallback : v;
}

// Parses one <record> (or bare <header>) element; the parser is positioned
// just after the corresponding StartElement.
RawRecord parse_record_element(xml::PullParser& p, bool bare_header) {
    RawRecord rec;
    bool in_header = bare_header;
    if (bare_header) {
        // status attribute of <header>
        if (p.attribute("status") == "deleted")
            rec.deleted = true;
    }
    size_t depth = 1;
    while (depth > 0) {
        xml::Token t = p.next();
        if (t == xml::Token::StartElement) {
            std::string_view local = p.local_name();
            if (local == "header") {
                if (p.attribute("status") == "deleted")
                    rec.deleted = true;
                in_header = true;
                ++depth;
            } else if (in_header && local == "identifier") {
                rec.oai_identifier = p.read_element_text();
            } else if (in_header && local == "datestamp") {
                rec.datestamp = p.read_element_text();
            } else if (in_header && local == "setSpec") {
                rec.set_specs.push_back(p.read_element_text());
            } else if (local == "metadata") {
                std::string_view inner = p.capture_inner_xml();
                rec.metadata_payload = std::string(text::trim(inner));
            } else {
                p.skip_element();
            }
        } else if (t == xml::Token::EndElement) {
            if (p.local_name() == "header")
                in_header = bare_header;
            --depth;
        } else if (t == xml::Token::End) {
            throw Error(Errc::malformed_response, "truncated record element");
        }
    }
    if (rec.deleted)
        rec.metadata_payload.reset(); // tombstones carry no payload
    return rec;
}

} // namespace

PageContents parse_page_contents(std::string_view page_bytes) {
    PageContents page;
    xml::PullParser p(page_bytes);
    bool saw_root = false;
    try {
        for (;;) {
            xml::Token t = p.next();
            if (t == xml::Token::End)
                break;
            if (t != xml::Token::StartElement)
                continue;
            std::string_view local = p.local_name();
            if (local == "OAI-PMH") {
                saw_root = true;
            } else if (local == "responseDate") {
                page.response_date = p.read_element_text();
            } else if (local == "request") {
                p.skip_element();
            } else if (local == "error") {
                std::string code(p.attribute("code"));
                page.error_code = code;
                page.error_message = p.read_element_text();
            } else if (local == "record") {
                page.records.push_back(parse_record_element(p, false));
            } else if (local == "header") {
                // ListIdentifiers pages carry bare headers
                page.records.push_back(parse_record_element(p, true));
            } else if (local == "resumptionToken") {
                std::string_view size_attr = p.attribute("completeListSize");
                if (!size_attr.empty())
                    page.complete_list_size = parse_count(size_attr, 0);
                std::string_view cursor_attr = p.attribute("cursor");
                if (!cursor_attr.empty())
                    page.cursor = parse_count(cursor_attr, 0);
                std::string token = p.read_element_text();
                std::string_view trimmed = text::trim(token);
                if (!trimmed.empty())
                    page.resumption_token = std::string(trimmed);
            }
            // other envelope elements (ListRecords, GetRecord, ...) are descended into
        }
    } catch (const xml::ParseError&) {
        throw; // carries Errc::malformed_response plus the byte offset
    }
    if (!saw_root)
        throw Error(Errc::malformed_response, "missing OAI-PMH root element");
    return page;
}

std::vector<RawRecord> parse_page(std::string_view page_bytes) {
    return parse_page_contents(page_bytes).records;
}

namespace {

bool looks_like_doi(std::string_view v) {
    std::string_view s = text::trim(v);
    if (s.size() > 4 && (s.substr(0, 4) == "doi:" || s.substr(0, 4) == "DOI:"))
        s = s.substr(4);
    return s.size() > 3 && s.substr(0, 3) == "10." && s.find('/') != std::string_view::npos;
}

std::string strip_doi_prefix(std::string_view v) {
    std::string_view s = text::trim(v);
    if (s.size() > 4 && (s.substr(0, 4) == "doi:" || s.substr(0, 4) == "DOI:"))
        s = text::trim(s.substr(4));
    return std::string(s);
}

void add_identifier(ParsedRecord& out, std::string value, std::string scheme_hint) {
    if (value.empty())
        return;
    if (!out.primary_identifier && (scheme_hint == "DOI" || (scheme_hint.empty() && looks_like_doi(value)))) {
        out.primary_identifier = strip_doi_prefix(value);
        return;
    }
    std::string scheme = scheme_hint;
    if (scheme.empty()) {
        if (looks_like_doi(value))
            scheme = "DOI";
        else if (value.rfind("http://", 0) == 0 || value.rfind("https://", 0) == 0)
            scheme = "URL";
        else
            scheme = "Other";
    }
    out.alternate_identifiers.push_back({std::move(scheme), std::move(value)});
}

// DataCite kernel <resource> payload.
void map_resource_payload(xml::PullParser& p, ParsedRecord& out) {
    size_t depth = 1;
    while (depth > 0) {
        xml::Token t = p.next();
        if (t == xml::Token::EndElement) {
            --depth;
            continue;
        }
        if (t == xml::Token::End)
            throw Error(Errc::malformed_metadata, "truncated resource payload");
        if (t != xml::Token::StartElement)
            continue;
        std::string local(p.local_name());
        if (local == "identifier") {
            add_identifier(out, p.read_element_text(), std::string(p.attribute("identifierType")));
        } else if (local == "alternateIdentifier") {
            std::string scheme(p.attribute("alternateIdentifierType"));
            out.alternate_identifiers.push_back({scheme.empty() ? "Other" : scheme, p.read_element_text()});
        } else if (local == "creatorName") {
            out.creators.push_back(p.read_element_text());
        } else if (local == "title") {
            out.titles.push_back(p.read_element_text());
        } else if (local == "publisher") {
            std::string v = p.read_element_text();
            if (!v.empty())
                out.publisher_raw = v;
        } else if (local == "publicationYear") {
            std::string v(text::trim(p.read_element_text()));
            if (!v.empty())
                out.date_values.push_back(v);
        } else if (local == "date") {
            std::string kind(p.attribute("dateType"));
            std::string v(text::trim(p.read_element_text()));
            if (kind.empty())
                out.date_values.push_back(v);
            else
                out.date_values.push_back(kind + ":" + v);
        } else if (local == "subject") {
            std::string scheme(p.attribute("subjectScheme"));
            SubjectEntry e{p.read_element_text(), std::nullopt};
            if (!scheme.empty())
                e.scheme = scheme;
            out.subjects.push_back(std::move(e));
        } else if (local == "contributor") {
            std::string kind(p.attribute("contributorType"));
            ContributorEntry e{p.read_element_text(), std::nullopt};
            if (!kind.empty())
                e.contribution_type = kind;
            out.contributors.push_back(std::move(e));
        } else if (local == "resourceType") {
            std::string general(p.attribute("resourceTypeGeneral"));
            std::string sub(text::trim(p.read_element_text()));
            ResourceTypeRaw rt{general, std::nullopt};
            if (!sub.empty())
                rt.subtype = sub;
            if (!general.empty() || rt.subtype)
                out.resource_type_raw = std::move(rt);
        } else if (local == "description") {
            std::string kind(p.attribute("descriptionType"));
            out.descriptions.push_back({kind, p.read_element_text()});
        } else if (local == "relatedIdentifier") {
            // relation type labels are not part of the retrieved data model
            std::string v(text::trim(p.read_element_text()));
            if (!v.empty())
                out.relations_raw.push_back(v);
        } else if (local == "format") {
            out.formats.push_back(p.read_element_text());
        } else if (local == "language") {
            std::string v(text::trim(p.read_element_text()));
            if (!v.empty())
                out.languages_raw.push_back(v);
        } else if (local == "rights") {
            out.rights.push_back(p.read_element_text());
        } else if (local == "creators" || local == "titles" || local == "subjects" ||
                   local == "contributors" || local == "creator" || local == "dates" ||
                   local == "alternateIdentifiers" || local == "descriptions" ||
                   local == "relatedIdentifiers" || local == "formats" || local == "rightsList" ||
                   local == "sizes" || local == "geoLocations" || local == "version") {
            if (local == "sizes" || local == "geoLocations" || local == "version") {
                out.extras.emplace_back(local, p.read_element_text());
            } else {
                ++depth; // container: descend
            }
        } else {
            out.extras.emplace_back(local, p.read_element_text());
        }
    }
}

// Dublin Core payload: merged fields come through verbatim.
void map_dc_payload(xml::PullParser& p, ParsedRecord& out) {
    size_t depth = 1;
    int type_seen = 0;
    while (depth > 0) {
        xml::Token t = p.next();
        if (t == xml::Token::EndElement) {
            --depth;
            continue;
        }
        if (t == xml::Token::End)
            throw Error(Errc::malformed_metadata, "truncated dc payload");
        if (t != xml::Token::StartElement)
            continue;
        std::string local(p.local_name());
        if (local == "identifier") {
            add_identifier(out, p.read_element_text(), "");
        } else if (local == "creator") {
            out.creators.push_back(p.read_element_text());
        } else if (local == "title") {
            out.titles.push_back(p.read_element_text());
        } else if (local == "publisher") {
            std::string v = p.read_element_text();
            if (!v.empty())
                out.publisher_raw = v;
        } else if (local == "date") {
            std::string v(text::trim(p.read_element_text()));
            if (!v.empty())
                out.date_values.push_back(v);
        } else if (local == "subject") {
            out.subjects.push_back({p.read_element_text(), std::nullopt});
        } else if (local == "contributor") {
            out.contributors.push_back({p.read_element_text(), std::nullopt});
        } else if (local == "type") {
            // first value is the top-level type, a second one the subtype
            std::string v(text::trim(p.read_element_text()));
            if (v.empty())
                continue;
            if (type_seen == 0) {
                out.resource_type_raw = ResourceTypeRaw{v, std::nullopt};
            } else if (out.resource_type_raw && !out.resource_type_raw->subtype) {
                out.resource_type_raw->subtype = v;
            }
            ++type_seen;
        } else if (local == "description") {
            out.descriptions.push_back({"", p.read_element_text()});
        } else if (local == "relation") {
            std::string v(text::trim(p.read_element_text()));
            if (!v.empty())
                out.relations_raw.push_back(v);
        } else if (local == "format") {
            out.formats.push_back(p.read_element_text());
        } else if (local == "language") {
            std::string v(text::trim(p.read_element_text()));
            if (!v.empty())
                out.languages_raw.push_back(v);
        } else if (local == "rights") {
            out.rights.push_back(p.read_element_text());
        } else {
            out.extras.emplace_back(local, p.read_element_text());
        }
    }
}

} // namespace

ParsedRecord parse_record_metadata(const RawRecord& raw) {
    ParsedRecord out;
    out.oai_identifier = raw.oai_identifier;

    // The data-center symbol lives in the set spec and, for oai_datacite
    // payloads, in the envelope; both survive record emptying.
    for (const auto& s : raw.set_specs) {
        if (s.find('.') != std::string::npos) {
            out.data_center_id = s;
            break;
        }
    }
    if (out.data_center_id.empty() && !raw.set_specs.empty())
        out.data_center_id = raw.set_specs.front();

    if (raw.metadata_payload && !raw.metadata_payload->empty()) {
        try {
            xml::PullParser p(*raw.metadata_payload);
            for (;;) {
                xml::Token t = p.next();
                if (t == xml::Token::End)
                    break;
                if (t != xml::Token::StartElement)
                    continue;
                std::string local(p.local_name());
                if (local == "oai_datacite" || local == "payload") {
                    continue; // envelope wrappers: descend
                } else if (local == "datacentreSymbol") {
                    std::string v(text::trim(p.read_element_text()));
                    if (!v.empty())
                        out.data_center_id = v;
                } else if (local == "schemaVersion" || local == "isReferenceQuality") {
                    p.skip_element();
                } else if (local == "resource") {
                    map_resource_payload(p, out);
                } else if (local == "dc") {
                    map_dc_payload(p, out);
                } else {
                    out.extras.emplace_back(local, p.read_element_text());
                }
            }
        } catch (const xml::ParseError& e) {
            throw Error(Errc::malformed_metadata,
                        "record " + raw.oai_identifier + ": " + e.what());
        }
    }

    if (out.data_center_id.empty())
        out.data_center_id = "(unknown)";
    out.recompute_presence();
    return out;
}

bool detect_empty(const ParsedRecord& p) {
    uint16_t content = p.presence & static_cast<uint16_t>(~field_bit(FieldName::DataCenter));
    return content == 0;
}

} // namespace mh::parser

#include "mh/relation.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "mh/csv.hpp"
#include "mh/schema_parser.hpp"
#include "mh/text.hpp"

namespace mh::relation {

const char* scheme_name(Scheme s) {
    switch (s) {
    case Scheme::doi: return "doi";
    case Scheme::arxiv: return "arxiv";
    case Scheme::bibcode: return "bibcode";
    case Scheme::handle: return "handle";
    case Scheme::url: return "url";
    case Scheme::other: return "other";
    }
    return "?";
}

const char* resolution_name(Resolution r) {
    switch (r) {
    case Resolution::Internal: return "internal";
    case Resolution::ExternalMatched: return "external-matched";
    case Resolution::Unresolved: return "unresolved";
    }
    return "?";
}

namespace {

bool has_prefix_ci(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size())
        return false;
    for (size_t i = 0; i < prefix.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(s[i])) !=
            std::tolower(static_cast<unsigned char>(prefix[i])))
            return false;
    return true;
}

bool is_doi_form(std::string_view s) {
    return s.size() > 3 && s.substr(0, 3) == "10." && s.find('/') != std::string_view::npos;
}

// Bibcodes are fixed 19-character identifiers that lead with a year,
// e.g. 1974AJ.....79..819H.
bool is_bibcode(std::string_view s) {
    if (s.size() != 19)
        return false;
    for (int i = 0; i < 4; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            return false;
    int year = (s[0] - '0') * 1000 + (s[1] - '0') * 100 + (s[2] - '0') * 10 + (s[3] - '0');
    if (year < 1000 || year > 2999)
        return false;
    for (char c : s.substr(4)) {
        unsigned char u = static_cast<unsigned char>(c);
        if (!std::isalnum(u) && c != '.' && c != '&' && c != '+' && c != '-')
            return false;
    }
    return true;
}

// A handle is <numeric prefix>/<suffix>; DOI prefixes (10.*) are caught first.
bool is_bare_handle(std::string_view s) {
    size_t slash = s.find('/');
    if (slash == std::string_view::npos || slash == 0 || slash + 1 >= s.size())
        return false;
    return text::is_digits(s.substr(0, slash));
}

} // namespace

std::string normalize_doi(std::string_view value) {
    std::string_view s = text::trim(value);
    if (has_prefix_ci(s, "doi:"))
        s = text::trim(s.substr(4));
    return text::to_lower(s);
}

Scheme classify_scheme(std::string_view value) {
    std::string_view s = text::trim(value);
    if (is_doi_form(s))
        return Scheme::doi;
    if (has_prefix_ci(s, "doi:") && is_doi_form(text::trim(s.substr(4))))
        return Scheme::doi;
    if (has_prefix_ci(s, "arxiv:"))
        return Scheme::arxiv;
    if (is_bibcode(s))
        return Scheme::bibcode;
    if (has_prefix_ci(s, "hdl:") || is_bare_handle(s))
        return Scheme::handle;
    if (has_prefix_ci(s, "http://") || has_prefix_ci(s, "https://"))
        return Scheme::url;
    return Scheme::other;
}

std::vector<RelationEdge> extract_relation_edges(const store::StoredRecord& record) {
    std::vector<RelationEdge> edges;
    edges.reserve(record.parsed.relations_raw.size());
    for (const std::string& value : record.parsed.relations_raw) {
        RelationEdge e;
        e.source_oai = record.oai_identifier;
        if (record.canonical && record.canonical->doi)
            e.source_doi = record.canonical->doi;
        else if (record.parsed.primary_identifier)
            e.source_doi = normalize_doi(*record.parsed.primary_identifier);
        e.target_raw = value;
        e.scheme = classify_scheme(value);
        if (e.scheme == Scheme::doi)
            e.target_doi = normalize_doi(value);
        e.resolution = Resolution::Unresolved;
        edges.push_back(std::move(e));
    }
    return edges;
}

ExternalIndex ExternalIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::missing_registry, "cannot open external index " + path.string());
    ExternalIndex index;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view t = text::trim(line);
        if (!t.empty())
            index.insert(t);
    }
    return index;
}

void ExternalIndex::insert(std::string_view doi) {
    dois_.insert(normalize_doi(doi));
}

bool ExternalIndex::contains(std::string_view normalized_doi) const {
    return dois_.count(std::string(normalized_doi)) > 0;
}

DoiLookup DoiLookup::build(const store::Store& store) {
    DoiLookup lookup;
    store.for_each({}, [&](const store::StoredRecord& r) {
        std::string doi;
        if (r.canonical && r.canonical->doi)
            doi = *r.canonical->doi;
        else if (r.parsed.primary_identifier)
            doi = normalize_doi(*r.parsed.primary_identifier);
        if (doi.empty())
            return;
        std::optional<ResourceType> type;
        if (r.canonical)
            type = r.canonical->resource_type;
        lookup.by_doi.emplace(std::move(doi), Target{r.oai_identifier, type});
    });
    return lookup;
}

void resolve_edges(std::vector<RelationEdge>& edges, const DoiLookup& lookup,
                   const ExternalIndex& index) {
    for (RelationEdge& e : edges) {
        e.resolution = Resolution::Unresolved;
        e.target_resource_type.reset();
        if (e.scheme != Scheme::doi || e.target_doi.empty())
            continue;
        auto it = lookup.by_doi.find(e.target_doi);
        if (it != lookup.by_doi.end()) {
            e.resolution = Resolution::Internal;
            e.target_resource_type = it->second.resource_type;
            continue;
        }
        if (index.contains(e.target_doi))
            e.resolution = Resolution::ExternalMatched;
    }
}

RelationStats compute_relation_stats(
    const std::function<void(const std::function<void(const store::StoredRecord&)>&)>& records,
    const std::vector<RelationEdge>& edges) {
    RelationStats stats;

    std::unordered_map<std::string, uint64_t> edges_by_source;
    uint64_t internal_dataset = 0;
    for (const RelationEdge& e : edges) {
        ++edges_by_source[e.source_oai];
        ++stats.edges_total;
        switch (e.resolution) {
        case Resolution::Internal:
            ++stats.edges_internal;
            if (e.target_resource_type && *e.target_resource_type == ResourceType::Dataset)
                ++internal_dataset;
            break;
        case Resolution::ExternalMatched:
            ++stats.edges_external;
            break;
        case Resolution::Unresolved:
            ++stats.edges_unresolved;
            break;
        }
    }

    struct CenterTally {
        uint64_t records = 0;
        uint64_t with_edges = 0;
    };
    std::map<std::string, CenterTally> centers;

    records([&](const store::StoredRecord& r) {
        ++stats.records_all;
        bool empty = parser::detect_empty(r.parsed);
        if (empty)
            return; // empty records stay out of relation denominators
        ++stats.records_total;
        auto it = edges_by_source.find(r.oai_identifier);
        uint64_t n = (it == edges_by_source.end()) ? 0 : it->second;
        CenterTally& tally = centers[r.parsed.data_center_id];
        ++tally.records;
        if (n > 0) {
            ++stats.records_with_edges;
            ++tally.with_edges;
            ++stats.edges_per_record[n];
        }
    });

    stats.share_with_relations =
        stats.records_total ? static_cast<double>(stats.records_with_edges) /
                                  static_cast<double>(stats.records_total)
                            : 0.0;
    stats.share_with_relations_all =
        stats.records_all ? static_cast<double>(stats.records_with_edges) /
                                static_cast<double>(stats.records_all)
                          : 0.0;
    stats.internal_share = stats.edges_total ? static_cast<double>(stats.edges_internal) /
                                                   static_cast<double>(stats.edges_total)
                                             : 0.0;
    stats.external_share = stats.edges_total ? static_cast<double>(stats.edges_external) /
                                                   static_cast<double>(stats.edges_total)
                                             : 0.0;
    stats.internal_dataset_share =
        stats.edges_internal ? static_cast<double>(internal_dataset) /
                                   static_cast<double>(stats.edges_internal)
                             : 0.0;

    stats.centers_total = centers.size();
    for (const auto& [_, tally] : centers) {
        if (tally.with_edges > 0)
            ++stats.centers_with_any;
        if (tally.records > 0 && tally.with_edges == tally.records)
            ++stats.centers_with_all;
    }
    return stats;
}

RelationStats compute_relation_stats(const store::Store& store,
                                     const std::vector<RelationEdge>& edges) {
    return compute_relation_stats(
        [&](const std::function<void(const store::StoredRecord&)>& fn) {
            store.for_each({}, fn);
        },
        edges);
}

void write_edges_csv(std::ostream& out, const std::vector<RelationEdge>& edges) {
    out << "source_oai,source_doi,target_raw,scheme,resolution,target_type\n";
    for (const RelationEdge& e : edges) {
        out << csv::encode_row({e.source_oai, e.source_doi.value_or(""), e.target_raw,
                                scheme_name(e.scheme), resolution_name(e.resolution),
                                e.target_resource_type ? resource_type_name(*e.target_resource_type)
                                                       : ""})
            << '\n';
    }
}

std::vector<RelationEdge> read_edges_csv(std::istream& in) {
    std::vector<RelationEdge> edges;
    std::vector<std::string> row;
    bool header = true;
    while (csv::read_row(in, row)) {
        if (header) {
            header = false;
            continue;
        }
        if (row.size() < 6)
            continue;
        RelationEdge e;
        e.source_oai = row[0];
        if (!row[1].empty())
            e.source_doi = row[1];
        e.target_raw = row[2];
        for (int s = 0; s <= static_cast<int>(Scheme::other); ++s)
            if (row[3] == scheme_name(static_cast<Scheme>(s)))
                e.scheme = static_cast<Scheme>(s);
        for (int r = 0; r <= static_cast<int>(Resolution::Unresolved); ++r)
            if (row[4] == resolution_name(static_cast<Resolution>(r)))
                e.resolution = static_cast<Resolution>(r);
        if (!row[5].empty())
            e.target_resource_type = resource_type_from_name(row[5]);
        if (e.scheme == Scheme::doi)
            e.target_doi = normalize_doi(e.target_raw);
        edges.push_back(std::move(e));
    }
    return edges;
}

} // namespace mh::relation

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mh/canonical.hpp"
#include "mh/store.hpp"

namespace mh::relation {

enum class Scheme { doi, arxiv, bibcode, handle, url, other };
const char* scheme_name(Scheme s);

enum class Resolution { Internal, ExternalMatched, Unresolved };
const char* resolution_name(Resolution r);

struct RelationEdge {
    std::string source_oai;
    std::optional<std::string> source_doi;
    std::string target_raw;
    Scheme scheme = Scheme::other;
    Resolution resolution = Resolution::Unresolved;
    std::optional<ResourceType> target_resource_type; // only when Internal
    std::string target_doi; // normalized lowercase, empty for non-DOI schemes
};

Scheme classify_scheme(std::string_view value);
std::string normalize_doi(std::string_view value); // lowercase, "doi:" prefix stripped

// One edge per relation value, resolution Unresolved.
std::vector<RelationEdge> extract_relation_edges(const store::StoredRecord& record);

// Newline-delimited DOIs, UTF-8; entries normalized to lowercase "10." form.
class ExternalIndex {
public:
    ExternalIndex() = default;
    static ExternalIndex load(const std::filesystem::path& path);
    void insert(std::string_view doi);
    bool contains(std::string_view normalized_doi) const;
    size_t size() const { return dois_.size(); }

private:
    std::unordered_set<std::string> dois_;
};

// DOI -> stored record lookup for internal resolution.
struct DoiLookup {
    struct Target {
        std::string oai_identifier;
        std::optional<ResourceType> resource_type;
    };
    std::unordered_map<std::string, Target> by_doi;

    static DoiLookup build(const store::Store& store);
};

// Internal beats ExternalMatched; unresolved otherwise.
void resolve_edges(std::vector<RelationEdge>& edges, const DoiLookup& lookup,
                   const ExternalIndex& index);

struct RelationStats {
    uint64_t records_total = 0;     // non-empty records
    uint64_t records_all = 0;       // including empty ones
    uint64_t records_with_edges = 0;
    double share_with_relations = 0.0;     // over non-empty records
    double share_with_relations_all = 0.0; // over all records
    std::map<uint64_t, uint64_t> edges_per_record; // edge count -> records (>= 1 edge)
    uint64_t edges_total = 0;
    uint64_t edges_internal = 0;
    uint64_t edges_external = 0;
    uint64_t edges_unresolved = 0;
    double internal_share = 0.0;         // of all edges
    double external_share = 0.0;         // of all edges
    double internal_dataset_share = 0.0; // of internal edges, target type Dataset
    uint64_t centers_total = 0;
    uint64_t centers_with_any = 0;
    uint64_t centers_with_all = 0;
};

// Reduction over a store snapshot plus the resolved edge list. Record order
// does not affect the result.
RelationStats compute_relation_stats(
    const std::function<void(const std::function<void(const store::StoredRecord&)>&)>& records,
    const std::vector<RelationEdge>& edges);

RelationStats compute_relation_stats(const store::Store& store,
                                     const std::vector<RelationEdge>& edges);

// Edge export: source_doi, target_raw, scheme, resolution, target_type.
void write_edges_csv(std::ostream& out, const std::vector<RelationEdge>& edges);
std::vector<RelationEdge> read_edges_csv(std::istream& in);

} // namespace mh::relation

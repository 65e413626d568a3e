#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mh/error.hpp"

namespace mh::store {
struct StoredRecord;
}

namespace mh::entity {

// Eleven mutually exclusive publisher categories.
enum class EntityType : uint8_t {
    ThematicRepository,
    InstitutionalRepository,
    ResearchBody,
    MultidisciplinaryRepository,
    ScientificPublisher,
    NationalRepository,
    Firm,
    ProfessionalBody,
    Conference,
    Individual,
    EducationalBody,
};

inline constexpr int kEntityTypeCount = 11;
const char* entity_type_name(EntityType t);
std::optional<EntityType> entity_type_from(std::string_view name);

struct PublisherEntity {
    std::string entity_id;
    std::string canonical_name;
    std::vector<std::string> countries; // ISO codes, possibly several
    EntityType entity_type = EntityType::ThematicRepository;
};

struct DataCenter {
    std::string symbol; // ALLOCATOR.REPOSITORY
    std::string allocator;
    std::string repository;
    std::vector<std::string> countries;
};

// Split at the first "."; throws Error(malformed_symbol) when there is no dot
// or either part is empty.
std::pair<std::string, std::string> parse_data_center_symbol(std::string_view symbol);

// Curated alias table: raw publisher strings -> canonical entities.
// CSV columns: raw_name, entity_id, canonical_name, entity_type, countries
// (semicolon-separated ISO codes). UTF-8, header row required.
class AliasTable {
public:
    static AliasTable load_csv(const std::filesystem::path& path);
    static std::string normalize_alias(std::string_view raw); // trim/case-fold/ws-collapse

    void add(const std::string& raw_name, const PublisherEntity& entity);

    const PublisherEntity* resolve(std::string_view raw) const; // nullptr when unresolved
    const PublisherEntity* entity(const std::string& entity_id) const;
    size_t alias_count() const { return aliases_.size(); }
    size_t entity_count() const { return entities_.size(); }

private:
    std::unordered_map<std::string, std::string> aliases_; // normalized raw -> entity_id
    std::map<std::string, PublisherEntity> entities_;
};

// symbol -> countries. CSV columns: symbol, countries (semicolon-separated).
class DataCenterRegistry {
public:
    static DataCenterRegistry load_csv(const std::filesystem::path& path);

    void add(const std::string& symbol, std::vector<std::string> countries);
    // Empty when the symbol has no mapping (caller substitutes Unknown).
    std::vector<std::string> countries_for(std::string_view symbol) const;
    size_t size() const { return centers_.size(); }

private:
    std::map<std::string, std::vector<std::string>, std::less<>> centers_;
};

struct Registries {
    AliasTable publishers;
    DataCenterRegistry data_centers;
};

struct CoverageRow {
    std::string publisher_raw;
    uint64_t record_count = 0;
    double cumulative_share = 0.0;
};

struct CoverageRanking {
    std::vector<CoverageRow> rows; // record_count descending, name ascending on ties
    uint64_t total_records = 0;
};

// `cut` is the minimal prefix length whose cumulative share reaches `target`.
// Throws Error(empty_input) on an empty counts map and
// Error(invalid_argument) when target is outside (0, 1].
std::pair<CoverageRanking, size_t> rank_publishers_by_coverage(
    const std::map<std::string, uint64_t>& counts, double target);

enum class AttributionBy { data_center, publisher };

// Whole counting: the record is attributed fully to every associated country;
// a missing mapping yields the Unknown marker.
std::vector<std::string> attribute_countries(const store::StoredRecord& record, AttributionBy by,
                                             const Registries& registries);

} // namespace mh::entity

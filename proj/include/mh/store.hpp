#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "mh/canonical.hpp"
#include "mh/error.hpp"
#include "mh/record.hpp"

namespace mh::entity {
class AliasTable;
struct Registries;
}

namespace mh::store {

struct StoredRecord {
    std::string oai_identifier;
    std::string latest_datestamp;
    ParsedRecord parsed;
    std::optional<CanonicalRecord> canonical;
    uint32_t version_count = 1;
};

enum class UpsertOutcome { Inserted, Replaced, IgnoredStale };

// Conjunctive predicates; a default-constructed filter matches everything.
struct ScanFilter {
    std::vector<FieldName> require_present;
    std::optional<ResourceType> resource_type;
    std::optional<bool> is_data_record;
    std::optional<std::string> data_center;
    std::optional<std::pair<int, int>> year_range; // inclusive
    std::optional<std::string> publisher_entity;   // entity_id; needs `aliases`
    std::optional<bool> empty;
    const entity::AliasTable* aliases = nullptr;

    bool matches(const StoredRecord& r) const;
};

enum class Dimension { data_center, resource_type, publisher_entity, country, publication_year };

// Bucket for records where the requested dimension is undefined.
inline constexpr const char* kMissingBucket = "(missing)";
// Bucket for publisher strings absent from the alias table.
inline constexpr const char* kNotFoundBucket = "(not-found)";
// Country marker for symbols/entities with no registry mapping.
inline constexpr const char* kUnknownCountry = "Unknown";

struct StageMarks {
    bool parse_done = false;
    bool clean_done = false;
    bool resolve_done = false;
    bool link_done = false;
};

// Embedded record store: an append log of JSON lines under one directory,
// replayed into an in-memory index keyed by OAI identifier. Latest datestamp
// wins; empty records are stored and flagged, never dropped. Single writer,
// concurrent readers.
class Store {
public:
    explicit Store(std::filesystem::path dir);
    ~Store();

    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    UpsertOutcome upsert_record(const ParsedRecord& p, const std::string& datestamp);

    // Attaches the cleaned form; returns false when the record is unknown.
    // The no-op case (identical canonical already stored) is reported so the
    // clean stage can count actual modifications.
    enum class CanonicalOutcome { Set, Unchanged, UnknownRecord };
    CanonicalOutcome set_canonical(const std::string& oai_identifier, const CanonicalRecord& c);

    // Deterministic order by OAI identifier; each matching record exactly once.
    void for_each(const ScanFilter& filter, const std::function<void(const StoredRecord&)>& fn) const;

    std::optional<StoredRecord> get(const std::string& oai_identifier) const;

    // Counts per dimension value; records without the dimension land in the
    // missing bucket. The country dimension uses whole counting over the
    // data-center registry, so its totals may exceed the record count.
    std::map<std::string, uint64_t> count_by(Dimension dim, const ScanFilter& filter,
                                             const entity::Registries* registries = nullptr) const;

    uint64_t size() const;
    void flush();
    void compact(); // rewrites the log as one entry per live record

    void export_ndjson(std::ostream& out) const;
    uint64_t import_ndjson(std::istream& in); // returns records imported

    StageMarks stage_marks() const;
    void set_stage_marks(const StageMarks& m);

    const std::filesystem::path& dir() const { return dir_; }

private:
    void replay_log();
    void append_line(const std::string& line);

    std::filesystem::path dir_;
    std::filesystem::path log_path_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, StoredRecord> records_;
    StageMarks marks_;
    std::ofstream log_;
};

} // namespace mh::store

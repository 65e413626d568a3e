#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mh/canonical.hpp"
#include "mh/entity.hpp"
#include "mh/record.hpp"
#include "mh/store.hpp"

namespace mh::analytics {

using RecordVisitor = std::function<void(const store::StoredRecord&)>;
using RecordSource = std::function<void(const RecordVisitor&)>;

RecordSource source_from(const store::Store& store, const store::ScanFilter& filter = {});

// Percentage display arithmetic: half-up rounding to two decimals.
double round_half_up_2(double pct);
std::string format_pct(double pct); // "41.69"

struct FieldCompleteness {
    uint64_t count_present = 0;
    double share_over_all = 0.0;      // fraction of every retrieved record
    double share_over_nonempty = 0.0; // fraction of records with any content
};

struct CompletenessMatrix {
    uint64_t total_records = 0;
    uint64_t empty_records = 0;
    uint64_t nonempty_records = 0;
    double empty_share = 0.0; // over all records
    std::map<FieldName, FieldCompleteness> fields;
};

CompletenessMatrix completeness_matrix(const RecordSource& records);

struct SubtypeShare {
    std::string subtype;
    uint64_t count = 0;
    double share = 0.0; // over records of the type that have a subtype
};

struct ResourceTypeRow {
    ResourceType type;
    uint64_t count = 0;
    double share = 0.0; // over records with a type
    std::vector<SubtypeShare> top_subtypes;
};

struct ResourceTypeTable {
    uint64_t records_with_type = 0;
    std::vector<ResourceTypeRow> rows; // count descending, name ascending on ties
};

ResourceTypeTable resource_type_table(const RecordSource& records, size_t top_k = 3);

// Shares recomputed from a plain count map, optionally against an explicit
// denominator (when absent, the counts' own sum).
struct TypeShareRow {
    ResourceType type;
    uint64_t count = 0;
    double share_pct = 0.0; // display percentage, half-up 2 decimals
};
std::vector<TypeShareRow> type_shares_from_counts(const std::map<ResourceType, uint64_t>& counts,
                                                  std::optional<uint64_t> denominator);

struct CountryRow {
    std::string country; // ISO code or Unknown
    uint64_t data_center_count = 0;
    uint64_t record_count = 0;
    uint64_t data_record_count = 0;
    double data_record_share = 0.0; // data records over the country's records
};

struct CountryTable {
    std::vector<CountryRow> rows; // record_count descending, country ascending on ties
    uint64_t records_attributed = 0;
};

// Whole counting: a record counts fully toward each associated country.
// Publisher attribution only covers records carrying both publisher and type
// information.
CountryTable country_table(const RecordSource& records, entity::AttributionBy by,
                           const entity::Registries& registries);

struct PublisherTypeRow {
    std::string label; // entity type name or the not-found bucket
    uint64_t record_count = 0;
    uint64_t data_record_count = 0;
    double data_record_share = 0.0;
    uint64_t publisher_count = 0; // distinct entities (or distinct unresolved names)
};

struct PublisherTypeTable {
    std::vector<PublisherTypeRow> rows; // the eleven types plus Not-found
    uint64_t records_considered = 0;    // records with publisher and type information
};

PublisherTypeTable publisher_type_table(const RecordSource& records,
                                        const entity::AliasTable& aliases);

struct YearHistogram {
    int lo = 0;
    int hi = 0;
    std::map<int, uint64_t> counts; // only years inside the range
    uint64_t excluded_out_of_range = 0;
    uint64_t missing_year = 0;
};

YearHistogram year_histogram(const RecordSource& records, int lo, int hi);

struct DateKindShare {
    uint64_t count = 0;
    double share = 0.0; // over records with at least one event
};

struct DateSubtypeDistribution {
    uint64_t records_with_events = 0;
    std::map<DateKind, DateKindShare> kinds; // a record counts once per kind
};

DateSubtypeDistribution date_subtype_distribution(const RecordSource& records);

struct ConcentrationStats {
    size_t k_for_threshold = 0;
    double threshold = 0.0;
    double top_share = 0.0; // cumulative share of the top k keys
};

// Minimal k whose top-k share reaches the threshold; ties broken by key.
// Throws Error(empty_input) / Error(invalid_argument).
ConcentrationStats concentration_stats(const std::map<std::string, uint64_t>& counts,
                                       double threshold);

} // namespace mh::analytics

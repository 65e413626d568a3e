#include "mh/analytics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <set>

#include "mh/schema_parser.hpp"

namespace mh::analytics {

RecordSource source_from(const store::Store& store, const store::ScanFilter& filter) {
    return [&store, filter](const RecordVisitor& fn) { store.for_each(filter, fn); };
}

double round_half_up_2(double pct) {
    return std::floor(pct * 100.0 + 0.5) / 100.0;
}

std::string format_pct(double pct) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", round_half_up_2(pct));
    return buf;
}

CompletenessMatrix completeness_matrix(const RecordSource& records) {
    CompletenessMatrix m;
    std::array<uint64_t, kFieldCount> present{};
    records([&](const store::StoredRecord& r) {
        ++m.total_records;
        if (parser::detect_empty(r.parsed))
            ++m.empty_records;
        for (int i = 0; i < kFieldCount; ++i)
            if (r.parsed.has(static_cast<FieldName>(i)))
                ++present[static_cast<size_t>(i)];
    });
    m.nonempty_records = m.total_records - m.empty_records;
    m.empty_share = m.total_records
                        ? static_cast<double>(m.empty_records) / static_cast<double>(m.total_records)
                        : 0.0;
    for (int i = 0; i < kFieldCount; ++i) {
        FieldCompleteness fc;
        fc.count_present = present[static_cast<size_t>(i)];
        fc.share_over_all = m.total_records ? static_cast<double>(fc.count_present) /
                                                  static_cast<double>(m.total_records)
                                            : 0.0;
        fc.share_over_nonempty = m.nonempty_records ? static_cast<double>(fc.count_present) /
                                                          static_cast<double>(m.nonempty_records)
                                                    : 0.0;
        m.fields[static_cast<FieldName>(i)] = fc;
    }
    return m;
}

ResourceTypeTable resource_type_table(const RecordSource& records, size_t top_k) {
    ResourceTypeTable table;
    std::map<ResourceType, uint64_t> counts;
    std::map<ResourceType, std::map<std::string, uint64_t>> subtype_counts;
    records([&](const store::StoredRecord& r) {
        if (!r.canonical || !r.canonical->resource_type)
            return;
        ResourceType t = *r.canonical->resource_type;
        ++counts[t];
        ++table.records_with_type;
        if (r.canonical->resource_subtype)
            ++subtype_counts[t][*r.canonical->resource_subtype];
    });

    for (const auto& [type, count] : counts) {
        ResourceTypeRow row;
        row.type = type;
        row.count = count;
        row.share = table.records_with_type ? static_cast<double>(count) /
                                                  static_cast<double>(table.records_with_type)
                                            : 0.0;
        auto sit = subtype_counts.find(type);
        if (sit != subtype_counts.end()) {
            uint64_t with_subtype = 0;
            for (const auto& [_, c] : sit->second)
                with_subtype += c;
            std::vector<SubtypeShare> subs;
            subs.reserve(sit->second.size());
            for (const auto& [name, c] : sit->second)
                subs.push_back({name, c,
                                with_subtype ? static_cast<double>(c) /
                                                   static_cast<double>(with_subtype)
                                             : 0.0});
            std::sort(subs.begin(), subs.end(), [](const SubtypeShare& a, const SubtypeShare& b) {
                if (a.count != b.count)
                    return a.count > b.count;
                return a.subtype < b.subtype;
            });
            if (subs.size() > top_k)
                subs.resize(top_k);
            row.top_subtypes = std::move(subs);
        }
        table.rows.push_back(std::move(row));
    }
    std::sort(table.rows.begin(), table.rows.end(),
              [](const ResourceTypeRow& a, const ResourceTypeRow& b) {
                  if (a.count != b.count)
                      return a.count > b.count;
                  return std::string_view(resource_type_name(a.type)) <
                         std::string_view(resource_type_name(b.type));
              });
    return table;
}

std::vector<TypeShareRow> type_shares_from_counts(const std::map<ResourceType, uint64_t>& counts,
                                                  std::optional<uint64_t> denominator) {
    uint64_t denom = denominator.value_or(0);
    if (!denominator)
        for (const auto& [_, c] : counts)
            denom += c;
    std::vector<TypeShareRow> rows;
    rows.reserve(counts.size());
    for (const auto& [type, count] : counts) {
        TypeShareRow row;
        row.type = type;
        row.count = count;
        row.share_pct =
            denom ? round_half_up_2(100.0 * static_cast<double>(count) / static_cast<double>(denom))
                  : 0.0;
        rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end(), [](const TypeShareRow& a, const TypeShareRow& b) {
        if (a.count != b.count)
            return a.count > b.count;
        return std::string_view(resource_type_name(a.type)) <
               std::string_view(resource_type_name(b.type));
    });
    return rows;
}

CountryTable country_table(const RecordSource& records, entity::AttributionBy by,
                           const entity::Registries& registries) {
    CountryTable table;
    struct Tally {
        std::set<std::string> centers;
        uint64_t records = 0;
        uint64_t data_records = 0;
    };
    std::map<std::string, Tally> tallies;

    records([&](const store::StoredRecord& r) {
        if (by == entity::AttributionBy::publisher) {
            // mirror of the publisher-based figure: records with both
            // publisher and type information
            if (!r.parsed.publisher_raw || !r.canonical || !r.canonical->resource_type)
                return;
        }
        bool is_data = r.canonical && r.canonical->is_data_record && *r.canonical->is_data_record;
        ++table.records_attributed;
        for (const std::string& country : entity::attribute_countries(r, by, registries)) {
            Tally& t = tallies[country];
            t.centers.insert(r.parsed.data_center_id);
            ++t.records;
            if (is_data)
                ++t.data_records;
        }
    });

    for (const auto& [country, t] : tallies) {
        CountryRow row;
        row.country = country;
        row.data_center_count = t.centers.size();
        row.record_count = t.records;
        row.data_record_count = t.data_records;
        row.data_record_share =
            t.records ? static_cast<double>(t.data_records) / static_cast<double>(t.records) : 0.0;
        table.rows.push_back(std::move(row));
    }
    std::sort(table.rows.begin(), table.rows.end(), [](const CountryRow& a, const CountryRow& b) {
        if (a.record_count != b.record_count)
            return a.record_count > b.record_count;
        return a.country < b.country;
    });
    return table;
}

PublisherTypeTable publisher_type_table(const RecordSource& records,
                                        const entity::AliasTable& aliases) {
    PublisherTypeTable table;
    struct Tally {
        uint64_t records = 0;
        uint64_t data_records = 0;
        std::set<std::string> publishers;
    };
    std::map<int, Tally> by_type; // EntityType index
    Tally not_found;

    records([&](const store::StoredRecord& r) {
        if (!r.parsed.publisher_raw || !r.canonical || !r.canonical->resource_type)
            return; // only records with both publisher and type information
        ++table.records_considered;
        bool is_data = r.canonical->is_data_record && *r.canonical->is_data_record;
        const entity::PublisherEntity* e = aliases.resolve(*r.parsed.publisher_raw);
        if (e) {
            Tally& t = by_type[static_cast<int>(e->entity_type)];
            ++t.records;
            if (is_data)
                ++t.data_records;
            t.publishers.insert(e->entity_id);
        } else {
            ++not_found.records;
            if (is_data)
                ++not_found.data_records;
            not_found.publishers.insert(entity::AliasTable::normalize_alias(*r.parsed.publisher_raw));
        }
    });

    auto to_row = [](std::string label, const Tally& t) {
        PublisherTypeRow row;
        row.label = std::move(label);
        row.record_count = t.records;
        row.data_record_count = t.data_records;
        row.data_record_share =
            t.records ? static_cast<double>(t.data_records) / static_cast<double>(t.records) : 0.0;
        row.publisher_count = t.publishers.size();
        return row;
    };

    for (int i = 0; i < entity::kEntityTypeCount; ++i) {
        auto it = by_type.find(i);
        table.rows.push_back(to_row(entity::entity_type_name(static_cast<entity::EntityType>(i)),
                                    it == by_type.end() ? Tally{} : it->second));
    }
    std::sort(table.rows.begin(), table.rows.end(),
              [](const PublisherTypeRow& a, const PublisherTypeRow& b) {
                  if (a.record_count != b.record_count)
                      return a.record_count > b.record_count;
                  return a.label < b.label;
              });
    table.rows.push_back(to_row("Not found", not_found));
    return table;
}

YearHistogram year_histogram(const RecordSource& records, int lo, int hi) {
    if (lo > hi)
        throw Error(Errc::invalid_range, "year range lower bound exceeds upper bound");
    YearHistogram h;
    h.lo = lo;
    h.hi = hi;
    records([&](const store::StoredRecord& r) {
        if (!r.canonical || !r.canonical->publication_year) {
            ++h.missing_year;
            return;
        }
        int y = *r.canonical->publication_year;
        if (y < lo || y > hi)
            ++h.excluded_out_of_range;
        else
            ++h.counts[y];
    });
    return h;
}

DateSubtypeDistribution date_subtype_distribution(const RecordSource& records) {
    DateSubtypeDistribution d;
    records([&](const store::StoredRecord& r) {
        if (!r.canonical || r.canonical->date_events.empty())
            return;
        ++d.records_with_events;
        std::set<DateKind> kinds;
        for (const DateEvent& e : r.canonical->date_events)
            kinds.insert(e.kind);
        for (DateKind k : kinds)
            ++d.kinds[k].count;
    });
    for (auto& [_, share] : d.kinds)
        share.share = d.records_with_events ? static_cast<double>(share.count) /
                                                  static_cast<double>(d.records_with_events)
                                            : 0.0;
    return d;
}

ConcentrationStats concentration_stats(const std::map<std::string, uint64_t>& counts,
                                       double threshold) {
    if (counts.empty())
        throw Error(Errc::empty_input, "no counts to rank");
    if (!(threshold > 0.0) || threshold > 1.0)
        throw Error(Errc::invalid_argument, "threshold must be in (0, 1]");

    std::vector<std::pair<std::string, uint64_t>> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second)
            return a.second > b.second;
        return a.first < b.first;
    });
    uint64_t total = 0;
    for (const auto& [_, c] : sorted)
        total += c;

    ConcentrationStats stats;
    stats.threshold = threshold;
    uint64_t running = 0;
    for (size_t i = 0; i < sorted.size(); ++i) {
        running += sorted[i].second;
        double share = total ? static_cast<double>(running) / static_cast<double>(total) : 0.0;
        if (share >= threshold) {
            stats.k_for_threshold = i + 1;
            stats.top_share = share;
            return stats;
        }
    }
    stats.k_for_threshold = sorted.size();
    stats.top_share = 1.0;
    return stats;
}

} // namespace mh::analytics

#include <doctest.h>

#include <fstream>
#include <random>

#include "mh/analytics.hpp"
#include "mh/cleaning.hpp"
#include "support/fixtures.hpp"
#include "support/tempdir.hpp"

using namespace mh;
using namespace mh::test;

namespace {

analytics::RecordSource source_of(const std::vector<store::StoredRecord>& records) {
    return [&records](const analytics::RecordVisitor& fn) {
        for (const auto& r : records)
            fn(r);
    };
}

} // namespace

TEST_CASE("percentage display rounds half-up to two decimals") {
    CHECK(analytics::format_pct(41.6874) == "41.69");
    CHECK(analytics::format_pct(17.564) == "17.56");
    CHECK(analytics::format_pct(0.005) == "0.01");
    CHECK(analytics::format_pct(0.00499) == "0.00");
    CHECK(analytics::format_pct(99.500086) == "99.50");
    CHECK(analytics::format_pct(0.0) == "0.00");
}

TEST_CASE("completeness reports both denominators") {
    std::vector<store::StoredRecord> records;
    // one record with only a title (plus the envelope-level data centre)
    ParsedRecord title_only;
    title_only.oai_identifier = "oai:x:t";
    title_only.data_center_id = "A.B";
    title_only.titles = {"only title"};
    title_only.recompute_presence();
    records.push_back(make_stored(title_only));

    ParsedRecord empty;
    empty.oai_identifier = "oai:x:e";
    empty.data_center_id = "A.B";
    empty.recompute_presence();
    records.push_back(make_stored(empty));

    auto m = analytics::completeness_matrix(source_of(records));
    CHECK(m.total_records == 2);
    CHECK(m.empty_records == 1);
    CHECK(m.nonempty_records == 1);
    CHECK(m.fields[FieldName::Title].count_present == 1);
    CHECK(m.fields[FieldName::Title].share_over_all == 0.5);
    CHECK(m.fields[FieldName::Title].share_over_nonempty == 1.0);
    CHECK(m.fields[FieldName::Creator].count_present == 0);
    CHECK(m.fields[FieldName::DataCenter].count_present == 2);
}

TEST_CASE("resource type table computes shares over typed records") {
    std::vector<store::StoredRecord> records;
    int id = 0;
    auto add = [&](const std::string& type, const std::string& subtype, int n) {
        for (int i = 0; i < n; ++i)
            records.push_back(make_stored(
                make_parsed("oai:x:" + std::to_string(id++), "A.B", type, subtype)));
    };
    add("Dataset", "dataset", 5);
    add("Dataset", "metadata", 2);
    add("Dataset", "data package", 1);
    add("Dataset", "weird", 1);
    add("Text", "report", 3);
    add("", "", 2); // no type: excluded from the table denominator

    auto table = analytics::resource_type_table(source_of(records), 3);
    CHECK(table.records_with_type == 12);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].type == ResourceType::Dataset);
    CHECK(table.rows[0].count == 9);
    CHECK(table.rows[0].share == doctest::Approx(9.0 / 12.0));
    REQUIRE(table.rows[0].top_subtypes.size() == 3);
    CHECK(table.rows[0].top_subtypes[0].subtype == "dataset");
    CHECK(table.rows[0].top_subtypes[1].subtype == "metadata");
    // tie between "data package" and "weird" broken by name
    CHECK(table.rows[0].top_subtypes[2].subtype == "data package");

    auto empty_table = analytics::resource_type_table(source_of({}), 3);
    CHECK(empty_table.rows.empty());
}

TEST_CASE("type shares from printed counts use the printed denominator") {
    std::map<ResourceType, uint64_t> counts{{ResourceType::Dataset, 1867627},
                                            {ResourceType::Text, 786882}};
    auto rows = analytics::type_shares_from_counts(counts, 4480077);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].type == ResourceType::Dataset);
    CHECK(rows[0].share_pct == 41.69);
    CHECK(rows[1].share_pct == 17.56);
}

TEST_CASE("country table uses whole counting and the text-exclusion rule") {
    TempDir dir("analytics");
    {
        std::ofstream out(dir / "centers.csv");
        out << "symbol,countries\nEE.ONE,EE\nEE.TWO,EE\nSHARED.X,NL;BE\n";
    }
    {
        std::ofstream out(dir / "publishers.csv");
        out << "raw_name,entity_id,canonical_name,entity_type,countries\n"
               "Pub,pub,Pub,Firm,NL;BE\n";
    }
    entity::Registries reg;
    reg.data_centers = entity::DataCenterRegistry::load_csv(dir / "centers.csv");
    reg.publishers = entity::AliasTable::load_csv(dir / "publishers.csv");

    std::vector<store::StoredRecord> records;
    records.push_back(make_stored(make_parsed("oai:x:1", "EE.ONE", "Dataset")));
    records.push_back(make_stored(make_parsed("oai:x:2", "EE.TWO", "Text")));
    records.push_back(make_stored(make_parsed("oai:x:3", "SHARED.X", "Dataset", "", "Pub")));
    records.push_back(make_stored(make_parsed("oai:x:4", "NO.MAP", "Dataset")));

    auto table = analytics::country_table(source_of(records), entity::AttributionBy::data_center,
                                          reg);
    std::map<std::string, analytics::CountryRow> rows;
    for (const auto& r : table.rows)
        rows[r.country] = r;
    REQUIRE(rows.count("EE"));
    CHECK(rows["EE"].data_center_count == 2);
    CHECK(rows["EE"].record_count == 2);
    CHECK(rows["EE"].data_record_count == 1); // the Text record is excluded
    CHECK(rows["EE"].data_record_share == doctest::Approx(0.5));
    // whole counting: the shared record appears under both countries
    CHECK(rows["NL"].record_count == 1);
    CHECK(rows["BE"].record_count == 1);
    CHECK(rows[store::kUnknownCountry].record_count == 1);

    // publisher attribution only covers records with publisher and type
    auto by_pub =
        analytics::country_table(source_of(records), entity::AttributionBy::publisher, reg);
    CHECK(by_pub.records_attributed == 1);
    std::map<std::string, analytics::CountryRow> prow;
    for (const auto& r : by_pub.rows)
        prow[r.country] = r;
    CHECK(prow["NL"].record_count == 1);
    CHECK(prow["BE"].record_count == 1);
}

TEST_CASE("publisher type table buckets unresolved names") {
    TempDir dir("analytics");
    {
        std::ofstream out(dir / "publishers.csv");
        out << "raw_name,entity_id,canonical_name,entity_type,countries\n"
               "RepoOne,r1,Repo One,ThematicRepository,US\n"
               "ConX,cx,Conference X,Conference,DE\n";
    }
    auto aliases = entity::AliasTable::load_csv(dir / "publishers.csv");

    std::vector<store::StoredRecord> records;
    records.push_back(make_stored(make_parsed("oai:x:1", "A.B", "Dataset", "", "RepoOne")));
    records.push_back(make_stored(make_parsed("oai:x:2", "A.B", "Text", "", "RepoOne")));
    records.push_back(make_stored(make_parsed("oai:x:3", "A.B", "Text", "", "ConX")));
    records.push_back(make_stored(make_parsed("oai:x:4", "A.B", "Dataset", "", "Mystery Pub")));
    records.push_back(make_stored(make_parsed("oai:x:5", "A.B", "", "", "RepoOne"))); // no type
    records.push_back(make_stored(make_parsed("oai:x:6", "A.B", "Dataset")));         // no publisher

    auto table = analytics::publisher_type_table(source_of(records), aliases);
    CHECK(table.records_considered == 4);
    std::map<std::string, analytics::PublisherTypeRow> rows;
    for (const auto& r : table.rows)
        rows[r.label] = r;
    CHECK(rows["ThematicRepository"].record_count == 2);
    CHECK(rows["ThematicRepository"].data_record_share == doctest::Approx(0.5));
    CHECK(rows["ThematicRepository"].publisher_count == 1);
    // conferences carry no data records
    CHECK(rows["Conference"].record_count == 1);
    CHECK(rows["Conference"].data_record_share == 0.0);
    CHECK(rows["Not found"].record_count == 1);
    CHECK(rows["Not found"].publisher_count == 1);
    // all eleven types plus the bucket are present
    CHECK(table.rows.size() == 12);
}

TEST_CASE("year histogram separates excluded and missing") {
    std::vector<store::StoredRecord> records;
    records.push_back(make_stored(make_parsed("oai:x:1", "A.B", "Image", "", "", "1929")));
    records.push_back(make_stored(make_parsed("oai:x:2", "A.B", "Dataset", "", "", "2005")));
    records.push_back(make_stored(make_parsed("oai:x:3", "A.B", "Dataset", "", "", "2005")));
    records.push_back(make_stored(make_parsed("oai:x:4", "A.B", "Dataset")));

    auto h = analytics::year_histogram(source_of(records), 1950, 2020);
    CHECK(h.counts == std::map<int, uint64_t>{{2005, 2}});
    CHECK(h.excluded_out_of_range == 1); // 1929 outside the requested range
    CHECK(h.missing_year == 1);

    auto empty = analytics::year_histogram(source_of({}), 1950, 2020);
    CHECK(empty.counts.empty());

    auto degenerate = analytics::year_histogram(source_of(records), 2005, 2005);
    CHECK(degenerate.counts == std::map<int, uint64_t>{{2005, 2}});

    CHECK_THROWS_AS(analytics::year_histogram(source_of(records), 2020, 1950), Error);
}

TEST_CASE("date subtype distribution counts once per kind") {
    std::vector<store::StoredRecord> records;
    int id = 0;
    auto add = [&](const std::vector<std::string>& dates) {
        ParsedRecord p = make_parsed("oai:x:" + std::to_string(id++), "A.B", "Dataset");
        p.date_values = dates;
        p.recompute_presence();
        records.push_back(make_stored(p));
    };
    for (int i = 0; i < 43; ++i)
        add({"Available:2005"});
    for (int i = 0; i < 56; ++i)
        add({"Created:2004"});
    add({"Available:2001", "Available:2002", "Created:2003"}); // counts once per kind

    auto d = analytics::date_subtype_distribution(source_of(records));
    CHECK(d.records_with_events == 100);
    CHECK(d.kinds[DateKind::Available].count == 44);
    CHECK(d.kinds[DateKind::Available].share == doctest::Approx(0.44));
    CHECK(d.kinds[DateKind::Created].count == 57);

    auto none = analytics::date_subtype_distribution(source_of({}));
    CHECK(none.kinds.empty());
}

TEST_CASE("concentration stats find the minimal k") {
    std::map<std::string, uint64_t> counts{{"A", 50}, {"B", 30}, {"C", 10}, {"D", 5}, {"E", 5}};
    auto c = analytics::concentration_stats(counts, 0.8);
    CHECK(c.k_for_threshold == 2);
    CHECK(c.top_share == doctest::Approx(0.8));

    auto single = analytics::concentration_stats({{"only", 7}}, 0.5);
    CHECK(single.k_for_threshold == 1);

    CHECK_THROWS_AS(analytics::concentration_stats({}, 0.5), Error);
    CHECK_THROWS_AS(analytics::concentration_stats(counts, 0.0), Error);
}

TEST_CASE("filters never increase counts") {
    TempDir dir("analytics");
    store::Store st(dir.path());
    std::mt19937_64 rng(31);
    for (int i = 0; i < 150; ++i) {
        ParsedRecord p = random_parsed(rng, "oai:x:" + std::to_string(i));
        st.upsert_record(p, "2016-01-01");
        st.set_canonical(p.oai_identifier, cleaning::canonicalize(p));
    }
    auto all = analytics::completeness_matrix(analytics::source_from(st));
    store::ScanFilter filtered;
    filtered.is_data_record = true;
    auto subset = analytics::completeness_matrix(analytics::source_from(st, filtered));
    CHECK(subset.total_records <= all.total_records);
    for (int i = 0; i < kFieldCount; ++i) {
        auto f = static_cast<FieldName>(i);
        CHECK(subset.fields[f].count_present <= all.fields[f].count_present);
    }
}

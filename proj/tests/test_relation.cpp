#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "mh/cleaning.hpp"
#include "mh/relation.hpp"
#include "support/fixtures.hpp"
#include "support/tempdir.hpp"

using namespace mh;
using namespace mh::test;
using relation::Resolution;
using relation::Scheme;

TEST_CASE("scheme classification") {
    CHECK(relation::classify_scheme("10.15468/dl.qnbifh") == Scheme::doi);
    CHECK(relation::classify_scheme("doi:10.15468/dl.qnbifh") == Scheme::doi);
    CHECK(relation::classify_scheme("arXiv:1234.5678") == Scheme::arxiv);
    CHECK(relation::classify_scheme("1974AJ.....79..819H") == Scheme::bibcode);
    CHECK(relation::classify_scheme("hdl:2027/mdp.39015") == Scheme::handle);
    CHECK(relation::classify_scheme("2027/mdp.39015") == Scheme::handle);
    CHECK(relation::classify_scheme("https://example.org/x") == Scheme::url);
    CHECK(relation::classify_scheme("http://example.org/x") == Scheme::url);
    CHECK(relation::classify_scheme("ISBN 978-3") == Scheme::other);
    // a DOI is a handle with prefix 10., the DOI rule wins
    CHECK(relation::classify_scheme("10.1234/x") == Scheme::doi);
}

TEST_CASE("doi normalization lowercases and strips the prefix") {
    CHECK(relation::normalize_doi("10.7299/X75M655M") == "10.7299/x75m655m");
    CHECK(relation::normalize_doi("doi:10.7299/X75M655M") == "10.7299/x75m655m");
    CHECK(relation::normalize_doi(" DOI:10.1/A ") == "10.1/a");
}

TEST_CASE("edges extract one per relation value") {
    auto rec = make_stored(make_parsed("oai:x:1", "A.B", "Dataset", "", "", "2005",
                                       {"10.15468/dl.qnbifh", "arXiv:1234.5678"}));
    auto edges = relation::extract_relation_edges(rec);
    REQUIRE(edges.size() == 2);
    CHECK(edges[0].scheme == Scheme::doi);
    CHECK(edges[0].target_doi == "10.15468/dl.qnbifh");
    CHECK(edges[0].resolution == Resolution::Unresolved);
    CHECK(edges[1].scheme == Scheme::arxiv);
    CHECK(edges[0].source_oai == "oai:x:1");

    auto none = make_stored(make_parsed("oai:x:2", "A.B"));
    CHECK(relation::extract_relation_edges(none).empty());
}

TEST_CASE("resolution prefers internal over external") {
    TempDir dir("rel");
    store::Store st(dir.path());
    ParsedRecord target = make_parsed("oai:x:target", "A.B", "Dataset");
    target.primary_identifier = "10.5555/TARGET";
    target.recompute_presence();
    st.upsert_record(target, "2016-01-01");
    st.set_canonical("oai:x:target", cleaning::canonicalize(target));

    relation::ExternalIndex index;
    index.insert("10.5555/target"); // also present externally
    index.insert("10.5555/external-only");

    std::vector<relation::RelationEdge> edges;
    for (const char* t : {"10.5555/TARGET", "10.5555/external-only", "10.5555/nowhere"}) {
        relation::RelationEdge e;
        e.source_oai = "oai:x:src";
        e.target_raw = t;
        e.scheme = Scheme::doi;
        e.target_doi = relation::normalize_doi(t);
        edges.push_back(e);
    }
    relation::resolve_edges(edges, relation::DoiLookup::build(st), index);

    CHECK(edges[0].resolution == Resolution::Internal);
    CHECK(edges[0].target_resource_type == ResourceType::Dataset);
    CHECK(edges[1].resolution == Resolution::ExternalMatched);
    CHECK(!edges[1].target_resource_type.has_value());
    CHECK(edges[2].resolution == Resolution::Unresolved);
}

namespace {

// fixture: 100 non-empty records, 23 with one edge each
struct ShareFixture {
    std::vector<store::StoredRecord> records;
    std::vector<relation::RelationEdge> edges;

    ShareFixture() {
        for (int i = 0; i < 100; ++i) {
            std::string id = "oai:x:" + std::to_string(i);
            bool with_edge = i < 23;
            auto rec = make_stored(make_parsed(
                id, "C.C" + std::to_string(i % 10), "Dataset", "", "", "2005",
                with_edge ? std::vector<std::string>{"10.1/t" + std::to_string(i)}
                          : std::vector<std::string>{}));
            auto rec_edges = relation::extract_relation_edges(rec);
            edges.insert(edges.end(), rec_edges.begin(), rec_edges.end());
            records.push_back(std::move(rec));
        }
    }

    relation::RelationStats stats() const {
        return relation::compute_relation_stats(
            [this](const std::function<void(const store::StoredRecord&)>& fn) {
                for (const auto& r : records)
                    fn(r);
            },
            edges);
    }
};

} // namespace

TEST_CASE("share_with_relations over non-empty records") {
    ShareFixture fixture;
    auto stats = fixture.stats();
    CHECK(stats.records_total == 100);
    CHECK(stats.records_with_edges == 23);
    CHECK(stats.share_with_relations == 0.23);
    CHECK(stats.edges_total == 23);
    // conservation
    CHECK(stats.edges_internal + stats.edges_external + stats.edges_unresolved ==
          stats.edges_total);
}

TEST_CASE("per-center coverage: any vs all") {
    // 10 centers; 3 have some records with edges; 1 of those has edges on all
    std::vector<store::StoredRecord> records;
    std::vector<relation::RelationEdge> edges;
    for (int center = 0; center < 10; ++center) {
        for (int i = 0; i < 4; ++i) {
            std::string id = "oai:c" + std::to_string(center) + ":" + std::to_string(i);
            bool with_edge = (center == 0) || (center <= 2 && i == 0);
            auto rec = make_stored(make_parsed(
                id, "C.CENTER" + std::to_string(center), "Dataset", "", "", "2005",
                with_edge ? std::vector<std::string>{"10.1/t" + id} : std::vector<std::string>{}));
            auto rec_edges = relation::extract_relation_edges(rec);
            edges.insert(edges.end(), rec_edges.begin(), rec_edges.end());
            records.push_back(std::move(rec));
        }
    }
    auto stats = relation::compute_relation_stats(
        [&](const std::function<void(const store::StoredRecord&)>& fn) {
            for (const auto& r : records)
                fn(r);
        },
        edges);
    CHECK(stats.centers_total == 10);
    CHECK(stats.centers_with_any == 3);
    CHECK(stats.centers_with_all == 1);
    CHECK(stats.centers_with_all <= stats.centers_with_any);
}

TEST_CASE("container record dominates the histogram") {
    std::vector<store::StoredRecord> records;
    std::vector<relation::RelationEdge> edges;

    std::vector<std::string> container_targets;
    for (int i = 0; i < 5192; ++i)
        container_targets.push_back("10.9/ds" + std::to_string(i));
    auto container =
        make_stored(make_parsed("oai:x:container", "A.B", "Dataset", "", "", "2005",
                                container_targets));
    auto ce = relation::extract_relation_edges(container);
    edges.insert(edges.end(), ce.begin(), ce.end());
    records.push_back(std::move(container));

    std::mt19937_64 rng(5192);
    for (int i = 0; i < 50; ++i) {
        int n = static_cast<int>(rng() % 4); // <= 3 edges each
        std::vector<std::string> targets;
        for (int t = 0; t < n; ++t)
            targets.push_back("10.9/x" + std::to_string(i) + "." + std::to_string(t));
        auto rec = make_stored(
            make_parsed("oai:x:" + std::to_string(i), "A.B", "Dataset", "", "", "2005", targets));
        auto re = relation::extract_relation_edges(rec);
        edges.insert(edges.end(), re.begin(), re.end());
        records.push_back(std::move(rec));
    }

    auto stats = relation::compute_relation_stats(
        [&](const std::function<void(const store::StoredRecord&)>& fn) {
            for (const auto& r : records)
                fn(r);
        },
        edges);

    REQUIRE(!stats.edges_per_record.empty());
    CHECK(stats.edges_per_record.rbegin()->first == 5192);
    CHECK(stats.edges_per_record.rbegin()->second == 1);
    // median bucket stays small: every non-container record has <= 3
    uint64_t small = 0, all = 0;
    for (const auto& [n, c] : stats.edges_per_record) {
        all += c;
        if (n <= 3)
            small += c;
    }
    CHECK(small == all - 1);
}

TEST_CASE("stats are invariant under record order") {
    ShareFixture fixture;
    auto base = fixture.stats();
    std::mt19937_64 rng(1);
    for (int round = 0; round < 3; ++round) {
        std::shuffle(fixture.records.begin(), fixture.records.end(), rng);
        std::shuffle(fixture.edges.begin(), fixture.edges.end(), rng);
        auto again = fixture.stats();
        CHECK(again.share_with_relations == base.share_with_relations);
        CHECK(again.edges_per_record == base.edges_per_record);
        CHECK(again.centers_with_any == base.centers_with_any);
        CHECK(again.centers_with_all == base.centers_with_all);
        CHECK(again.edges_total == base.edges_total);
    }
}

TEST_CASE("empty records stay out of the denominators") {
    std::vector<store::StoredRecord> records;
    ParsedRecord empty;
    empty.oai_identifier = "oai:x:empty";
    empty.data_center_id = "A.B";
    empty.recompute_presence();
    records.push_back(make_stored(empty));
    records.push_back(make_stored(make_parsed("oai:x:full", "A.B", "Dataset", "", "", "2005",
                                              {"10.1/x"})));
    auto edges = relation::extract_relation_edges(records[1]);
    auto stats = relation::compute_relation_stats(
        [&](const std::function<void(const store::StoredRecord&)>& fn) {
            for (const auto& r : records)
                fn(r);
        },
        edges);
    CHECK(stats.records_all == 2);
    CHECK(stats.records_total == 1);
    CHECK(stats.share_with_relations == 1.0);
    CHECK(stats.share_with_relations_all == 0.5);
}

TEST_CASE("edge csv round-trips") {
    auto rec = make_stored(make_parsed("oai:x:1", "A.B", "Dataset", "", "", "2005",
                                       {"10.1/a", "arXiv:1", "junk, with comma"}));
    auto edges = relation::extract_relation_edges(rec);
    edges[0].resolution = Resolution::Internal;
    edges[0].target_resource_type = ResourceType::Dataset;

    std::ostringstream out;
    relation::write_edges_csv(out, edges);
    std::istringstream in(out.str());
    auto back = relation::read_edges_csv(in);
    REQUIRE(back.size() == edges.size());
    for (size_t i = 0; i < edges.size(); ++i) {
        CHECK(back[i].source_oai == edges[i].source_oai);
        CHECK(back[i].target_raw == edges[i].target_raw);
        CHECK(back[i].scheme == edges[i].scheme);
        CHECK(back[i].resolution == edges[i].resolution);
        CHECK(back[i].target_resource_type == edges[i].target_resource_type);
    }
}

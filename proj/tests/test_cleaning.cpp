#include <doctest.h>

#include <random>

#include "mh/cleaning.hpp"
#include "mh/schema_parser.hpp"
#include "support/date_oracle.hpp"
#include "support/fixtures.hpp"

using namespace mh;
using namespace mh::test;
using cleaning::canonicalize;
using cleaning::classify_data_record;
using cleaning::normalize_agent_name;
using cleaning::normalize_dates;
using cleaning::normalize_language;
using cleaning::normalize_resource_type;

TEST_CASE("single well-formed year") {
    auto r = normalize_dates({"2005"});
    CHECK(r.publication_year == 2005);
    CHECK(r.events.empty());
    CHECK(r.flags.empty());
}

TEST_CASE("typed date plus bare year") {
    auto r = normalize_dates({"Available:01/2/2005", "2005"});
    CHECK(r.publication_year == 2005);
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].kind == DateKind::Available);
    CHECK(r.events[0].full_date == CalendarDate{2005, 2, 1}); // day-first
    CHECK(r.events[0].year == 2005);
    CHECK(r.flags.empty());
}

TEST_CASE("year above the window is rejected and flagged") {
    auto r = normalize_dates({"2150"});
    CHECK(!r.publication_year.has_value());
    CHECK(r.flags == FlagSet{QualityFlag::YearOutOfRange});
}

TEST_CASE("historical years are legitimate") {
    auto r = normalize_dates({"1929"});
    CHECK(r.publication_year == 1929);
    CHECK(r.flags.empty());
}

TEST_CASE("multiple distinct years keep the earliest, flagged") {
    auto r = normalize_dates({"2007", "2005"});
    CHECK(r.publication_year == 2005);
    CHECK(r.flags == FlagSet{QualityFlag::MultiplePublicationYears});

    // the same year twice is not ambiguous
    auto dup = normalize_dates({"2005", "2005"});
    CHECK(dup.publication_year == 2005);
    CHECK(dup.flags.empty());
}

TEST_CASE("junk is preserved as a flag, never an abort") {
    auto r = normalize_dates({"n.d.", "circa 1900", "Published:2001", ""});
    CHECK(!r.publication_year.has_value());
    CHECK(r.events.empty());
    CHECK(r.flags == FlagSet{QualityFlag::UnparseableDate});
}

TEST_CASE("typed event with unparseable value keeps the raw text") {
    auto r = normalize_dates({"Available:40/40/2005"});
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].raw == "Available:40/40/2005");
    CHECK(!r.events[0].year.has_value());
    CHECK(!r.events[0].full_date.has_value());
    CHECK(r.flags == FlagSet{QualityFlag::UnparseableDate});
}

TEST_CASE("kind matching is case-insensitive across the nine kinds") {
    auto r = normalize_dates({"accepted:2001", "AVAILABLE:2002", "Copyrighted:2003",
                              "collected:2004", "Created:2005", "issued:2006", "Submitted:2007",
                              "updated:2008", "Valid:2009"});
    REQUIRE(r.events.size() == 9);
    CHECK(r.events[0].kind == DateKind::Accepted);
    CHECK(r.events[8].kind == DateKind::Valid);
    CHECK(!r.publication_year.has_value()); // typed years are not candidates
}

TEST_CASE("iso dates inside typed events parse") {
    auto r = normalize_dates({"Created:2005-02-01"});
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].full_date == CalendarDate{2005, 2, 1});
}

TEST_CASE("date normalizer agrees with the brute-force oracle") {
    std::mt19937_64 rng(1929);
    for (int i = 0; i < 2000; ++i) {
        auto values = random_date_values(rng);
        auto got = normalize_dates(values);
        auto want = oracle_normalize_dates(values);
        CAPTURE(values);
        CHECK(got.publication_year == want.publication_year);
        CHECK(got.events == want.events);
        CHECK(got.flags == want.flags);
    }
}

TEST_CASE("resource type canonicalization on the closed list") {
    auto r = normalize_resource_type(ResourceTypeRaw{"Dataset", std::nullopt});
    CHECK(r.type == ResourceType::Dataset);
    CHECK(!r.subtype.has_value());
    CHECK(r.flags.empty());

    auto text = normalize_resource_type(ResourceTypeRaw{"Text", "Conference Paper"});
    CHECK(text.type == ResourceType::Text);
    CHECK(text.subtype == "conference paper");

    auto other = normalize_resource_type(ResourceTypeRaw{"Other", "Data sheet"});
    CHECK(other.type == ResourceType::Other);
    CHECK(other.subtype == "data sheet");
    CHECK(other.flags == FlagSet{QualityFlag::DatasetLikeOther});
}

TEST_CASE("spelling variants unify") {
    CHECK(normalize_resource_type(ResourceTypeRaw{"Physical Object", std::nullopt}).type ==
          ResourceType::PhysicalObject);
    CHECK(normalize_resource_type(ResourceTypeRaw{"physical-object", std::nullopt}).type ==
          ResourceType::PhysicalObject);
    CHECK(normalize_resource_type(ResourceTypeRaw{"PhysicalObject", std::nullopt}).type ==
          ResourceType::PhysicalObject);
    CHECK(normalize_resource_type(ResourceTypeRaw{"Interactive Resources", std::nullopt}).type ==
          ResourceType::InteractiveResource);
    CHECK(normalize_resource_type(ResourceTypeRaw{"  dataset ", std::nullopt}).type ==
          ResourceType::Dataset);
}

TEST_CASE("unknown general value flags and leaves the type absent") {
    auto r = normalize_resource_type(ResourceTypeRaw{"Nonsense", "whatever"});
    CHECK(!r.type.has_value());
    CHECK(r.flags.count(QualityFlag::UnknownResourceType) == 1);
    CHECK(r.subtype == "whatever"); // raw subtype survives, normalized

    auto absent = normalize_resource_type(std::nullopt);
    CHECK(!absent.type.has_value());
    CHECK(absent.flags.empty());
}

TEST_CASE("data-record predicate follows the type") {
    CHECK(classify_data_record(ResourceType::Dataset) == true);
    CHECK(classify_data_record(ResourceType::Image) == true);
    CHECK(classify_data_record(ResourceType::Other) == true);
    CHECK(classify_data_record(ResourceType::Text) == false);
    CHECK(!classify_data_record(std::nullopt).has_value());
}

TEST_CASE("language tokens map to two-letter codes") {
    CHECK(normalize_language("en").codes == std::vector<std::string>{"en"});
    CHECK(normalize_language("fr-en").codes == std::vector<std::string>{"fr", "en"});
    CHECK(normalize_language("English").codes == std::vector<std::string>{"en"});
    CHECK(normalize_language("eng").codes == std::vector<std::string>{"en"});
    CHECK(normalize_language("ger").codes == std::vector<std::string>{"de"}); // bibliographic form
    CHECK(normalize_language("deu").codes == std::vector<std::string>{"de"});
    CHECK(normalize_language("en,fr;de/it").codes ==
          std::vector<std::string>{"en", "fr", "de", "it"});
    CHECK(normalize_language("en-eng-English").codes == std::vector<std::string>{"en"});
}

TEST_CASE("unmapped language tokens drop with a flag") {
    auto r = normalize_language("xx");
    CHECK(r.codes.empty());
    CHECK(r.flags == FlagSet{QualityFlag::AmbiguousLanguage});

    auto mixed = normalize_language("en-xx");
    CHECK(mixed.codes == std::vector<std::string>{"en"});
    CHECK(mixed.flags == FlagSet{QualityFlag::AmbiguousLanguage});
}

TEST_CASE("language override table extends the mapping") {
    cleaning::Config cfg;
    cfg.language_overrides.emplace_back("gsw", "de");
    CHECK(normalize_language("gsw", cfg).codes == std::vector<std::string>{"de"});
}

TEST_CASE("agent names split on the comma form") {
    auto n = normalize_agent_name("Sheldon, H. H.");
    CHECK(n.family == "Sheldon");
    CHECK(n.given_or_initials == "H. H.");
}

TEST_CASE("single token stays unsplit") {
    auto n = normalize_agent_name("Sheldon");
    CHECK(n.family == "Sheldon");
    CHECK(!n.given_or_initials.has_value());
}

TEST_CASE("first-last form takes the last token as family") {
    auto n = normalize_agent_name("H. H. Sheldon");
    CHECK(n.family == "Sheldon");
    CHECK(n.given_or_initials == "H. H.");
}

TEST_CASE("organizations stay whole") {
    auto n = normalize_agent_name("Imperial College London");
    CHECK(n.family == "Imperial College London");
    CHECK(!n.given_or_initials.has_value());

    auto digits = normalize_agent_name("Group 42 Research");
    CHECK(digits.family == "Group 42 Research");

    cleaning::Config cfg;
    cfg.extra_org_tokens.push_back("observatorium");
    auto extra = normalize_agent_name("Alpine Observatorium", cfg);
    CHECK(extra.family == "Alpine Observatorium");
}

TEST_CASE("canonicalize flags the Fig-2 style empty record") {
    ParsedRecord p;
    p.oai_identifier = "oai:x:empty";
    p.data_center_id = "ETHZ.DA-RD";
    p.recompute_presence();
    CanonicalRecord c = canonicalize(p);
    CHECK(c.flags == FlagSet{QualityFlag::EmptyRecord});
    CHECK(!c.doi.has_value());
    CHECK(!c.publication_year.has_value());
    CHECK(!c.resource_type.has_value());
    CHECK(!c.is_data_record.has_value());
    CHECK(c.date_events.empty());
    CHECK(c.language_codes.empty());
    CHECK(c.creators_normalized.empty());
}

TEST_CASE("canonicalize handles the 1929 photograph record") {
    ParsedRecord p;
    p.oai_identifier = "oai:x:photo";
    p.data_center_id = "CDL.MVZ";
    p.primary_identifier = "10.7299/X75M655M";
    p.creators = {"H. H. Sheldon"};
    p.titles = {"A. E. Borell with wildcat"};
    p.publisher_raw = "Museum of Vertebrate Zoology";
    p.date_values = {"1929"};
    p.resource_type_raw = ResourceTypeRaw{"Image", "Photograph"};
    p.recompute_presence();

    CanonicalRecord c = canonicalize(p);
    CHECK(c.publication_year == 1929);
    REQUIRE(c.creators_normalized.size() == 1);
    CHECK(c.creators_normalized[0].family == "Sheldon");
    CHECK(c.doi == "10.7299/x75m655m");
    CHECK(c.resource_type == ResourceType::Image);
    CHECK(c.is_data_record == true);
    CHECK(c.flags.empty());
}

TEST_CASE("fully populated record cleans without flags") {
    auto records = parser::parse_page(list_records_page({full_record("oai:x:full")}, std::nullopt));
    ParsedRecord p = parser::parse_record_metadata(records[0]);
    CanonicalRecord c = canonicalize(p);
    CHECK(c.flags.empty());
    CHECK(c.publication_year == 1929);
    CHECK(c.resource_type == ResourceType::Image);
    CHECK(c.resource_subtype == "photograph");
    CHECK(c.is_data_record == true);
    CHECK(c.language_codes == std::vector<std::string>{"en"});
    REQUIRE(c.date_events.size() == 1);
    CHECK(c.date_events[0].kind == DateKind::Available);
}

TEST_CASE("canonicalize is deterministic and stable") {
    std::mt19937_64 rng(777);
    for (int i = 0; i < 300; ++i) {
        ParsedRecord p = random_parsed(rng, "oai:x:" + std::to_string(i));
        CanonicalRecord once = canonicalize(p);
        CanonicalRecord twice = canonicalize(p);
        CHECK(once == twice);
        // window invariant
        if (once.publication_year) {
            CHECK(*once.publication_year >= 1000);
            CHECK(*once.publication_year <= 2099);
        }
        // predicate totality
        CHECK(once.is_data_record.has_value() == once.resource_type.has_value());
    }
}

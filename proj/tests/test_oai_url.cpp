#include <doctest.h>

#include "mh/oai.hpp"

using namespace mh;
using oai::HarvestRequest;
using oai::Verb;

namespace {
const std::string kBase = "https://oai.example.org/oai";
}

TEST_CASE("fresh list request carries verb and prefix") {
    auto req = HarvestRequest::list_records(kBase);
    CHECK(oai::build_request_url(req) == kBase + "?verb=ListRecords&metadataPrefix=oai_datacite");
}

TEST_CASE("token request carries the token and nothing else") {
    auto req = HarvestRequest::list_records(kBase).with_token("T");
    CHECK(oai::build_request_url(req) == kBase + "?verb=ListRecords&resumptionToken=T");
}

TEST_CASE("token and prefix together violate the exclusivity rule") {
    auto req = HarvestRequest::list_records(kBase);
    req.resumption_token = "T";
    try {
        oai::build_request_url(req);
        FAIL("expected invalid_request");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_request);
    }
}

TEST_CASE("parameters appear alphabetically after the verb") {
    auto req = HarvestRequest::list_records(kBase);
    req.set_spec = "BL.IMPERIAL";
    req.from = "2016-01-01";
    req.until = "2016-02-01";
    CHECK(oai::build_request_url(req) ==
          kBase +
              "?verb=ListRecords&from=2016-01-01&metadataPrefix=oai_datacite"
              "&set=BL.IMPERIAL&until=2016-02-01");
}

TEST_CASE("from after until is rejected") {
    auto req = HarvestRequest::list_records(kBase);
    req.from = "2016-02-01";
    req.until = "2016-01-01";
    CHECK_THROWS_AS(oai::build_request_url(req), Error);
}

TEST_CASE("token values are percent-encoded") {
    auto req = HarvestRequest::list_records(kBase).with_token("a/b&c=d");
    CHECK(oai::build_request_url(req) == kBase + "?verb=ListRecords&resumptionToken=a%2Fb%26c%3Dd");
}

TEST_CASE("get record request") {
    oai::HarvestRequest req;
    req.base_url = kBase;
    req.verb = Verb::GetRecord;
    req.identifier = "oai:x:1";
    req.metadata_prefix = "oai_datacite";
    CHECK(oai::build_request_url(req) ==
          kBase + "?verb=GetRecord&identifier=oai%3Ax%3A1&metadataPrefix=oai_datacite");
}

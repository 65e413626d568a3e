#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mh/error.hpp"
#include "mh/record.hpp"

namespace mh::oai {

enum class Verb {
    Identify,
    ListRecords,
    ListIdentifiers,
    GetRecord,
    ListMetadataFormats,
    ListSets,
};

const char* verb_name(Verb v);

struct HarvestRequest {
    std::string base_url;
    Verb verb = Verb::ListRecords;
    std::optional<std::string> metadata_prefix; // "oai_datacite" for fresh list requests
    std::optional<std::string> set_spec;
    std::optional<std::string> from;  // UTC datestamp, day granularity
    std::optional<std::string> until; // UTC datestamp, day granularity
    std::optional<std::string> resumption_token;
    std::optional<std::string> identifier; // GetRecord only

    static HarvestRequest list_records(std::string base_url,
                                       std::string metadata_prefix = "oai_datacite");
    // Continuation request: carries the token and nothing else (protocol rule).
    HarvestRequest with_token(std::string token) const;
};

// Query string with the verb first, remaining parameters alphabetical.
// Throws Error(invalid_request) when the token exclusivity rule or the
// from<=until ordering is violated.
std::string build_request_url(const HarvestRequest& req);

enum class OaiErrorCode {
    badArgument,
    badResumptionToken,
    badVerb,
    cannotDisseminateFormat,
    idDoesNotExist,
    noMetadataFormats,
    noRecordsMatch,
    noSetHierarchy,
};

const char* oai_error_code_name(OaiErrorCode c);
std::optional<OaiErrorCode> oai_error_code_from(std::string_view name);

struct OaiError {
    OaiErrorCode code;
    std::string message;
};

// Returns the typed error when the response carries an <error> element.
// Throws Error(malformed_response) when the envelope cannot be parsed.
std::optional<OaiError> parse_oai_error(std::string_view response_body);

struct RetryPolicy {
    int max_attempts = 4;
    std::chrono::milliseconds base_backoff{1000};
    bool honor_retry_after = true;
};

struct HttpResponse {
    int status = 0;
    std::string body;
    std::map<std::string, std::string> headers; // lowercased names

    std::optional<std::string> header(std::string_view name) const;
};

// Transport failures (connection refused, timeouts) are reported by throwing
// Error(transport); HTTP-level failures come back as status codes.
class Transport {
public:
    virtual ~Transport() = default;
    virtual HttpResponse get(const std::string& url) = 0;
};

class Clock {
public:
    virtual ~Clock() = default;
    virtual void sleep_for(std::chrono::milliseconds d) = 0;
};

class SystemClock : public Clock {
public:
    void sleep_for(std::chrono::milliseconds d) override;
};

// HTTP GET over cpp-httplib. Base URLs are of the form http(s)://host[:port]/path.
class HttpTransport : public Transport {
public:
    explicit HttpTransport(std::chrono::seconds connect_timeout = std::chrono::seconds(30),
                           std::chrono::seconds read_timeout = std::chrono::seconds(300));
    HttpResponse get(const std::string& url) override;

private:
    std::chrono::seconds connect_timeout_;
    std::chrono::seconds read_timeout_;
};

struct OaiPage {
    std::string response_date;
    HarvestRequest request_echo;
    std::vector<RawRecord> records;
    std::optional<std::string> resumption_token;
    std::optional<uint64_t> complete_list_size;
    std::optional<uint64_t> cursor;
    std::string raw_xml; // verbatim response body
};

struct HarvestSummary {
    uint64_t pages = 0;
    uint64_t records = 0;
    enum class Termination { end_of_list, error, cancelled } terminated_by = Termination::end_of_list;
};

class ProtocolError : public Error {
public:
    ProtocolError(OaiError err, HarvestSummary partial)
        : Error(Errc::protocol, std::string("OAI-PMH error ") + oai_error_code_name(err.code) +
                                    (err.message.empty() ? "" : ": " + err.message)),
          oai_(std::move(err)), partial_(partial) {}

    const OaiError& oai() const { return oai_; }
    const HarvestSummary& partial_summary() const { return partial_; }

private:
    OaiError oai_;
    HarvestSummary partial_;
};

// Called once per page, in chain order. Return false to cancel the harvest.
using PageSink = std::function<bool(const OaiPage&)>;

class Client {
public:
    Client(Transport& transport, Clock& clock, RetryPolicy policy = {});

    // Follows the resumption-token chain until absent. The sink runs before
    // the next fetch. Throws ProtocolError / Error(transport).
    HarvestSummary iterate_list_records(const HarvestRequest& req, const PageSink& sink);

    RawRecord fetch_record(const std::string& base_url, const std::string& oai_identifier,
                           const std::string& metadata_prefix);

private:
    HttpResponse fetch_with_retries(const std::string& url);

    Transport& transport_;
    Clock& clock_;
    RetryPolicy policy_;
};

// Persists raw pages under <raw_dir>/<harvest_id>/page-<seq>.xml plus a
// manifest.json recording the token chain; this is what makes an interrupted
// harvest resumable.
class PagePersister {
public:
    PagePersister(std::filesystem::path raw_dir, std::string harvest_id);

    // Directory name derived from set/from/until so a resume finds the chain.
    static std::string harvest_id_for(const HarvestRequest& req);

    bool page_exists(uint64_t seq) const;
    void persist(uint64_t seq, const OaiPage& page, const HarvestRequest& original);
    void mark_completed();

    // Token to resume from, when an incomplete manifest exists.
    std::optional<std::string> resume_token() const;
    uint64_t pages_persisted() const;
    bool completed() const;

    const std::filesystem::path& dir() const { return dir_; }

private:
    void load_manifest();
    void write_manifest() const;

    std::filesystem::path dir_;
    std::string harvest_id_;
    struct PageEntry {
        uint64_t seq = 0;
        std::string file;
        std::optional<std::string> token_used;
        std::optional<std::string> next_token;
        std::string response_date;
        uint64_t records = 0;
    };
    std::vector<PageEntry> pages_;
    bool completed_ = false;
    std::optional<std::string> base_url_, metadata_prefix_, set_spec_, from_, until_;
};

// Runs (or resumes) one ListRecords chain: every page is persisted before the
// next fetch, then handed to the sink.
HarvestSummary run_harvest(Client& client, PagePersister& persister, const HarvestRequest& req,
                           const PageSink& sink = nullptr);

} // namespace mh::oai

#include "mh/oai.hpp"

#include <algorithm>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "mh/schema_parser.hpp"
#include "mh/text.hpp"

namespace mh::oai {

const char* verb_name(Verb v) {
    switch (v) {
    case Verb::Identify: return "Identify";
    case Verb::ListRecords: return "ListRecords";
    case Verb::ListIdentifiers: return "ListIdentifiers";
    case Verb::GetRecord: return "GetRecord";
    case Verb::ListMetadataFormats: return "ListMetadataFormats";
    case Verb::ListSets: return "ListSets";
    }
    return "?";
}

HarvestRequest HarvestRequest::list_records(std::string base_url, std::string metadata_prefix) {
    HarvestRequest req;
    req.base_url = std::move(base_url);
    req.verb = Verb::ListRecords;
    req.metadata_prefix = std::move(metadata_prefix);
    return req;
}

HarvestRequest HarvestRequest::with_token(std::string token) const {
    HarvestRequest req;
    req.base_url = base_url;
    req.verb = verb;
    req.resumption_token = std::move(token);
    return req;
}

std::string build_request_url(const HarvestRequest& req) {
    if (req.resumption_token &&
        (req.metadata_prefix || req.set_spec || req.from || req.until)) {
        throw Error(Errc::invalid_request,
                    "resumptionToken is exclusive with metadataPrefix/set/from/until");
    }
    if (req.from && req.until && *req.from > *req.until)
        throw Error(Errc::invalid_request, "from datestamp is after until");

    // verb first, remaining parameters alphabetical
    std::vector<std::pair<std::string, std::string>> params;
    if (req.from)
        params.emplace_back("from", *req.from);
    if (req.identifier)
        params.emplace_back("identifier", *req.identifier);
    if (req.metadata_prefix)
        params.emplace_back("metadataPrefix", *req.metadata_prefix);
    if (req.resumption_token)
        params.emplace_back("resumptionToken", *req.resumption_token);
    if (req.set_spec)
        params.emplace_back("set", *req.set_spec);
    if (req.until)
        params.emplace_back("until", *req.until);
    std::sort(params.begin(), params.end());

    std::string url = req.base_url;
    url += (url.find('?') == std::string::npos) ? '?' : '&';
    url += "verb=";
    url += verb_name(req.verb);
    for (const auto& [k, v] : params) {
        url += '&';
        url += k;
        url += '=';
        url += text::url_encode(v);
    }
    return url;
}

const char* oai_error_code_name(OaiErrorCode c) {
    switch (c) {
    case OaiErrorCode::badArgument: return "badArgument";
    case OaiErrorCode::badResumptionToken: return "badResumptionToken";
    case OaiErrorCode::badVerb: return "badVerb";
    case OaiErrorCode::cannotDisseminateFormat: return "cannotDisseminateFormat";
    case OaiErrorCode::idDoesNotExist: return "idDoesNotExist";
    case OaiErrorCode::noMetadataFormats: return "noMetadataFormats";
    case OaiErrorCode::noRecordsMatch: return "noRecordsMatch";
    case OaiErrorCode::noSetHierarchy: return "noSetHierarchy";
    }
    return "?";
}

std::optional<OaiErrorCode> oai_error_code_from(std::string_view name) {
    for (int i = 0; i <= static_cast<int>(OaiErrorCode::noSetHierarchy); ++i) {
        auto c = static_cast<OaiErrorCode>(i);
        if (name == oai_error_code_name(c))
            return c;
    }
    return std::nullopt;
}

std::optional<OaiError> parse_oai_error(std::string_view response_body) {
    parser::PageContents page = parser::parse_page_contents(response_body);
    if (!page.error_code)
        return std::nullopt;
    auto code = oai_error_code_from(*page.error_code);
    if (!code)
        throw Error(Errc::malformed_response, "unknown protocol error code: " + *page.error_code);
    return OaiError{*code, page.error_message};
}

std::optional<std::string> HttpResponse::header(std::string_view name) const {
    auto it = headers.find(text::to_lower(name));
    if (it == headers.end())
        return std::nullopt;
    return it->second;
}

void SystemClock::sleep_for(std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
}

Client::Client(Transport& transport, Clock& clock, RetryPolicy policy)
    : transport_(transport), clock_(clock), policy_(policy) {
    if (policy_.max_attempts < 1)
        throw Error(Errc::invalid_argument, "max_attempts must be >= 1");
    if (policy_.base_backoff <= std::chrono::milliseconds::zero())
        throw Error(Errc::invalid_argument, "base_backoff must be positive");
}

HttpResponse Client::fetch_with_retries(const std::string& url) {
    std::string last_failure;
    for (int attempt = 1; attempt <= policy_.max_attempts; ++attempt) {
        std::chrono::milliseconds delay = policy_.base_backoff * (1 << (attempt - 1));
        try {
            HttpResponse resp = transport_.get(url);
            if (resp.status == 200)
                return resp;
            last_failure = "HTTP " + std::to_string(resp.status);
            // a 503 Retry-After wait replaces the computed backoff
            if (resp.status == 503 && policy_.honor_retry_after) {
                if (auto ra = resp.header("retry-after"))
                    if (auto secs = text::parse_int(text::trim(*ra)); secs && *secs >= 0)
                        delay = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::seconds(*secs));
            }
        } catch (const Error& e) {
            if (e.code() != Errc::transport)
                throw;
            last_failure = e.what();
        }
        if (attempt < policy_.max_attempts)
            clock_.sleep_for(delay);
    }
    throw Error(Errc::transport, "request failed after " + std::to_string(policy_.max_attempts) +
                                     " attempts: " + last_failure + " (" + url + ")");
}

HarvestSummary Client::iterate_list_records(const HarvestRequest& req, const PageSink& sink) {
    if (req.verb != Verb::ListRecords && req.verb != Verb::ListIdentifiers)
        throw Error(Errc::invalid_request, "iterate_list_records requires a list verb");

    HarvestSummary summary;
    HarvestRequest current = req;
    for (;;) {
        std::string url = build_request_url(current);
        HttpResponse resp = fetch_with_retries(url);

        parser::PageContents contents = parser::parse_page_contents(resp.body);
        if (contents.error_code) {
            auto code = oai_error_code_from(*contents.error_code);
            if (!code)
                throw Error(Errc::malformed_response,
                            "unknown protocol error code: " + *contents.error_code);
            if (*code == OaiErrorCode::noRecordsMatch) {
                summary.terminated_by = HarvestSummary::Termination::end_of_list;
                return summary; // an empty selection, not a failure
            }
            summary.terminated_by = HarvestSummary::Termination::error;
            throw ProtocolError({*code, contents.error_message}, summary);
        }

        OaiPage page;
        page.response_date = contents.response_date;
        page.request_echo = current;
        page.records = std::move(contents.records);
        page.resumption_token = contents.resumption_token;
        page.complete_list_size = contents.complete_list_size;
        page.cursor = contents.cursor;
        page.raw_xml = std::move(resp.body);

        ++summary.pages;
        summary.records += page.records.size();

        if (sink && !sink(page)) {
            summary.terminated_by = HarvestSummary::Termination::cancelled;
            return summary;
        }
        if (!page.resumption_token) {
            summary.terminated_by = HarvestSummary::Termination::end_of_list;
            return summary;
        }
        current = req.with_token(*page.resumption_token);
    }
}

RawRecord Client::fetch_record(const std::string& base_url, const std::string& oai_identifier,
                               const std::string& metadata_prefix) {
    if (oai_identifier.empty())
        throw Error(Errc::invalid_request, "oai identifier must be non-empty");
    HarvestRequest req;
    req.base_url = base_url;
    req.verb = Verb::GetRecord;
    req.identifier = oai_identifier;
    req.metadata_prefix = metadata_prefix;

    HttpResponse resp = fetch_with_retries(build_request_url(req));
    parser::PageContents contents = parser::parse_page_contents(resp.body);
    if (contents.error_code) {
        auto code = oai_error_code_from(*contents.error_code);
        if (!code)
            throw Error(Errc::malformed_response,
                        "unknown protocol error code: " + *contents.error_code);
        throw ProtocolError({*code, contents.error_message}, {});
    }
    if (contents.records.empty())
        throw Error(Errc::malformed_response, "GetRecord response carries no record");
    return std::move(contents.records.front());
}

} // namespace mh::oai

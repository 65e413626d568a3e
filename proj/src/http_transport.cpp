#include <httplib.h>

#include "mh/oai.hpp"
#include "mh/text.hpp"

namespace mh::oai {

HttpTransport::HttpTransport(std::chrono::seconds connect_timeout,
                             std::chrono::seconds read_timeout)
    : connect_timeout_(connect_timeout), read_timeout_(read_timeout) {}

HttpResponse HttpTransport::get(const std::string& url) {
    // split scheme://host[:port] from path?query
    size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw Error(Errc::invalid_request, "URL without scheme: " + url);
    size_t path_begin = url.find('/', scheme_end + 3);
    std::string origin = (path_begin == std::string::npos) ? url : url.substr(0, path_begin);
    std::string path = (path_begin == std::string::npos) ? "/" : url.substr(path_begin);

    httplib::Client cli(origin);
    cli.set_connection_timeout(connect_timeout_);
    cli.set_read_timeout(read_timeout_);
    cli.set_follow_location(true);

    auto res = cli.Get(path);
    if (!res)
        throw Error(Errc::transport,
                    "GET " + url + " failed: " + httplib::to_string(res.error()));

    HttpResponse out;
    out.status = res->status;
    out.body = res->body;
    for (const auto& [k, v] : res->headers)
        out.headers[text::to_lower(k)] = v;
    return out;
}

} // namespace mh::oai

#include "mh/jsonlog.hpp"

#include <chrono>

#include "mh/error.hpp"

namespace mh::log {

using nlohmann::json;

JsonLogger::JsonLogger(const std::string& path) : out_(&std::cerr) {
    if (!path.empty()) {
        file_.open(path, std::ios::app);
        if (!file_)
            throw Error(Errc::io, "cannot open log file " + path);
        out_ = &file_;
    }
}

namespace {
std::string now_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}
} // namespace

void JsonLogger::event(const std::string& stage, const std::string& event, json fields) {
    json j;
    j["ts"] = now_iso8601();
    j["stage"] = stage;
    j["event"] = event;
    for (auto& [k, v] : fields.items())
        j[k] = v;
    std::lock_guard<std::mutex> lock(mutex_);
    (*out_) << j.dump() << '\n';
    out_->flush();
}

void JsonLogger::record_skipped(const std::string& stage, const std::string& oai_identifier,
                                const std::string& reason) {
    event(stage, "record_skipped", {{"oai", oai_identifier}, {"reason", reason}});
}

} // namespace mh::log

#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <string>

#include <json.hpp>

namespace mh::log {

// Newline-delimited JSON event log.
class JsonLogger {
public:
    JsonLogger() : out_(&std::cerr) {}
    explicit JsonLogger(const std::string& path);

    void event(const std::string& stage, const std::string& event, nlohmann::json fields = {});

    void record_skipped(const std::string& stage, const std::string& oai_identifier,
                        const std::string& reason);

private:
    std::ostream* out_;
    std::ofstream file_;
    std::mutex mutex_;
};

} // namespace mh::log

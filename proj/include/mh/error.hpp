#pragma once

#include <stdexcept>
#include <string>

namespace mh {

enum class Errc {
    invalid_request,
    malformed_response,
    malformed_metadata,
    malformed_symbol,
    protocol,
    transport,
    storage,
    missing_registry,
    empty_input,
    invalid_range,
    config,
    stage_dependency,
    invalid_argument,
    io,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

} // namespace mh

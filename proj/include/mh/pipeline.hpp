#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "mh/config.hpp"
#include "mh/jsonlog.hpp"
#include "mh/oai.hpp"
#include "mh/store.hpp"

namespace mh::pipeline {

struct StageResult {
    uint64_t input = 0;
    uint64_t processed = 0;
    uint64_t skipped = 0;
    std::map<std::string, uint64_t> details;

    // 0 success, 1 partial (records skipped and logged)
    int exit_code() const { return skipped > 0 ? 1 : 0; }
};

// One pipeline over one store directory. Stages are idempotent: rerunning a
// stage over unchanged inputs changes nothing.
class Pipeline {
public:
    Pipeline(cfg::PipelineConfig config, log::JsonLogger& logger);
    ~Pipeline();

    // Fetches pages with the given transport/clock (tests inject scripted
    // ones); pages persist under raw_dir before the next fetch, so a killed
    // harvest resumes from the manifest token.
    StageResult harvest(oai::Transport& transport, oai::Clock& clock,
                        std::optional<std::string> set_spec = std::nullopt,
                        std::optional<std::string> from = std::nullopt,
                        std::optional<std::string> until = std::nullopt);
    StageResult harvest(std::optional<std::string> set_spec = std::nullopt,
                        std::optional<std::string> from = std::nullopt,
                        std::optional<std::string> until = std::nullopt);

    StageResult parse();
    StageResult clean();
    StageResult resolve();
    StageResult link();
    StageResult report();
    StageResult export_unresolved(const std::filesystem::path& out_path, size_t top_n);

    store::Store& store();
    const cfg::PipelineConfig& config() const { return config_; }

private:
    void require(bool condition, const std::string& what);
    std::filesystem::path edges_path() const;
    std::string data_datestamp(); // max datestamp in the store; report timestamps

    cfg::PipelineConfig config_;
    log::JsonLogger& logger_;
    std::unique_ptr<store::Store> store_;
};

} // namespace mh::pipeline

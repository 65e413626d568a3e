#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "mh/cleaning.hpp"
#include "mh/error.hpp"

namespace mh::cfg {

// Flat key=value file; '#' starts a comment. Later keys win.
std::map<std::string, std::string> parse_file(const std::filesystem::path& path);
std::map<std::string, std::string> parse_string(std::string_view content);

struct PipelineConfig {
    std::string base_url;
    std::string metadata_prefix = "oai_datacite";
    std::filesystem::path store_path;
    std::filesystem::path raw_dir;    // defaults to <store_path>/raw
    std::filesystem::path report_dir; // defaults to <store_path>/reports
    std::filesystem::path publisher_registry;
    std::filesystem::path datacenter_registry;
    std::filesystem::path external_index;
    int year_range_lo = 1850;
    int year_range_hi = 2031;
    double concentration_threshold = 0.8;
    int subtype_top_k = 3;
    std::string log_path; // empty -> stderr
    int http_connect_timeout_s = 30;
    int http_read_timeout_s = 300;
    int retry_max_attempts = 4;
    int retry_base_backoff_ms = 1000;
    cleaning::Config clean;

    // Applies one key; unknown keys are rejected so typos surface early.
    void set(const std::string& key, const std::string& value);
    void apply(const std::map<std::string, std::string>& kv);
    void validate_for_stage(const std::string& stage) const; // throws Error(config)

    static PipelineConfig from_file(const std::filesystem::path& path);
};

} // namespace mh::cfg

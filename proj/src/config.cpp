#include "mh/config.hpp"

#include <fstream>
#include <sstream>

#include "mh/text.hpp"

namespace mh::cfg {

std::map<std::string, std::string> parse_string(std::string_view content) {
    std::map<std::string, std::string> kv;
    size_t line_no = 0;
    for (const std::string& raw_line : text::split(content, '\n')) {
        ++line_no;
        std::string_view line = text::trim(raw_line);
        if (line.empty() || line.front() == '#')
            continue;
        size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(Errc::config,
                        "config line " + std::to_string(line_no) + ": expected key=value");
        std::string key(text::trim(line.substr(0, eq)));
        std::string value(text::trim(line.substr(eq + 1)));
        if (key.empty())
            throw Error(Errc::config, "config line " + std::to_string(line_no) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

std::map<std::string, std::string> parse_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::config, "cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

namespace {

int to_int(const std::string& key, const std::string& value) {
    auto v = text::parse_int(value);
    if (!v)
        throw Error(Errc::config, "config key " + key + ": expected integer, got \"" + value + "\"");
    return *v;
}

double to_fraction(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw Error(Errc::config, "config key " + key + ": expected number, got \"" + value + "\"");
    }
}

} // namespace

void PipelineConfig::set(const std::string& key, const std::string& value) {
    if (key == "base_url") base_url = value;
    else if (key == "metadata_prefix") metadata_prefix = value;
    else if (key == "store_path") store_path = value;
    else if (key == "raw_dir") raw_dir = value;
    else if (key == "report_dir") report_dir = value;
    else if (key == "publisher_registry") publisher_registry = value;
    else if (key == "datacenter_registry") datacenter_registry = value;
    else if (key == "external_index") external_index = value;
    else if (key == "year_range_lo") year_range_lo = to_int(key, value);
    else if (key == "year_range_hi") year_range_hi = to_int(key, value);
    else if (key == "concentration_threshold") concentration_threshold = to_fraction(key, value);
    else if (key == "subtype_top_k") subtype_top_k = to_int(key, value);
    else if (key == "log_path") log_path = value;
    else if (key == "http_connect_timeout_s") http_connect_timeout_s = to_int(key, value);
    else if (key == "http_read_timeout_s") http_read_timeout_s = to_int(key, value);
    else if (key == "retry_max_attempts") retry_max_attempts = to_int(key, value);
    else if (key == "retry_base_backoff_ms") retry_base_backoff_ms = to_int(key, value);
    else if (key == "clean_year_min") clean.year_min = to_int(key, value);
    else if (key == "clean_year_max") clean.year_max = to_int(key, value);
    else if (key == "clean_plausible_year_min") clean.plausible_year_min = to_int(key, value);
    else if (key == "clean_plausible_year_max") clean.plausible_year_max = to_int(key, value);
    else if (key == "clean_org_tokens") {
        clean.extra_org_tokens.clear();
        for (const auto& t : text::split_any(value, ","))
            clean.extra_org_tokens.push_back(std::string(text::trim(t)));
    } else if (key == "clean_language_overrides") {
        // "token:code" pairs, comma-separated
        clean.language_overrides.clear();
        for (const auto& pair : text::split_any(value, ",")) {
            auto parts = text::split(pair, ':');
            if (parts.size() != 2)
                throw Error(Errc::config, "clean_language_overrides: expected token:code pairs");
            clean.language_overrides.emplace_back(std::string(text::trim(parts[0])),
                                                  std::string(text::trim(parts[1])));
        }
    } else {
        throw Error(Errc::config, "unknown config key: " + key);
    }
}

void PipelineConfig::apply(const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv)
        set(k, v);
    if (raw_dir.empty() && !store_path.empty())
        raw_dir = store_path / "raw";
    if (report_dir.empty() && !store_path.empty())
        report_dir = store_path / "reports";
}

void PipelineConfig::validate_for_stage(const std::string& stage) const {
    if (store_path.empty())
        throw Error(Errc::config, "store_path is required");
    if (year_range_lo > year_range_hi)
        throw Error(Errc::config, "year_range_lo exceeds year_range_hi");
    if (stage == "harvest" && base_url.empty())
        throw Error(Errc::config, "base_url is required for harvest");
    if (stage == "resolve" || stage == "report" || stage == "export-unresolved") {
        if (publisher_registry.empty())
            throw Error(Errc::config, "publisher_registry is required for " + stage);
        if (datacenter_registry.empty())
            throw Error(Errc::config, "datacenter_registry is required for " + stage);
    }
}

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
    PipelineConfig cfg;
    cfg.apply(parse_file(path));
    return cfg;
}

} // namespace mh::cfg

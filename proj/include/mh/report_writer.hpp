#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace mh::report {

// One machine-readable report: a CSV table, a JSON envelope and a plot-data
// file (x,y columns) side by side under the report directory.
struct Report {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    nlohmann::json denominators = nlohmann::json::object();
    nlohmann::json filters = nlohmann::json::object();
    nlohmann::json payload = nlohmann::json::object(); // raw fractions and counts
    std::vector<std::pair<std::string, std::string>> plot; // (x, y) pairs
    std::string plot_x = "x";
    std::string plot_y = "y";
};

// generated_at must be derived from the data (not wall clock) so identical
// store state yields byte-identical files.
void write_report(const std::filesystem::path& dir, const Report& report,
                  const std::string& generated_at);

std::string report_csv(const Report& report);
nlohmann::json report_json(const Report& report, const std::string& generated_at);

} // namespace mh::report

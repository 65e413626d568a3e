#include "mh/report_writer.hpp"

#include <fstream>

#include "mh/csv.hpp"
#include "mh/error.hpp"

namespace mh::report {

namespace fs = std::filesystem;
using nlohmann::json;

std::string report_csv(const Report& report) {
    std::string out = csv::encode_row(report.columns) + "\n";
    for (const auto& row : report.rows)
        out += csv::encode_row(row) + "\n";
    return out;
}

json report_json(const Report& report, const std::string& generated_at) {
    json j;
    j["report"] = report.name;
    j["generated_at"] = generated_at;
    j["denominators"] = report.denominators;
    j["filters"] = report.filters;
    j["columns"] = report.columns;
    j["rows"] = json::array();
    for (const auto& row : report.rows)
        j["rows"].push_back(row);
    for (auto& [k, v] : report.payload.items())
        j[k] = v;
    return j;
}

namespace {
void write_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(Errc::io, "cannot write report file " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw Error(Errc::io, "short write to " + path.string());
}
} // namespace

void write_report(const fs::path& dir, const Report& report, const std::string& generated_at) {
    fs::create_directories(dir);
    write_file(dir / (report.name + ".csv"), report_csv(report));
    write_file(dir / (report.name + ".json"),
               report_json(report, generated_at).dump(2) + "\n");

    std::string plot = csv::encode_row({report.plot_x, report.plot_y}) + "\n";
    for (const auto& [x, y] : report.plot)
        plot += csv::encode_row({x, y}) + "\n";
    write_file(dir / (report.name + ".plot.csv"), plot);
}

} // namespace mh::report

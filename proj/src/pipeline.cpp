#include "mh/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "mh/analytics.hpp"
#include "mh/cleaning.hpp"
#include "mh/csv.hpp"
#include "mh/relation.hpp"
#include "mh/report_writer.hpp"
#include "mh/schema_parser.hpp"
#include "mh/text.hpp"

namespace mh::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

Pipeline::Pipeline(cfg::PipelineConfig config, log::JsonLogger& logger)
    : config_(std::move(config)), logger_(logger) {
    if (config_.raw_dir.empty() && !config_.store_path.empty())
        config_.raw_dir = config_.store_path / "raw";
    if (config_.report_dir.empty() && !config_.store_path.empty())
        config_.report_dir = config_.store_path / "reports";
}

Pipeline::~Pipeline() = default;

store::Store& Pipeline::store() {
    if (!store_) {
        if (config_.store_path.empty())
            throw Error(Errc::config, "store_path is required");
        store_ = std::make_unique<store::Store>(config_.store_path);
    }
    return *store_;
}

void Pipeline::require(bool condition, const std::string& what) {
    if (!condition)
        throw Error(Errc::stage_dependency, what);
}

fs::path Pipeline::edges_path() const {
    return config_.store_path / "edges.csv";
}

std::string Pipeline::data_datestamp() {
    std::string latest;
    store().for_each({}, [&](const store::StoredRecord& r) {
        if (r.latest_datestamp > latest)
            latest = r.latest_datestamp;
    });
    return latest;
}

StageResult Pipeline::harvest(oai::Transport& transport, oai::Clock& clock,
                              std::optional<std::string> set_spec, std::optional<std::string> from,
                              std::optional<std::string> until) {
    config_.validate_for_stage("harvest");
    logger_.event("harvest", "stage_start", {{"base_url", config_.base_url}});

    oai::HarvestRequest req = oai::HarvestRequest::list_records(config_.base_url,
                                                                config_.metadata_prefix);
    req.set_spec = std::move(set_spec);
    req.from = std::move(from);
    req.until = std::move(until);

    oai::RetryPolicy policy;
    policy.max_attempts = config_.retry_max_attempts;
    policy.base_backoff = std::chrono::milliseconds(config_.retry_base_backoff_ms);

    oai::Client client(transport, clock, policy);
    oai::PagePersister persister(config_.raw_dir, oai::PagePersister::harvest_id_for(req));
    oai::HarvestSummary summary = oai::run_harvest(client, persister, req, [&](const oai::OaiPage& page) {
        logger_.event("harvest", "page_persisted",
                      {{"records", page.records.size()},
                       {"token", page.resumption_token.value_or("")}});
        return true;
    });

    StageResult result;
    result.input = summary.records;
    result.processed = summary.records;
    result.details["pages"] = summary.pages;
    logger_.event("harvest", "stage_end",
                  {{"pages", summary.pages}, {"records", summary.records}});
    return result;
}

StageResult Pipeline::harvest(std::optional<std::string> set_spec, std::optional<std::string> from,
                              std::optional<std::string> until) {
    oai::HttpTransport transport(std::chrono::seconds(config_.http_connect_timeout_s),
                                 std::chrono::seconds(config_.http_read_timeout_s));
    oai::SystemClock clock;
    return harvest(transport, clock, std::move(set_spec), std::move(from), std::move(until));
}

StageResult Pipeline::parse() {
    config_.validate_for_stage("parse");
    require(fs::exists(config_.raw_dir), "parse requires harvested pages under " +
                                             config_.raw_dir.string());
    logger_.event("parse", "stage_start");
    StageResult result;

    std::vector<fs::path> pages;
    for (const auto& harvest_dir : fs::directory_iterator(config_.raw_dir)) {
        if (!harvest_dir.is_directory())
            continue;
        for (const auto& entry : fs::directory_iterator(harvest_dir.path())) {
            const fs::path& p = entry.path();
            if (p.extension() == ".xml" && p.filename().string().rfind("page-", 0) == 0)
                pages.push_back(p);
        }
    }
    require(!pages.empty(), "parse requires at least one harvested page");
    std::sort(pages.begin(), pages.end());

    store::Store& st = store();
    for (const fs::path& page_path : pages) {
        std::ifstream in(page_path, std::ios::binary);
        if (!in)
            throw Error(Errc::io, "cannot read page " + page_path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string bytes = buf.str();

        std::vector<RawRecord> records;
        try {
            records = parser::parse_page(bytes);
        } catch (const Error& e) {
            logger_.event("parse", "page_malformed",
                          {{"file", page_path.string()}, {"error", e.what()}});
            throw;
        }
        for (const RawRecord& raw : records) {
            ++result.input;
            if (raw.deleted) {
                ++result.skipped;
                logger_.record_skipped("parse", raw.oai_identifier, "deleted tombstone");
                continue;
            }
            try {
                ParsedRecord parsed = parser::parse_record_metadata(raw);
                st.upsert_record(parsed, raw.datestamp);
                ++result.processed;
            } catch (const Error& e) {
                if (e.code() != Errc::malformed_metadata)
                    throw;
                ++result.skipped;
                logger_.record_skipped("parse", raw.oai_identifier, e.what());
            }
        }
    }
    st.flush();
    auto marks = st.stage_marks();
    marks.parse_done = true;
    st.set_stage_marks(marks);
    result.details["pages"] = pages.size();
    logger_.event("parse", "stage_end",
                  {{"input", result.input},
                   {"processed", result.processed},
                   {"skipped", result.skipped}});
    return result;
}

StageResult Pipeline::clean() {
    store::Store& st = store();
    require(st.stage_marks().parse_done, "clean requires a parsed store (run parse first)");
    logger_.event("clean", "stage_start");

    StageResult result;
    std::vector<std::pair<std::string, CanonicalRecord>> updates;
    st.for_each({}, [&](const store::StoredRecord& r) {
        ++result.input;
        updates.emplace_back(r.oai_identifier, cleaning::canonicalize(r.parsed, config_.clean));
    });
    uint64_t modified = 0;
    for (auto& [oai, canonical] : updates) {
        auto outcome = st.set_canonical(oai, canonical);
        if (outcome == store::Store::CanonicalOutcome::Set)
            ++modified;
        ++result.processed;
    }
    st.flush();
    auto marks = st.stage_marks();
    marks.clean_done = true;
    st.set_stage_marks(marks);
    result.details["modified"] = modified;
    logger_.event("clean", "stage_end", {{"records", result.processed}, {"modified", modified}});
    return result;
}

StageResult Pipeline::resolve() {
    store::Store& st = store();
    require(st.stage_marks().clean_done, "resolve requires a cleaned store (run clean first)");
    config_.validate_for_stage("resolve");
    logger_.event("resolve", "stage_start");

    entity::Registries registries;
    registries.publishers = entity::AliasTable::load_csv(config_.publisher_registry);
    registries.data_centers = entity::DataCenterRegistry::load_csv(config_.datacenter_registry);

    StageResult result;
    uint64_t with_publisher = 0, resolved = 0, centers_mapped = 0;
    std::set<std::string> centers_seen;
    st.for_each({}, [&](const store::StoredRecord& r) {
        ++result.input;
        ++result.processed;
        if (r.parsed.publisher_raw) {
            ++with_publisher;
            if (registries.publishers.resolve(*r.parsed.publisher_raw))
                ++resolved;
        }
        centers_seen.insert(r.parsed.data_center_id);
    });
    for (const auto& symbol : centers_seen)
        if (!registries.data_centers.countries_for(symbol).empty())
            ++centers_mapped;

    json summary;
    summary["aliases"] = registries.publishers.alias_count();
    summary["entities"] = registries.publishers.entity_count();
    summary["records_with_publisher"] = with_publisher;
    summary["records_resolved"] = resolved;
    summary["data_centers_seen"] = centers_seen.size();
    summary["data_centers_mapped"] = centers_mapped;
    {
        std::ofstream out(config_.store_path / "resolution.json", std::ios::trunc);
        out << summary.dump(2) << "\n";
    }

    auto marks = st.stage_marks();
    marks.resolve_done = true;
    st.set_stage_marks(marks);
    result.details["records_with_publisher"] = with_publisher;
    result.details["records_resolved"] = resolved;
    logger_.event("resolve", "stage_end", summary);
    return result;
}

StageResult Pipeline::link() {
    store::Store& st = store();
    require(st.stage_marks().clean_done, "link requires a cleaned store (run clean first)");
    logger_.event("link", "stage_start");

    relation::ExternalIndex index;
    if (!config_.external_index.empty())
        index = relation::ExternalIndex::load(config_.external_index);
    relation::DoiLookup lookup = relation::DoiLookup::build(st);

    StageResult result;
    std::vector<relation::RelationEdge> edges;
    st.for_each({}, [&](const store::StoredRecord& r) {
        ++result.input;
        ++result.processed;
        auto record_edges = relation::extract_relation_edges(r);
        edges.insert(edges.end(), record_edges.begin(), record_edges.end());
    });
    relation::resolve_edges(edges, lookup, index);

    {
        std::ofstream out(edges_path(), std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(Errc::io, "cannot write " + edges_path().string());
        relation::write_edges_csv(out, edges);
    }

    auto marks = st.stage_marks();
    marks.link_done = true;
    st.set_stage_marks(marks);
    result.details["edges"] = edges.size();
    uint64_t internal = 0, external = 0;
    for (const auto& e : edges) {
        if (e.resolution == relation::Resolution::Internal)
            ++internal;
        else if (e.resolution == relation::Resolution::ExternalMatched)
            ++external;
    }
    result.details["edges_internal"] = internal;
    result.details["edges_external"] = external;
    logger_.event("link", "stage_end",
                  {{"edges", edges.size()}, {"internal", internal}, {"external", external}});
    return result;
}

namespace {

std::string fraction_str(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace

StageResult Pipeline::report() {
    store::Store& st = store();
    auto marks = st.stage_marks();
    require(marks.clean_done, "report requires a cleaned store (run clean first)");
    require(marks.resolve_done, "report requires resolved registries (run resolve first)");
    require(marks.link_done, "report requires linked relations (run link first)");
    config_.validate_for_stage("report");
    logger_.event("report", "stage_start");

    entity::Registries registries;
    registries.publishers = entity::AliasTable::load_csv(config_.publisher_registry);
    registries.data_centers = entity::DataCenterRegistry::load_csv(config_.datacenter_registry);

    const std::string stamp = data_datestamp();
    const fs::path dir = config_.report_dir;
    analytics::RecordSource all = analytics::source_from(st);
    StageResult result;
    result.input = st.size();
    result.processed = st.size();

    // field completeness, both denominators
    {
        analytics::CompletenessMatrix m = analytics::completeness_matrix(all);
        report::Report r;
        r.name = "completeness";
        r.columns = {"field", "count_present", "share_over_all_pct", "share_over_nonempty_pct"};
        for (const auto& [field, fc] : m.fields) {
            r.rows.push_back({field_name(field), std::to_string(fc.count_present),
                              analytics::format_pct(100.0 * fc.share_over_all),
                              analytics::format_pct(100.0 * fc.share_over_nonempty)});
            r.plot.emplace_back(field_name(field), fraction_str(fc.share_over_all));
        }
        r.denominators = {{"all_records", m.total_records},
                          {"nonempty_records", m.nonempty_records}};
        r.payload["empty_records"] = m.empty_records;
        r.payload["empty_share_over_all"] = m.empty_share;
        r.plot_x = "field";
        r.plot_y = "share_over_all";
        report::write_report(dir, r, stamp);
    }

    // resource types with top subtypes
    {
        analytics::ResourceTypeTable t =
            analytics::resource_type_table(all, static_cast<size_t>(config_.subtype_top_k));
        report::Report r;
        r.name = "resource_types";
        r.columns = {"resource_type", "records", "share_pct", "top_subtypes"};
        for (const auto& row : t.rows) {
            std::string subs;
            for (const auto& s : row.top_subtypes) {
                if (!subs.empty())
                    subs += "; ";
                subs += s.subtype + " (" + analytics::format_pct(100.0 * s.share) + "%)";
            }
            r.rows.push_back({resource_type_name(row.type), std::to_string(row.count),
                              analytics::format_pct(100.0 * row.share), subs});
            r.plot.emplace_back(resource_type_name(row.type), std::to_string(row.count));
        }
        r.denominators = {{"records_with_type", t.records_with_type}};
        r.plot_x = "resource_type";
        r.plot_y = "records";
        report::write_report(dir, r, stamp);
    }

    // countries, both attributions
    for (auto by : {entity::AttributionBy::data_center, entity::AttributionBy::publisher}) {
        analytics::CountryTable t = analytics::country_table(all, by, registries);
        report::Report r;
        r.name = by == entity::AttributionBy::data_center ? "countries_by_data_center"
                                                          : "countries_by_publisher";
        r.columns = {"country", "data_centers", "records", "data_records", "data_record_share_pct"};
        for (const auto& row : t.rows) {
            r.rows.push_back({row.country, std::to_string(row.data_center_count),
                              std::to_string(row.record_count), std::to_string(row.data_record_count),
                              analytics::format_pct(100.0 * row.data_record_share)});
            r.plot.emplace_back(row.country, std::to_string(row.record_count));
        }
        r.denominators = {{"records_attributed", t.records_attributed}};
        r.filters = {{"attribution", by == entity::AttributionBy::data_center ? "data_center"
                                                                              : "publisher"},
                     {"whole_counting", true}};
        r.plot_x = "country";
        r.plot_y = "records";
        report::write_report(dir, r, stamp);
    }

    // publisher types
    {
        analytics::PublisherTypeTable t = analytics::publisher_type_table(all, registries.publishers);
        report::Report r;
        r.name = "publisher_types";
        r.columns = {"publisher_type", "records", "data_record_share_pct", "publishers"};
        for (const auto& row : t.rows) {
            r.rows.push_back({row.label, std::to_string(row.record_count),
                              analytics::format_pct(100.0 * row.data_record_share),
                              std::to_string(row.publisher_count)});
            r.plot.emplace_back(row.label, std::to_string(row.record_count));
        }
        r.denominators = {{"records_with_publisher_and_type", t.records_considered}};
        r.plot_x = "publisher_type";
        r.plot_y = "records";
        report::write_report(dir, r, stamp);
    }

    // publication-year histogram over the configured window
    {
        analytics::YearHistogram h =
            analytics::year_histogram(all, config_.year_range_lo, config_.year_range_hi);
        report::Report r;
        r.name = "year_histogram";
        r.columns = {"year", "records"};
        for (const auto& [year, count] : h.counts) {
            r.rows.push_back({std::to_string(year), std::to_string(count)});
            r.plot.emplace_back(std::to_string(year), std::to_string(count));
        }
        r.denominators = {{"records_with_year_in_range",
                           st.size() - h.missing_year - h.excluded_out_of_range}};
        r.filters = {{"year_lo", h.lo}, {"year_hi", h.hi}};
        r.payload["excluded_out_of_range"] = h.excluded_out_of_range;
        r.payload["missing_year"] = h.missing_year;
        r.plot_x = "year";
        r.plot_y = "records";
        report::write_report(dir, r, stamp);
    }

    // date subtypes
    {
        analytics::DateSubtypeDistribution d = analytics::date_subtype_distribution(all);
        report::Report r;
        r.name = "date_subtypes";
        r.columns = {"date_kind", "records", "share_pct"};
        for (const auto& [kind, share] : d.kinds) {
            r.rows.push_back({date_kind_name(kind), std::to_string(share.count),
                              analytics::format_pct(100.0 * share.share)});
            r.plot.emplace_back(date_kind_name(kind), std::to_string(share.count));
        }
        r.denominators = {{"records_with_events", d.records_with_events}};
        r.plot_x = "date_kind";
        r.plot_y = "records";
        report::write_report(dir, r, stamp);
    }

    // relation statistics from the linked edges
    {
        std::ifstream in(edges_path(), std::ios::binary);
        if (!in)
            throw Error(Errc::stage_dependency, "missing edges file; run link first");
        std::vector<relation::RelationEdge> edges = relation::read_edges_csv(in);
        relation::RelationStats stats = relation::compute_relation_stats(st, edges);

        report::Report r;
        r.name = "relations";
        r.columns = {"metric", "value"};
        auto add = [&r](const std::string& k, const std::string& v) {
            r.rows.push_back({k, v});
        };
        add("records_nonempty", std::to_string(stats.records_total));
        add("records_all", std::to_string(stats.records_all));
        add("records_with_relations", std::to_string(stats.records_with_edges));
        add("share_with_relations_pct", analytics::format_pct(100.0 * stats.share_with_relations));
        add("share_with_relations_all_pct",
            analytics::format_pct(100.0 * stats.share_with_relations_all));
        add("edges_total", std::to_string(stats.edges_total));
        add("edges_internal", std::to_string(stats.edges_internal));
        add("edges_external_matched", std::to_string(stats.edges_external));
        add("edges_unresolved", std::to_string(stats.edges_unresolved));
        add("internal_share_pct", analytics::format_pct(100.0 * stats.internal_share));
        add("external_share_pct", analytics::format_pct(100.0 * stats.external_share));
        add("internal_dataset_share_pct",
            analytics::format_pct(100.0 * stats.internal_dataset_share));
        add("centers_total", std::to_string(stats.centers_total));
        add("centers_with_any_relations", std::to_string(stats.centers_with_any));
        add("centers_with_all_relations", std::to_string(stats.centers_with_all));
        r.denominators = {{"share_with_relations", "nonempty records"},
                          {"share_with_relations_all", "all records"},
                          {"internal_share", "all edges"},
                          {"internal_dataset_share", "internal edges"}};
        for (const auto& [n, c] : stats.edges_per_record)
            r.plot.emplace_back(std::to_string(n), std::to_string(c));
        r.plot_x = "edges_per_record";
        r.plot_y = "records";
        report::write_report(dir, r, stamp);
    }

    // data-center concentration
    {
        std::map<std::string, uint64_t> by_center = st.count_by(store::Dimension::data_center, {});
        report::Report r;
        r.name = "concentration_data_centers";
        r.columns = {"metric", "value"};
        if (!by_center.empty()) {
            analytics::ConcentrationStats c =
                analytics::concentration_stats(by_center, config_.concentration_threshold);
            r.rows.push_back({"threshold", fraction_str(c.threshold)});
            r.rows.push_back({"k_for_threshold", std::to_string(c.k_for_threshold)});
            r.rows.push_back({"top_share", fraction_str(c.top_share)});
            r.rows.push_back({"data_centers_total", std::to_string(by_center.size())});
        }
        r.denominators = {{"records", st.size()}};
        r.filters = {{"threshold", config_.concentration_threshold}};
        report::write_report(dir, r, stamp);
    }

    // quality warnings: flagged records, missing fields
    {
        std::map<std::string, uint64_t> flag_counts;
        uint64_t missing_type = 0, missing_year = 0, plausible_outside = 0;
        st.for_each({}, [&](const store::StoredRecord& rec) {
            if (!rec.canonical)
                return;
            for (auto f : rec.canonical->flags)
                ++flag_counts[quality_flag_name(f)];
            if (!rec.canonical->resource_type)
                ++missing_type;
            if (!rec.canonical->publication_year) {
                ++missing_year;
            } else if (*rec.canonical->publication_year < config_.clean.plausible_year_min ||
                       *rec.canonical->publication_year > config_.clean.plausible_year_max) {
                ++plausible_outside;
            }
        });
        report::Report r;
        r.name = "quality_warnings";
        r.columns = {"warning", "records"};
        for (const auto& [flag, count] : flag_counts)
            r.rows.push_back({flag, std::to_string(count)});
        r.rows.push_back({"MissingResourceType", std::to_string(missing_type)});
        r.rows.push_back({"MissingPublicationYear", std::to_string(missing_year)});
        r.rows.push_back({"YearOutsidePlausibleWindow", std::to_string(plausible_outside)});
        r.denominators = {{"records", st.size()}};
        r.filters = {{"plausible_year_min", config_.clean.plausible_year_min},
                     {"plausible_year_max", config_.clean.plausible_year_max}};
        report::write_report(dir, r, stamp);
    }

    logger_.event("report", "stage_end", {{"report_dir", dir.string()}});
    return result;
}

StageResult Pipeline::export_unresolved(const fs::path& out_path, size_t top_n) {
    store::Store& st = store();
    require(st.stage_marks().parse_done, "export-unresolved requires a parsed store");
    config_.validate_for_stage("export-unresolved");

    entity::AliasTable aliases = entity::AliasTable::load_csv(config_.publisher_registry);

    std::map<std::string, uint64_t> misses;
    StageResult result;
    st.for_each({}, [&](const store::StoredRecord& r) {
        ++result.input;
        if (!r.parsed.publisher_raw)
            return;
        ++result.processed;
        if (!aliases.resolve(*r.parsed.publisher_raw))
            ++misses[entity::AliasTable::normalize_alias(*r.parsed.publisher_raw)];
    });

    std::vector<std::pair<std::string, uint64_t>> ranked(misses.begin(), misses.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second)
            return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > top_n)
        ranked.resize(top_n);

    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(Errc::io, "cannot write " + out_path.string());
    out << "raw_name,records\n";
    for (const auto& [name, count] : ranked)
        out << csv::encode_row({name, std::to_string(count)}) << "\n";

    result.details["unresolved_names"] = misses.size();
    result.details["exported"] = ranked.size();
    logger_.event("export-unresolved", "stage_end",
                  {{"unresolved_names", misses.size()}, {"exported", ranked.size()}});
    return result;
}

} // namespace mh::pipeline

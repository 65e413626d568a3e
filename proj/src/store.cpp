#include "mh/store.hpp"

#include <json.hpp>

#include "mh/entity.hpp"
#include "mh/schema_parser.hpp"
#include "mh/serde.hpp"

namespace mh::store {

namespace fs = std::filesystem;
using nlohmann::json;

bool ScanFilter::matches(const StoredRecord& r) const {
    for (FieldName f : require_present)
        if (!r.parsed.has(f))
            return false;
    if (resource_type) {
        if (!r.canonical || r.canonical->resource_type != *resource_type)
            return false;
    }
    if (is_data_record) {
        if (!r.canonical || !r.canonical->is_data_record ||
            *r.canonical->is_data_record != *is_data_record)
            return false;
    }
    if (data_center && r.parsed.data_center_id != *data_center)
        return false;
    if (year_range) {
        if (!r.canonical || !r.canonical->publication_year)
            return false;
        int y = *r.canonical->publication_year;
        if (y < year_range->first || y > year_range->second)
            return false;
    }
    if (publisher_entity) {
        if (!aliases)
            throw Error(Errc::missing_registry, "publisher filter requires an alias table");
        if (!r.parsed.publisher_raw)
            return false;
        const entity::PublisherEntity* e = aliases->resolve(*r.parsed.publisher_raw);
        if (!e || e->entity_id != *publisher_entity)
            return false;
    }
    if (empty) {
        if (parser::detect_empty(r.parsed) != *empty)
            return false;
    }
    return true;
}

Store::Store(fs::path dir) : dir_(std::move(dir)), log_path_(dir_ / "log.ndjson") {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec)
        throw Error(Errc::storage, "cannot create store directory " + dir_.string());
    replay_log();
    log_.open(log_path_, std::ios::app | std::ios::binary);
    if (!log_)
        throw Error(Errc::storage, "cannot open store log " + log_path_.string());
}

Store::~Store() {
    if (log_.is_open())
        log_.flush();
}

void Store::replay_log() {
    if (!fs::exists(log_path_))
        return;
    std::ifstream in(log_path_, std::ios::binary);
    if (!in)
        throw Error(Errc::storage, "cannot read store log " + log_path_.string());
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception&) {
            // a torn trailing line from a crash is tolerated; anything else is corruption
            if (in.peek() == EOF)
                break;
            throw Error(Errc::storage,
                        "corrupt store log at line " + std::to_string(line_no));
        }
        std::string op = j.value("op", "");
        if (op == "u") {
            ParsedRecord p = parsed_record_from_json(j.at("parsed"));
            std::string ds = j.value("ds", "");
            auto it = records_.find(p.oai_identifier);
            if (it == records_.end()) {
                StoredRecord rec;
                rec.oai_identifier = p.oai_identifier;
                rec.latest_datestamp = ds;
                rec.parsed = std::move(p);
                rec.version_count = j.value("versions", 1u);
                records_.emplace(rec.oai_identifier, std::move(rec));
            } else if (ds > it->second.latest_datestamp) {
                it->second.latest_datestamp = ds;
                it->second.parsed = std::move(p);
                it->second.canonical.reset();
                it->second.version_count += 1;
            }
        } else if (op == "c") {
            auto it = records_.find(j.value("oai", ""));
            if (it != records_.end())
                it->second.canonical = canonical_record_from_json(j.at("canonical"));
        } else if (op == "marks") {
            marks_.parse_done = j.value("parse", false);
            marks_.clean_done = j.value("clean", false);
            marks_.resolve_done = j.value("resolve", false);
            marks_.link_done = j.value("link", false);
        }
    }
}

void Store::append_line(const std::string& line) {
    log_ << line << '\n';
    if (!log_)
        throw Error(Errc::storage, "write to store log failed");
}

UpsertOutcome Store::upsert_record(const ParsedRecord& p, const std::string& datestamp) {
    if (p.oai_identifier.empty())
        throw Error(Errc::invalid_argument, "record without OAI identifier");
    std::unique_lock lock(mutex_);
    auto it = records_.find(p.oai_identifier);
    UpsertOutcome outcome;
    if (it == records_.end()) {
        StoredRecord rec;
        rec.oai_identifier = p.oai_identifier;
        rec.latest_datestamp = datestamp;
        rec.parsed = p;
        rec.version_count = 1;
        records_.emplace(rec.oai_identifier, std::move(rec));
        outcome = UpsertOutcome::Inserted;
    } else if (datestamp > it->second.latest_datestamp) {
        it->second.latest_datestamp = datestamp;
        it->second.parsed = p;
        it->second.canonical.reset(); // stale clean output
        it->second.version_count += 1;
        outcome = UpsertOutcome::Replaced;
    } else {
        return UpsertOutcome::IgnoredStale;
    }
    json j;
    j["op"] = "u";
    j["ds"] = datestamp;
    j["parsed"] = to_json(p);
    append_line(j.dump());
    return outcome;
}

Store::CanonicalOutcome Store::set_canonical(const std::string& oai_identifier,
                                             const CanonicalRecord& c) {
    std::unique_lock lock(mutex_);
    auto it = records_.find(oai_identifier);
    if (it == records_.end())
        return CanonicalOutcome::UnknownRecord;
    if (it->second.canonical && *it->second.canonical == c)
        return CanonicalOutcome::Unchanged;
    it->second.canonical = c;
    json j;
    j["op"] = "c";
    j["oai"] = oai_identifier;
    j["canonical"] = to_json(c);
    append_line(j.dump());
    return CanonicalOutcome::Set;
}

void Store::for_each(const ScanFilter& filter,
                     const std::function<void(const StoredRecord&)>& fn) const {
    std::shared_lock lock(mutex_);
    for (const auto& [_, rec] : records_)
        if (filter.matches(rec))
            fn(rec);
}

std::optional<StoredRecord> Store::get(const std::string& oai_identifier) const {
    std::shared_lock lock(mutex_);
    auto it = records_.find(oai_identifier);
    if (it == records_.end())
        return std::nullopt;
    return it->second;
}

std::map<std::string, uint64_t> Store::count_by(Dimension dim, const ScanFilter& filter,
                                                const entity::Registries* registries) const {
    std::map<std::string, uint64_t> counts;
    for_each(filter, [&](const StoredRecord& r) {
        switch (dim) {
        case Dimension::data_center:
            counts[r.parsed.data_center_id.empty() ? kMissingBucket : r.parsed.data_center_id]++;
            break;
        case Dimension::resource_type:
            if (r.canonical && r.canonical->resource_type)
                counts[resource_type_name(*r.canonical->resource_type)]++;
            else
                counts[kMissingBucket]++;
            break;
        case Dimension::publication_year:
            if (r.canonical && r.canonical->publication_year)
                counts[std::to_string(*r.canonical->publication_year)]++;
            else
                counts[kMissingBucket]++;
            break;
        case Dimension::publisher_entity: {
            if (!r.parsed.publisher_raw) {
                counts[kMissingBucket]++;
                break;
            }
            if (!registries)
                throw Error(Errc::missing_registry, "publisher dimension requires registries");
            const entity::PublisherEntity* e =
                registries->publishers.resolve(*r.parsed.publisher_raw);
            counts[e ? e->entity_id : kNotFoundBucket]++;
            break;
        }
        case Dimension::country: {
            if (!registries)
                throw Error(Errc::missing_registry, "country dimension requires registries");
            for (const auto& c :
                 entity::attribute_countries(r, entity::AttributionBy::data_center, *registries))
                counts[c]++;
            break;
        }
        }
    });
    return counts;
}

uint64_t Store::size() const {
    std::shared_lock lock(mutex_);
    return records_.size();
}

void Store::flush() {
    std::unique_lock lock(mutex_);
    log_.flush();
}

void Store::compact() {
    std::unique_lock lock(mutex_);
    fs::path tmp = log_path_;
    tmp += ".compact";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(Errc::storage, "cannot write " + tmp.string());
        for (const auto& [_, rec] : records_) {
            json j;
            j["op"] = "u";
            j["ds"] = rec.latest_datestamp;
            j["versions"] = rec.version_count;
            j["parsed"] = to_json(rec.parsed);
            out << j.dump() << '\n';
            if (rec.canonical) {
                json cj;
                cj["op"] = "c";
                cj["oai"] = rec.oai_identifier;
                cj["canonical"] = to_json(*rec.canonical);
                out << cj.dump() << '\n';
            }
        }
        json mj;
        mj["op"] = "marks";
        mj["parse"] = marks_.parse_done;
        mj["clean"] = marks_.clean_done;
        mj["resolve"] = marks_.resolve_done;
        mj["link"] = marks_.link_done;
        out << mj.dump() << '\n';
        out.flush();
        if (!out)
            throw Error(Errc::storage, "compaction write failed");
    }
    log_.close();
    fs::rename(tmp, log_path_);
    log_.open(log_path_, std::ios::app | std::ios::binary);
    if (!log_)
        throw Error(Errc::storage, "cannot reopen store log after compaction");
}

void Store::export_ndjson(std::ostream& out) const {
    std::shared_lock lock(mutex_);
    for (const auto& [_, rec] : records_) {
        json j;
        j["oai"] = rec.oai_identifier;
        j["ds"] = rec.latest_datestamp;
        j["versions"] = rec.version_count;
        j["parsed"] = to_json(rec.parsed);
        j["canonical"] = rec.canonical ? to_json(*rec.canonical) : json(nullptr);
        out << j.dump() << '\n';
    }
}

uint64_t Store::import_ndjson(std::istream& in) {
    std::string line;
    uint64_t imported = 0;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(Errc::io, "bad import line " + std::to_string(line_no) + ": " + e.what());
        }
        ParsedRecord p = parsed_record_from_json(j.at("parsed"));
        upsert_record(p, j.value("ds", ""));
        if (j.contains("canonical") && !j["canonical"].is_null())
            set_canonical(p.oai_identifier, canonical_record_from_json(j["canonical"]));
        ++imported;
    }
    return imported;
}

StageMarks Store::stage_marks() const {
    std::shared_lock lock(mutex_);
    return marks_;
}

void Store::set_stage_marks(const StageMarks& m) {
    std::unique_lock lock(mutex_);
    marks_ = m;
    json j;
    j["op"] = "marks";
    j["parse"] = m.parse_done;
    j["clean"] = m.clean_done;
    j["resolve"] = m.resolve_done;
    j["link"] = m.link_done;
    append_line(j.dump());
    log_.flush();
}

} // namespace mh::store

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "mh/oai.hpp"
#include "mh/text.hpp"

namespace mh::oai {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string page_file_name(uint64_t seq) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "page-%06llu.xml", static_cast<unsigned long long>(seq));
    return buf;
}

void write_file_atomic(const fs::path& path, std::string_view data) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(Errc::io, "cannot write " + tmp.string());
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        out.flush();
        if (!out)
            throw Error(Errc::io, "short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string sanitize(std::string_view s) {
    std::string out;
    for (char c : s) {
        bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_';
        out.push_back(ok ? c : '_');
    }
    return out;
}

} // namespace

std::string PagePersister::harvest_id_for(const HarvestRequest& req) {
    std::string id = req.set_spec ? sanitize(*req.set_spec) : "all";
    if (req.from)
        id += "_" + sanitize(*req.from);
    if (req.until)
        id += "_" + sanitize(*req.until);
    return id;
}

PagePersister::PagePersister(fs::path raw_dir, std::string harvest_id)
    : dir_(raw_dir / harvest_id), harvest_id_(std::move(harvest_id)) {
    fs::create_directories(dir_);
    load_manifest();
}

void PagePersister::load_manifest() {
    fs::path manifest = dir_ / "manifest.json";
    if (!fs::exists(manifest))
        return;
    std::ifstream in(manifest);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(Errc::io, "corrupt manifest " + manifest.string() + ": " + e.what());
    }
    completed_ = j.value("completed", false);
    if (j.contains("base_url"))
        base_url_ = j["base_url"].get<std::string>();
    if (j.contains("metadata_prefix"))
        metadata_prefix_ = j["metadata_prefix"].get<std::string>();
    if (j.contains("set"))
        set_spec_ = j["set"].get<std::string>();
    if (j.contains("from"))
        from_ = j["from"].get<std::string>();
    if (j.contains("until"))
        until_ = j["until"].get<std::string>();
    for (const auto& pj : j.value("pages", json::array())) {
        PageEntry e;
        e.seq = pj.value("seq", 0ull);
        e.file = pj.value("file", "");
        if (pj.contains("token_used") && !pj["token_used"].is_null())
            e.token_used = pj["token_used"].get<std::string>();
        if (pj.contains("next_token") && !pj["next_token"].is_null())
            e.next_token = pj["next_token"].get<std::string>();
        e.response_date = pj.value("response_date", "");
        e.records = pj.value("records", 0ull);
        pages_.push_back(std::move(e));
    }
}

void PagePersister::write_manifest() const {
    json j;
    j["harvest_id"] = harvest_id_;
    j["completed"] = completed_;
    if (base_url_)
        j["base_url"] = *base_url_;
    if (metadata_prefix_)
        j["metadata_prefix"] = *metadata_prefix_;
    if (set_spec_)
        j["set"] = *set_spec_;
    if (from_)
        j["from"] = *from_;
    if (until_)
        j["until"] = *until_;
    j["pages"] = json::array();
    for (const auto& e : pages_) {
        json pj;
        pj["seq"] = e.seq;
        pj["file"] = e.file;
        pj["token_used"] = e.token_used ? json(*e.token_used) : json(nullptr);
        pj["next_token"] = e.next_token ? json(*e.next_token) : json(nullptr);
        pj["response_date"] = e.response_date;
        pj["records"] = e.records;
        j["pages"].push_back(std::move(pj));
    }
    write_file_atomic(dir_ / "manifest.json", j.dump(2) + "\n");
}

bool PagePersister::page_exists(uint64_t seq) const {
    return fs::exists(dir_ / page_file_name(seq));
}

void PagePersister::persist(uint64_t seq, const OaiPage& page, const HarvestRequest& original) {
    write_file_atomic(dir_ / page_file_name(seq), page.raw_xml);
    PageEntry e;
    e.seq = seq;
    e.file = page_file_name(seq);
    e.token_used = page.request_echo.resumption_token;
    e.next_token = page.resumption_token;
    e.response_date = page.response_date;
    e.records = page.records.size();
    pages_.push_back(std::move(e));
    base_url_ = original.base_url;
    metadata_prefix_ = original.metadata_prefix;
    set_spec_ = original.set_spec;
    from_ = original.from;
    until_ = original.until;
    write_manifest();
}

void PagePersister::mark_completed() {
    completed_ = true;
    write_manifest();
}

std::optional<std::string> PagePersister::resume_token() const {
    if (completed_ || pages_.empty())
        return std::nullopt;
    return pages_.back().next_token;
}

uint64_t PagePersister::pages_persisted() const {
    return pages_.size();
}

bool PagePersister::completed() const {
    return completed_;
}

HarvestSummary run_harvest(Client& client, PagePersister& persister, const HarvestRequest& req,
                           const PageSink& sink) {
    if (persister.completed())
        return {persister.pages_persisted(), 0, HarvestSummary::Termination::end_of_list};

    HarvestRequest effective = req;
    uint64_t resumed_pages = 0;
    if (persister.pages_persisted() > 0) {
        auto token = persister.resume_token();
        if (!token) {
            // last persisted page ended the chain but completion was not recorded
            persister.mark_completed();
            return {persister.pages_persisted(), 0, HarvestSummary::Termination::end_of_list};
        }
        effective = req.with_token(*token);
        resumed_pages = persister.pages_persisted();
    }

    uint64_t seq = resumed_pages;
    HarvestSummary summary = client.iterate_list_records(effective, [&](const OaiPage& page) {
        ++seq;
        persister.persist(seq, page, req);
        if (sink)
            return sink(page);
        return true;
    });
    if (summary.terminated_by == HarvestSummary::Termination::end_of_list)
        persister.mark_completed();
    summary.pages += resumed_pages;
    return summary;
}

} // namespace mh::oai

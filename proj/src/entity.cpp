#include "mh/entity.hpp"

#include <algorithm>
#include <fstream>

#include "mh/csv.hpp"
#include "mh/store.hpp"
#include "mh/text.hpp"

namespace mh::entity {

const char* entity_type_name(EntityType t) {
    switch (t) {
    case EntityType::ThematicRepository: return "ThematicRepository";
    case EntityType::InstitutionalRepository: return "InstitutionalRepository";
    case EntityType::ResearchBody: return "ResearchBody";
    case EntityType::MultidisciplinaryRepository: return "MultidisciplinaryRepository";
    case EntityType::ScientificPublisher: return "ScientificPublisher";
    case EntityType::NationalRepository: return "NationalRepository";
    case EntityType::Firm: return "Firm";
    case EntityType::ProfessionalBody: return "ProfessionalBody";
    case EntityType::Conference: return "Conference";
    case EntityType::Individual: return "Individual";
    case EntityType::EducationalBody: return "EducationalBody";
    }
    return "?";
}

std::optional<EntityType> entity_type_from(std::string_view name) {
    std::string key = text::squash_key(name);
    for (int i = 0; i < kEntityTypeCount; ++i) {
        auto t = static_cast<EntityType>(i);
        if (key == text::squash_key(entity_type_name(t)))
            return t;
    }
    return std::nullopt;
}

std::pair<std::string, std::string> parse_data_center_symbol(std::string_view symbol) {
    size_t dot = symbol.find('.');
    if (dot == std::string_view::npos)
        throw Error(Errc::malformed_symbol, "data-center symbol without dot: " + std::string(symbol));
    std::string allocator(symbol.substr(0, dot));
    std::string repository(symbol.substr(dot + 1));
    if (allocator.empty() || repository.empty())
        throw Error(Errc::malformed_symbol, "empty part in data-center symbol: " + std::string(symbol));
    return {std::move(allocator), std::move(repository)};
}

std::string AliasTable::normalize_alias(std::string_view raw) {
    return text::fold_ws(raw);
}

void AliasTable::add(const std::string& raw_name, const PublisherEntity& entity) {
    std::string key = normalize_alias(raw_name);
    auto [it, inserted] = aliases_.emplace(key, entity.entity_id);
    if (!inserted && it->second != entity.entity_id)
        throw Error(Errc::config, "alias \"" + raw_name + "\" maps to two entities: " +
                                      it->second + " and " + entity.entity_id);
    auto [eit, new_entity] = entities_.emplace(entity.entity_id, entity);
    if (!new_entity && eit->second.entity_type != entity.entity_type)
        throw Error(Errc::config, "entity " + entity.entity_id + " declared with two types");
}

AliasTable AliasTable::load_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::missing_registry, "cannot open publisher registry " + path.string());
    AliasTable table;
    std::vector<std::string> row;
    bool header = true;
    size_t line = 0;
    while (csv::read_row(in, row)) {
        ++line;
        if (header) {
            header = false;
            if (row.size() < 5 || text::fold_ws(row[0]) != "raw_name")
                throw Error(Errc::config, "publisher registry " + path.string() +
                                              ": expected header raw_name,entity_id,"
                                              "canonical_name,entity_type,countries");
            continue;
        }
        if (row.size() == 1 && text::trim(row[0]).empty())
            continue;
        if (row.size() < 5)
            throw Error(Errc::config, "publisher registry line " + std::to_string(line) +
                                          ": expected 5 columns");
        auto type = entity_type_from(row[3]);
        if (!type)
            throw Error(Errc::config, "publisher registry line " + std::to_string(line) +
                                          ": unknown entity type \"" + row[3] + "\"");
        PublisherEntity e;
        e.entity_id = std::string(text::trim(row[1]));
        e.canonical_name = std::string(text::trim(row[2]));
        e.entity_type = *type;
        for (const auto& c : text::split_any(row[4], ";"))
            e.countries.push_back(std::string(text::trim(c)));
        if (e.entity_id.empty())
            throw Error(Errc::config, "publisher registry line " + std::to_string(line) +
                                          ": empty entity_id");
        table.add(row[0], e);
    }
    return table;
}

const PublisherEntity* AliasTable::resolve(std::string_view raw) const {
    auto it = aliases_.find(normalize_alias(raw));
    if (it == aliases_.end())
        return nullptr;
    auto eit = entities_.find(it->second);
    return eit == entities_.end() ? nullptr : &eit->second;
}

const PublisherEntity* AliasTable::entity(const std::string& entity_id) const {
    auto it = entities_.find(entity_id);
    return it == entities_.end() ? nullptr : &it->second;
}

void DataCenterRegistry::add(const std::string& symbol, std::vector<std::string> countries) {
    centers_[symbol] = std::move(countries);
}

DataCenterRegistry DataCenterRegistry::load_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::missing_registry, "cannot open data-center registry " + path.string());
    DataCenterRegistry reg;
    std::vector<std::string> row;
    bool header = true;
    size_t line = 0;
    while (csv::read_row(in, row)) {
        ++line;
        if (header) {
            header = false;
            if (row.size() < 2 || text::fold_ws(row[0]) != "symbol")
                throw Error(Errc::config, "data-center registry " + path.string() +
                                              ": expected header symbol,countries");
            continue;
        }
        if (row.size() == 1 && text::trim(row[0]).empty())
            continue;
        if (row.size() < 2)
            throw Error(Errc::config, "data-center registry line " + std::to_string(line) +
                                          ": expected 2 columns");
        std::vector<std::string> countries;
        for (const auto& c : text::split_any(row[1], ";"))
            countries.push_back(std::string(text::trim(c)));
        reg.add(std::string(text::trim(row[0])), std::move(countries));
    }
    return reg;
}

std::vector<std::string> DataCenterRegistry::countries_for(std::string_view symbol) const {
    auto it = centers_.find(symbol);
    if (it == centers_.end())
        return {};
    return it->second;
}

std::pair<CoverageRanking, size_t> rank_publishers_by_coverage(
    const std::map<std::string, uint64_t>& counts, double target) {
    if (counts.empty())
        throw Error(Errc::empty_input, "no publisher counts to rank");
    if (!(target > 0.0) || target > 1.0)
        throw Error(Errc::invalid_argument, "coverage target must be in (0, 1]");

    CoverageRanking ranking;
    ranking.rows.reserve(counts.size());
    for (const auto& [name, count] : counts) {
        ranking.rows.push_back({name, count, 0.0});
        ranking.total_records += count;
    }
    std::sort(ranking.rows.begin(), ranking.rows.end(), [](const CoverageRow& a, const CoverageRow& b) {
        if (a.record_count != b.record_count)
            return a.record_count > b.record_count;
        return a.publisher_raw < b.publisher_raw;
    });

    uint64_t running = 0;
    size_t cut = ranking.rows.size();
    bool cut_found = false;
    for (size_t i = 0; i < ranking.rows.size(); ++i) {
        running += ranking.rows[i].record_count;
        ranking.rows[i].cumulative_share =
            ranking.total_records ? static_cast<double>(running) / static_cast<double>(ranking.total_records)
                                  : 0.0;
        if (!cut_found && ranking.rows[i].cumulative_share >= target) {
            cut = i + 1;
            cut_found = true;
        }
    }
    return {std::move(ranking), cut};
}

std::vector<std::string> attribute_countries(const store::StoredRecord& record, AttributionBy by,
                                             const Registries& registries) {
    std::vector<std::string> countries;
    if (by == AttributionBy::data_center) {
        countries = registries.data_centers.countries_for(record.parsed.data_center_id);
    } else {
        if (record.parsed.publisher_raw) {
            const PublisherEntity* e = registries.publishers.resolve(*record.parsed.publisher_raw);
            if (e)
                countries = e->countries;
        }
    }
    countries.erase(std::remove_if(countries.begin(), countries.end(),
                                   [](const std::string& c) { return c.empty(); }),
                    countries.end());
    if (countries.empty())
        countries.push_back(store::kUnknownCountry);
    return countries;
}

} // namespace mh::entity
